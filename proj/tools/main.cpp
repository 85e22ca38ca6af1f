// Command-line front end: parse geometry files, run the immobilization
// pipeline, and emit text or JSON reports.
//
// Exit codes: 0 ok, 2 parse failure, 3 geometry violation, 4 oracle/algebra
// disagreement or internal check, 5 infeasible centred synthesis, 6 a
// displacement slid a contact off its face, 7 built-in example regression.
// Text output rounds to 9 significant digits; JSON keeps all 17.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "immob/immob.hpp"

using namespace immob;

namespace {

constexpr int kExitParse = 2;
constexpr int kExitGeometry = 3;
constexpr int kExitDisagreement = 4;
constexpr int kExitInfeasible = 5;
constexpr int kExitLeftFace = 6;
constexpr int kExitRegression = 7;

njson load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    njson j;
    in >> j;
    return j;
  } catch (const njson::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string fmt9(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

std::string fmt_vec(const Vec& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += fmt9(v[i]);
  }
  return out + ")";
}

void print_matrix(const Mat& m, const std::string& indent) {
  for (int i = 0; i < m.rows(); ++i) {
    std::string line = indent + "[";
    for (int j = 0; j < m.cols(); ++j) {
      if (j) line += ", ";
      line += fmt9(m(i, j));
    }
    std::cout << line << "]\n";
  }
}

void print_verdict(const ImmobilizationVerdict& v) {
  std::cout << "symmetric:         " << (v.symmetric ? "yes" : "no")
            << " (defect " << fmt9(v.symmetric_defect) << ")\n";
  if (v.symmetric) {
    std::cout << "APD:               " << (v.apd ? "yes" : "no") << "\n";
    std::cout << "margin:            " << fmt9(v.margin) << "\n";
    std::cout << "eigenvalues:       " << fmt_vec(v.eigenvalues) << "\n";
  }
  std::cout << "strictly interior: " << (v.strictly_interior ? "yes" : "no")
            << "\n";
  std::cout << "immobilizes:       " << (v.immobilizes ? "YES" : "NO") << "\n";
}

void print_oracle(const OracleReport& rep) {
  const char* name = rep.verdict == OracleVerdict::ConfirmImmobilizing
                         ? "confirm"
                     : rep.verdict == OracleVerdict::RefuteWithWitness
                         ? "refute"
                         : "inconclusive";
  std::cout << "oracle verdict:    " << name << " (" << rep.note << ")\n";
  std::cout << "oracle samples:    " << rep.samples << "\n";
  std::cout << "worst psi:         " << fmt9(rep.worst_psi) << "\n";
  if (rep.witness) {
    std::cout << "witness psi:       " << fmt9(rep.witness_psi) << "\n";
    std::cout << "witness generator:\n";
    print_matrix(rep.witness->S, "  ");
  }
}

// True when the sampling oracle contradicts the algebraic verdict.  An
// inconclusive oracle never disagrees.
bool oracle_disagrees(const ImmobilizationVerdict& v, const OracleReport& rep) {
  if (v.immobilizes && rep.verdict == OracleVerdict::RefuteWithWitness)
    return true;
  if (!v.immobilizes && rep.verdict == OracleVerdict::ConfirmImmobilizing)
    return true;
  return false;
}

struct CommonFlags {
  bool json = false;
  bool oracle = false;
  double tol_sym = -1.0;
  double tol_apd = -1.0;
  double epsilon = 1e-3;
  std::uint64_t seed = 0;

  Tolerances tolerances() const {
    Tolerances tol;
    if (tol_sym > 0.0) tol.sym = tol_sym;
    if (tol_apd > 0.0) tol.apd = tol_apd;
    return tol;
  }

  OracleConfig oracle_config() const {
    OracleConfig cfg;
    cfg.epsilon = epsilon;
    cfg.seed = seed;
    return cfg;
  }
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_oracle) {
  cmd->add_flag("--json", f.json, "emit a JSON report instead of text");
  cmd->add_option("--tol-sym", f.tol_sym,
                  "symmetry tolerance, relative to max |A_ij|");
  cmd->add_option("--tol-apd", f.tol_apd,
                  "pair-sum tolerance, relative to |A|");
  if (with_oracle) {
    cmd->add_flag("--oracle", f.oracle,
                  "cross-check the verdict with the sampling oracle");
    cmd->add_option("--epsilon", f.epsilon, "oracle probe size");
    cmd->add_option("--seed", f.seed, "oracle random seed");
  }
}

// ---------------------------------------------------------------------------
// normals
// ---------------------------------------------------------------------------

int cmd_normals(const std::string& input, const CommonFlags& f) {
  const Tolerances tol = f.tolerances();
  const Simplex s = parse_simplex(load_json(input), tol);
  const NormalFan fan = normals_from_vertices(s);

  if (f.json) {
    Jv o = jv_fan(fan);
    o.set("volume", s.vol);
    Jv fv = Jv::array();
    for (int i = 0; i <= s.n; ++i) fv.push(face_volume(s, i));
    o.set("face_volumes", std::move(fv));
    std::cout << o.dump() << "\n";
    return 0;
  }

  std::cout << "n:      " << s.n << "\n";
  std::cout << "volume: " << fmt9(s.vol) << "\n";
  for (int i = 0; i <= s.n; ++i) {
    std::cout << "k[" << i << "] = " << fmt_vec(fan.normal(i))
              << "  kappa[" << i << "] = " << fmt9(fan.kappa(i))
              << "  face volume = " << fmt9(face_volume(s, i)) << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// check
// ---------------------------------------------------------------------------

int cmd_check(const std::string& input, const std::string& contacts_path,
              const CommonFlags& f) {
  const Tolerances tol = f.tolerances();
  const Simplex s = parse_simplex(load_json(input), tol);
  const ContactSet c = parse_contacts(load_json(contacts_path), s, tol);
  const ImmobilizationVerdict v = immobilizes(s, c, tol);

  OracleReport rep;
  if (f.oracle) rep = falsify(s, c, f.oracle_config(), tol);

  if (f.json) {
    Jv o = Jv::object();
    o.set("verdict", jv_verdict(v));
    if (f.oracle) o.set("oracle", jv_oracle(rep));
    std::cout << o.dump() << "\n";
  } else {
    print_verdict(v);
    if (f.oracle) print_oracle(rep);
  }

  if (f.oracle && oracle_disagrees(v, rep)) {
    std::cerr << "error: oracle contradicts the algebraic verdict\n";
    return kExitDisagreement;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// synthesize
// ---------------------------------------------------------------------------

int cmd_synthesize(const std::string& input, const std::string& mode,
                   const std::string& z_str, const CommonFlags& f) {
  const Tolerances tol = f.tolerances();
  const Simplex s = parse_simplex(load_json(input), tol);

  if (mode == "centroid") {
    const ContactSet g = centroid_contacts(s, tol);
    std::cout << jv_contacts_barycentric(g).dump() << "\n";
    return 0;
  }

  CentredContacts cc;
  if (z_str.empty()) {
    cc = centred_feasible_witness(s, tol);
  } else {
    Vec z;
    std::stringstream ss(z_str);
    std::string part;
    while (std::getline(ss, part, ',')) {
      try {
        z.push_back(std::stod(part));
      } catch (const std::exception&) {
        throw ParseError("--z: expected comma-separated numbers");
      }
    }
    cc = centred_contacts(s, z, tol);
  }

  Jv o = jv_contacts_barycentric(cc.set);
  Jv w = Jv::object();
  w.set("z", jv_vec(cc.witness.z));
  w.set("mu", jv_vec(cc.witness.mu));
  w.set("t", jv_vec(cc.witness.t));
  o.set("witness", std::move(w));
  std::cout << o.dump() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// displace
// ---------------------------------------------------------------------------

int cmd_displace(const std::string& input, const std::string& contacts_path,
                 const std::string& coeffs_path, const CommonFlags& f) {
  const Tolerances tol = f.tolerances();
  const Simplex s = parse_simplex(load_json(input), tol);
  const ContactSet c = parse_contacts(load_json(contacts_path), s, tol);
  const auto coeffs = parse_coeffs(load_json(coeffs_path));

  const NormalFan fan = normals_from_vertices(s);
  const PenetrationMatrix before = penetration_matrix(fan, c, tol);
  if (!before.symmetric)
    throw BadInput(
        "displace: the starting contact set must have a symmetric "
        "penetration matrix");

  const ContactSet moved = apply_displacement(s, c, coeffs, tol);
  const PenetrationMatrix after = penetration_matrix(fan, moved, tol);
  const double delta = after.symmetric
                           ? after.min_pair_sum - before.min_pair_sum
                           : std::numeric_limits<double>::quiet_NaN();

  if (f.json) {
    Jv o = Jv::object();
    o.set("contacts", jv_contacts_barycentric(moved));
    o.set("old_eigenvalues", jv_vec(before.eigenvalues));
    o.set("new_eigenvalues", jv_vec(after.eigenvalues));
    o.set("min_pair_sum_delta", delta);
    o.set("verdict", jv_verdict(immobilizes(s, moved, tol)));
    std::cout << o.dump() << "\n";
    return 0;
  }

  std::cout << "old eigenvalues: " << fmt_vec(before.eigenvalues) << "\n";
  std::cout << "new eigenvalues: "
            << (after.symmetric ? fmt_vec(after.eigenvalues)
                                : std::string("(asymmetric)"))
            << "\n";
  std::cout << "min pair sum:    " << fmt9(before.min_pair_sum) << " -> "
            << fmt9(after.min_pair_sum) << " (delta " << fmt9(delta) << ")\n";
  std::cout << jv_contacts_barycentric(moved).dump() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// built-in reference example
// ---------------------------------------------------------------------------

int cmd_paper_example(const CommonFlags& f) {
  const Tolerances tol = f.tolerances();
  const ReferenceCase rc = reference_case(tol);
  const NormalFan fan = normals_from_vertices(rc.simplex);
  const PenetrationMatrix pm = penetration_matrix(fan, rc.contacts, tol);
  const ImmobilizationVerdict v = immobilizes(rc.simplex, rc.contacts, tol);

  // Reproduction targets live in the publication scale of the embedded data.
  const Mat scaled_a = rc.published_scale * pm.A;
  const double matrix_err = (scaled_a - rc.expected_a).max_abs();
  double normal_err = 0.0;
  std::vector<Vec> scaled_normals(5);
  Vec scaled_kappa(5);
  for (int i = 0; i <= 4; ++i) {
    scaled_normals[i] = rc.published_scale * fan.normal(i);
    scaled_kappa[i] = rc.published_scale * fan.kappa(i);
    for (int r = 0; r < 4; ++r)
      normal_err = std::max(
          normal_err,
          std::abs(scaled_normals[i][r] - rc.expected_normals[i][r]));
  }

  const bool verdict_ok = v.symmetric && !v.apd && !v.immobilizes;
  const bool ok = matrix_err <= 1e-9 && normal_err <= 1e-9 && verdict_ok;

  OracleReport rep;
  if (f.oracle) rep = falsify(rc.simplex, rc.contacts, f.oracle_config(), tol);

  if (f.json) {
    Jv o = Jv::object();
    o.set("n", rc.simplex.n);
    o.set("volume", rc.simplex.vol);
    o.set("publication_scale", rc.published_scale);
    o.set("vertices", jv_points(rc.simplex.vertices()));
    o.set("normals", jv_points(scaled_normals));
    o.set("kappa", jv_vec(scaled_kappa));
    o.set("penetration_matrix", jv_mat_rows(scaled_a));
    o.set("matrix_error", matrix_err);
    o.set("normal_error", normal_err);
    o.set("immobilizes", v.immobilizes);
    o.set("verdict", jv_verdict(v));
    o.set("reproduction_ok", ok);
    if (f.oracle) o.set("oracle", jv_oracle(rep));
    std::cout << o.dump() << "\n";
  } else {
    std::cout << "penetration matrix (publication scale):\n";
    print_matrix(scaled_a, "  ");
    std::cout << "matrix error:      " << fmt9(matrix_err) << "\n";
    std::cout << "normal error:      " << fmt9(normal_err) << "\n";
    print_verdict(v);
    if (f.oracle) print_oracle(rep);
    std::cout << "reproduction:      " << (ok ? "OK" : "MISMATCH") << "\n";
  }

  if (!ok) {
    std::cerr << "error: built-in example no longer reproduces its "
                 "published values\n";
    return kExitRegression;
  }
  if (f.oracle && rep.verdict != OracleVerdict::RefuteWithWitness) {
    std::cerr << "error: oracle failed to refute the built-in example\n";
    return kExitDisagreement;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Immobilization of a simplex by face contacts: normal fans, verdicts, "
      "synthesis, displacements, and a sampling oracle."};
  app.require_subcommand(1);

  CommonFlags f;
  std::string input, contacts_path, coeffs_path;
  std::string mode = "centroid";
  std::string z_str;

  CLI::App* normals =
      app.add_subcommand("normals", "outward normal fan of a simplex");
  normals->add_option("--input", input, "simplex JSON file")->required();
  add_common(normals, f, false);

  CLI::App* check =
      app.add_subcommand("check", "immobilization verdict for a contact set");
  check->add_option("--input", input, "simplex JSON file")->required();
  check->add_option("--contacts", contacts_path, "contact set JSON file")
      ->required();
  add_common(check, f, true);

  CLI::App* synthesize = app.add_subcommand(
      "synthesize", "construct an immobilizing contact set");
  synthesize->add_option("--input", input, "simplex JSON file")->required();
  synthesize->add_option("--mode", mode, "centroid or centred")
      ->check(CLI::IsMember({"centroid", "centred"}));
  synthesize->add_option("--z", z_str,
                         "centre for centred mode, comma-separated");
  add_common(synthesize, f, false);

  CLI::App* displace = app.add_subcommand(
      "displace", "slide contacts along the symmetry-keeping basis");
  displace->add_option("--input", input, "simplex JSON file")->required();
  displace->add_option("--contacts", contacts_path, "contact set JSON file")
      ->required();
  displace->add_option("--coeffs", coeffs_path, "displacement coefficients")
      ->required();
  add_common(displace, f, false);

  CLI::App* paper = app.add_subcommand(
      "paper-example", "reproduce the built-in published example");
  add_common(paper, f, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitParse;
  }

  try {
    if (normals->parsed()) return cmd_normals(input, f);
    if (check->parsed()) return cmd_check(input, contacts_path, f);
    if (synthesize->parsed()) return cmd_synthesize(input, mode, z_str, f);
    if (displace->parsed())
      return cmd_displace(input, contacts_path, coeffs_path, f);
    return cmd_paper_example(f);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const NotCentredFeasible& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    for (const auto& [i, j] : e.negative_weights)
      std::cerr << "  weight (" << i << ", " << j << ") not positive\n";
    for (int j : e.negative_offsets)
      std::cerr << "  offset " << j << " not positive\n";
    return kExitInfeasible;
  } catch (const LeftFace& e) {
    std::cerr << "left face: " << e.what() << " (worst weight "
              << fmt9(e.worst) << ")\n";
    return kExitLeftFace;
  } catch (const InternalCheckFailure& e) {
    std::cerr << "internal check failure: " << e.what() << "\n";
    return kExitDisagreement;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitGeometry;
  }
}
