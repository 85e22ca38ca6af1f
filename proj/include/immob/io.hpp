#pragma once

// JSON input/output for the CLI and for round-trip tests.
//
// Parsing uses nlohmann::json; emission goes through a small writer of our
// own so that output is deterministic byte-for-byte across platforms:
// numbers are printed with %.17g (shortest round-trip is not guaranteed by
// every library version), keys keep insertion order, and non-finite values
// become null.

#include <cstdio>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "immob/contact.hpp"
#include "immob/errors.hpp"
#include "immob/mat.hpp"
#include "immob/oracle.hpp"
#include "immob/simplex.hpp"
#include "immob/synthesis.hpp"

namespace immob {

using njson = nlohmann::json;

// ---------------------------------------------------------------------------
// Writer
// ---------------------------------------------------------------------------

class Jv {
 public:
  Jv() : node_(nullptr) {}
  Jv(double x) : node_(x) {}              // NOLINT: implicit by design
  Jv(int x) : node_(static_cast<double>(x)) {}
  Jv(long x) : node_(static_cast<double>(x)) {}
  Jv(bool b) : node_(b) {}
  Jv(const char* s) : node_(std::string(s)) {}
  Jv(std::string s) : node_(std::move(s)) {}

  static Jv array() {
    Jv v;
    v.node_ = Arr{};
    return v;
  }

  static Jv object() {
    Jv v;
    v.node_ = Obj{};
    return v;
  }

  Jv& push(Jv v) {
    std::get<Arr>(node_).push_back(std::make_shared<Jv>(std::move(v)));
    return *this;
  }

  Jv& set(std::string key, Jv v) {
    std::get<Obj>(node_).emplace_back(std::move(key),
                                      std::make_shared<Jv>(std::move(v)));
    return *this;
  }

  std::string dump() const {
    std::string out;
    write(out);
    return out;
  }

 private:
  using Arr = std::vector<std::shared_ptr<Jv>>;
  using Obj = std::vector<std::pair<std::string, std::shared_ptr<Jv>>>;
  std::variant<std::nullptr_t, double, bool, std::string, Arr, Obj> node_;

  static void write_escaped(const std::string& s, std::string& out) {
    out += '"';
    for (char ch : s) {
      switch (ch) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default:
          if (static_cast<unsigned char>(ch) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\u%04x", ch);
            out += buf;
          } else {
            out += ch;
          }
      }
    }
    out += '"';
  }

  void write(std::string& out) const {
    if (std::holds_alternative<std::nullptr_t>(node_)) {
      out += "null";
    } else if (std::holds_alternative<double>(node_)) {
      const double x = std::get<double>(node_);
      if (!std::isfinite(x)) {
        out += "null";
        return;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", x);
      out += buf;
    } else if (std::holds_alternative<bool>(node_)) {
      out += std::get<bool>(node_) ? "true" : "false";
    } else if (std::holds_alternative<std::string>(node_)) {
      write_escaped(std::get<std::string>(node_), out);
    } else if (std::holds_alternative<Arr>(node_)) {
      out += '[';
      const Arr& a = std::get<Arr>(node_);
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (i) out += ',';
        a[i]->write(out);
      }
      out += ']';
    } else {
      out += '{';
      const Obj& o = std::get<Obj>(node_);
      for (std::size_t i = 0; i < o.size(); ++i) {
        if (i) out += ',';
        write_escaped(o[i].first, out);
        out += ':';
        o[i].second->write(out);
      }
      out += '}';
    }
  }
};

inline Jv jv_vec(const Vec& v) {
  Jv a = Jv::array();
  for (double x : v) a.push(x);
  return a;
}

inline Jv jv_mat_rows(const Mat& m) {
  Jv a = Jv::array();
  for (int i = 0; i < m.rows(); ++i) a.push(jv_vec(m.row(i)));
  return a;
}

inline Jv jv_points(const std::vector<Vec>& pts) {
  Jv a = Jv::array();
  for (const Vec& p : pts) a.push(jv_vec(p));
  return a;
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace detail {

inline Vec parse_vec(const njson& j, int want, const char* what) {
  if (!j.is_array() || (want >= 0 && static_cast<int>(j.size()) != want))
    throw ParseError(std::string(what) + ": expected an array" +
                     (want >= 0 ? " of length " + std::to_string(want) : ""));
  Vec v;
  v.reserve(j.size());
  for (const auto& x : j) {
    if (!x.is_number()) throw ParseError(std::string(what) + ": non-number entry");
    v.push_back(x.get<double>());
  }
  return v;
}

inline std::vector<Vec> parse_vec_list(const njson& j, int count, int dim,
                                       const char* what) {
  if (!j.is_array() || (count >= 0 && static_cast<int>(j.size()) != count))
    throw ParseError(std::string(what) + ": expected " +
                     std::to_string(count) + " rows");
  std::vector<Vec> out;
  out.reserve(j.size());
  for (const auto& row : j) out.push_back(parse_vec(row, dim, what));
  return out;
}

}  // namespace detail

inline Simplex parse_simplex(const njson& j, const Tolerances& tol = {}) {
  if (!j.is_object() || !j.contains("n") || !j.contains("vertices"))
    throw ParseError("simplex: need keys \"n\" and \"vertices\"");
  if (!j["n"].is_number_integer())
    throw ParseError("simplex: \"n\" must be an integer");
  const int n = j["n"].get<int>();
  if (n < 1 || n > 20) throw ParseError("simplex: n out of range [1, 20]");
  const auto verts = detail::parse_vec_list(j["vertices"], n + 1, n,
                                            "simplex vertices");
  return make_simplex(verts, tol);
}

inline NormalFan parse_fan(const njson& j, const Tolerances& tol = {}) {
  if (!j.is_object() || !j.contains("n") || !j.contains("normals") ||
      !j.contains("kappa"))
    throw ParseError("fan: need keys \"n\", \"normals\", \"kappa\"");
  const int n = j["n"].get<int>();
  const auto normals = detail::parse_vec_list(j["normals"], n + 1, n,
                                              "fan normals");
  const Vec kappa = detail::parse_vec(j["kappa"], n + 1, "fan kappa");
  return make_normal_fan(normals, kappa, tol);
}

inline ContactSet parse_contacts(const njson& j, const Simplex& s,
                                 const Tolerances& tol = {}) {
  if (!j.is_object())
    throw ParseError("contacts: expected an object");
  const bool has_pts = j.contains("points");
  const bool has_bar = j.contains("barycentric");
  if (has_pts == has_bar)
    throw ParseError(
        "contacts: need exactly one of \"points\" or \"barycentric\"");
  if (has_pts) {
    const auto pts = detail::parse_vec_list(j["points"], s.n + 1, s.n,
                                            "contact points");
    return contacts_from_points(s, pts, tol);
  }
  const auto rows = detail::parse_vec_list(j["barycentric"], s.n + 1, s.n + 1,
                                           "contact weights");
  Mat la(s.n + 1, s.n + 1);
  for (int i = 0; i <= s.n; ++i)
    for (int c = 0; c <= s.n; ++c) la(i, c) = rows[i][c];
  return contacts_from_barycentric(s, la, tol);
}

inline std::vector<DisplacementCoeff> parse_coeffs(const njson& j) {
  if (!j.is_array()) throw ParseError("coeffs: expected an array");
  std::vector<DisplacementCoeff> out;
  for (const auto& e : j) {
    if (!e.is_object() || !e.contains("i") || !e.contains("j") ||
        !e.contains("t"))
      throw ParseError("coeffs: each entry needs keys \"i\", \"j\", \"t\"");
    DisplacementCoeff dc;
    dc.i = e["i"].get<int>();
    dc.j = e["j"].get<int>();
    dc.t = e["t"].get<double>();
    out.push_back(dc);
  }
  return out;
}

inline OracleConfig parse_oracle_config(const njson& j) {
  OracleConfig cfg;
  if (!j.is_object()) throw ParseError("oracle config: expected an object");
  if (j.contains("epsilon")) cfg.epsilon = j["epsilon"].get<double>();
  if (j.contains("n_random")) cfg.n_random = j["n_random"].get<int>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (cfg.epsilon <= 0.0 || cfg.n_random < 0)
    throw ParseError("oracle config: epsilon must be > 0, n_random >= 0");
  return cfg;
}

// ---------------------------------------------------------------------------
// Emission of the file formats
// ---------------------------------------------------------------------------

inline Jv jv_simplex(const Simplex& s) {
  Jv o = Jv::object();
  o.set("n", s.n);
  o.set("vertices", jv_points(s.vertices()));
  return o;
}

inline Jv jv_fan(const NormalFan& fan) {
  Jv o = Jv::object();
  o.set("n", fan.n);
  Jv normals = Jv::array();
  for (int i = 0; i <= fan.n; ++i) normals.push(jv_vec(fan.normal(i)));
  o.set("normals", std::move(normals));
  Jv kappa = Jv::array();
  for (int i = 0; i <= fan.n; ++i) kappa.push(fan.kappa(i));
  o.set("kappa", std::move(kappa));
  return o;
}

inline Jv jv_contacts_barycentric(const ContactSet& c) {
  Jv o = Jv::object();
  o.set("barycentric", jv_mat_rows(c.La));
  return o;
}

inline Jv jv_verdict(const ImmobilizationVerdict& v) {
  Jv o = Jv::object();
  o.set("immobilizes", v.immobilizes);
  o.set("symmetric", v.symmetric);
  o.set("almost_positive_definite", v.apd);
  o.set("symmetric_defect", v.symmetric_defect);
  o.set("margin", v.margin);
  o.set("eigenvalues", jv_vec(v.eigenvalues));
  o.set("strictly_interior", v.strictly_interior);
  o.set("penetration_matrix", jv_mat_rows(v.pm.A));
  return o;
}

inline Jv jv_oracle(const OracleReport& rep) {
  Jv o = Jv::object();
  const char* verdict =
      rep.verdict == OracleVerdict::ConfirmImmobilizing ? "confirm"
      : rep.verdict == OracleVerdict::RefuteWithWitness ? "refute"
                                                        : "inconclusive";
  o.set("verdict", verdict);
  o.set("samples", static_cast<double>(rep.samples));
  o.set("worst_psi", rep.worst_psi);
  if (rep.witness) {
    o.set("witness_generator", jv_mat_rows(rep.witness->S));
    o.set("witness_psi", rep.witness_psi);
  }
  o.set("note", rep.note);
  return o;
}

}  // namespace immob
