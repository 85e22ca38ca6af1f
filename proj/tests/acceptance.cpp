// Acceptance gate: one PASS/FAIL line per shipping criterion, exit status =
// number of failures.  Every tolerance is pinned here, in code, on purpose:
// loosening one is a visible diff.  Corpus generation is seeded, so a failure
// reproduces exactly.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "immob/immob.hpp"
#include "support.hpp"

using namespace immob;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

int g_failures = 0;

void report(int id, bool ok, const std::string& name,
            const std::string& detail) {
  if (!ok) ++g_failures;
  std::printf("%s %2d  %-58s %s\n", ok ? "PASS" : "FAIL", id, name.c_str(),
              detail.c_str());
  std::fflush(stdout);
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

// Shared corpus: 20 simplices per dimension, n = 2..6.
std::vector<Simplex> make_corpus() {
  Rng rng(1001);
  std::vector<Simplex> corpus;
  for (int n = 2; n <= 6; ++n)
    for (int i = 0; i < 20; ++i)
      corpus.push_back(support::random_simplex(n, rng));
  return corpus;
}

// --------------------------------------------------------------------------
// 1: the built-in example reproduces its published matrix and verdict fast.
// --------------------------------------------------------------------------

void criterion_1() {
  const auto t0 = Clock::now();
  const ReferenceCase rc = reference_case();
  const NormalFan fan = normals_from_vertices(rc.simplex);
  const PenetrationMatrix pm = penetration_matrix(fan, rc.contacts);
  const ImmobilizationVerdict v = immobilizes(rc.simplex, rc.contacts);
  const double elapsed_ms = ms_since(t0);

  const double err = (rc.published_scale * pm.A - rc.expected_a).max_abs();
  const bool ok = err <= 1e-9 && v.symmetric && !v.apd && !v.immobilizes &&
                  elapsed_ms < 100.0;
  report(1, ok, "built-in example: matrix, verdict flags, runtime",
         "err " + fmt(err) + ", " + fmt(elapsed_ms) + " ms");
}

// --------------------------------------------------------------------------
// 2: the example's normal fan matches the published listing entrywise.
// --------------------------------------------------------------------------

void criterion_2() {
  const ReferenceCase rc = reference_case();
  const NormalFan fan = normals_from_vertices(rc.simplex);

  double err = 0.0;
  double kappa_sum = 0.0;
  for (int i = 0; i <= 4; ++i) {
    kappa_sum += rc.published_scale * fan.kappa(i);
    for (int r = 0; r < 4; ++r)
      err = std::max(err, std::abs(rc.published_scale * fan.normal(i)[r] -
                                   rc.expected_normals[i][r]));
  }
  // At the published scale the volume is (n-1)! times ours, so sum(kappa)
  // = -n * (n-1)! * vol.
  const double kappa_err =
      std::abs(kappa_sum + 4.0 * 6.0 * rc.simplex.vol);
  const bool ok = err <= 1e-9 && kappa_err <= 1e-9;
  report(2, ok, "built-in example: published normal listing",
         "err " + fmt(err) + ", kappa-sum err " + fmt(kappa_err));
}

// --------------------------------------------------------------------------
// 3: facet centroids give A = vol * I across the corpus.
// --------------------------------------------------------------------------

void criterion_3(const std::vector<Simplex>& corpus) {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (const Simplex& s : corpus) {
    const ContactSet g = centroid_contacts(s);
    const NormalFan fan = normals_from_vertices(s);
    const Mat a = penetration_matrix(fan, g).A;
    const double err = (a - s.vol * Mat::identity(s.n)).max_abs();
    worst = std::max(worst, err / s.vol);
  }
  const double elapsed_ms = ms_since(t0);
  const bool ok = worst <= 1e-9 && elapsed_ms < 5000.0;
  report(3, ok, "centroid contacts: A = vol * I on 100 random simplices",
         "rel err " + fmt(worst) + ", " + fmt(elapsed_ms) + " ms");
}

// --------------------------------------------------------------------------
// 4: homogeneous duality K^T V = V K^T = -n vol I, and V -> K -> V.
// --------------------------------------------------------------------------

void criterion_4(const std::vector<Simplex>& corpus) {
  double worst_dual = 0.0;
  double worst_round = 0.0;
  for (const Simplex& s : corpus) {
    const NormalFan fan = normals_from_vertices(s);
    const double scale = s.n * s.vol;
    const Mat want = -scale * Mat::identity(s.n + 1);
    worst_dual = std::max(
        worst_dual, (fan.K.transposed() * s.V - want).max_abs() / scale);
    worst_dual = std::max(
        worst_dual, (s.V * fan.K.transposed() - want).max_abs() / scale);

    const Simplex back = vertices_from_normals(fan);
    worst_round = std::max(worst_round,
                           (back.V - s.V).max_abs() / s.V.max_abs());
  }
  const bool ok = worst_dual <= 1e-9 && worst_round <= 1e-8;
  report(4, ok, "duality identities and V -> K -> V round trip",
         "dual " + fmt(worst_dual) + ", round trip " + fmt(worst_round));
}

// --------------------------------------------------------------------------
// 5: |k_i| equals the Gram-determinant facet volume.
// --------------------------------------------------------------------------

void criterion_5(const std::vector<Simplex>& corpus) {
  double worst = 0.0;
  for (const Simplex& s : corpus) {
    const NormalFan fan = normals_from_vertices(s);
    for (int i = 0; i <= s.n; ++i) {
      const double fv = face_volume(s, i);
      worst = std::max(worst, std::abs(norm2(fan.normal(i)) - fv) / fv);
    }
  }
  const bool ok = worst <= 1e-9;
  report(5, ok, "normal lengths match facet volumes", "rel err " + fmt(worst));
}

// --------------------------------------------------------------------------
// 6: in n <= 3, symmetric interior sets are never indefinite.
// --------------------------------------------------------------------------

void criterion_6() {
  Rng rng(2002);
  int checked = 0;
  double worst_mps = std::numeric_limits<double>::infinity();
  bool ok = true;
  for (int n = 2; n <= 3; ++n) {
    for (int i = 0; i < 200; ++i) {
      const Simplex s = support::random_simplex(n, rng);
      const ContactSet c = support::random_displaced_contacts(s, rng);
      const NormalFan fan = normals_from_vertices(s);
      const PenetrationMatrix pm = penetration_matrix(fan, c);
      if (!pm.symmetric || !c.strictly_interior) {
        ok = false;
        continue;
      }
      worst_mps = std::min(worst_mps, pm.min_pair_sum / s.vol);
      if (pm.min_pair_sum <= 0.0) ok = false;
      ++checked;
    }
  }
  ok = ok && checked == 400;
  report(6, ok, "low dimensions: 400 symmetric interior sets, no indefinite",
         "worst min pair sum " + fmt(worst_mps) + " * vol");
}

// --------------------------------------------------------------------------
// 7: one-generator perturbation splits the spectrum by t|k01||k10|; any
//    in-span displacement keeps the trace at n vol.
// --------------------------------------------------------------------------

void criterion_7() {
  Rng rng(3003);
  double worst_eig = 0.0;
  double worst_trace = 0.0;
  bool ok = true;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 4;
    const Simplex s = support::random_simplex(n, rng);
    const NormalFan fan = normals_from_vertices(s);
    const ContactSet base = centroid_contacts(s);
    const DisplacementBasis basis = displacement_basis(fan);
    const double coeff =
        norm2(basis.k_tangent[0][1]) * norm2(basis.k_tangent[1][0]);

    // Back the step off until the displaced set stays strictly interior.
    double t = 0.4 * s.vol / coeff;
    ContactSet moved = base;
    for (int attempt = 0; attempt < 60; ++attempt) {
      try {
        moved = apply_displacement(s, base, {{0, 1, t}});
        if (moved.strictly_interior) break;
      } catch (const LeftFace&) {
      }
      t *= 0.5;
    }

    const PenetrationMatrix pm =
        penetration_matrix(fan, moved);
    Vec expect(n, s.vol);
    expect[0] = s.vol - t * coeff;
    expect[n - 1] = s.vol + t * coeff;
    std::sort(expect.begin(), expect.end());
    for (int i = 0; i < n; ++i)
      worst_eig = std::max(
          worst_eig, std::abs(pm.eigenvalues[i] - expect[i]) / s.vol);

    const ContactSet any = support::random_displaced_contacts(s, rng);
    const Mat a = penetration_matrix(fan, any).A;
    double trace = 0.0;
    for (int i = 0; i < n; ++i) trace += a(i, i);
    worst_trace =
        std::max(worst_trace, std::abs(trace - n * s.vol) / (n * s.vol));
  }
  ok = ok && worst_eig <= 1e-8 && worst_trace <= 1e-9;
  report(7, ok, "perturbation spectrum split and trace invariance",
         "eig " + fmt(worst_eig) + ", trace " + fmt(worst_trace));
}

// --------------------------------------------------------------------------
// 8: the displacement space has dimension n(n+1)/2 - 1, with the lone
//    dependency spread evenly over all generators.
// --------------------------------------------------------------------------

void criterion_8() {
  Rng rng(4004);
  bool ok = true;
  double worst_spread = 0.0;
  for (int n = 2; n <= 8; ++n) {
    const Simplex s = support::random_simplex(n, rng);
    const DisplacementBasis basis = displacement_basis(normals_from_vertices(s));
    const DisplacementRankReport r = displacement_space_rank(basis);
    const int want = n * (n + 1) / 2 - 1;
    if (r.rank != want || r.generator_count != want + 1) ok = false;
    worst_spread = std::max(worst_spread, r.dependency_spread);
  }
  ok = ok && worst_spread <= 1e-8;
  report(8, ok, "displacement-space rank n(n+1)/2 - 1 for n = 2..8",
         "dependency spread " + fmt(worst_spread));
}

// --------------------------------------------------------------------------
// 9: the facet-volume-weighted centre always yields a strictly feasible,
//    immobilizing concurrent set.
// --------------------------------------------------------------------------

void criterion_9(const std::vector<Simplex>& corpus) {
  bool ok = true;
  double worst_weight = std::numeric_limits<double>::infinity();
  for (const Simplex& s : corpus) {
    CentredContacts cc;
    try {
      cc = centred_feasible_witness(s);
    } catch (const Error&) {
      ok = false;
      continue;
    }

    const NormalFan fan = normals_from_vertices(s);
    double total = 0.0;
    for (int i = 0; i <= s.n; ++i) total += norm2(fan.normal(i));
    for (int i = 0; i <= s.n; ++i) {
      if (std::abs(cc.witness.mu[i] - norm2(fan.normal(i)) / total) > 1e-12)
        ok = false;
      if (cc.witness.t[i] <= 0.0) ok = false;
      for (int j = 0; j <= s.n; ++j) {
        if (i == j) continue;
        worst_weight = std::min(worst_weight, cc.set.La(i, j));
        if (cc.set.La(i, j) <= 1e-12) ok = false;
      }
    }
    if (!immobilizes(s, cc.set).immobilizes) ok = false;
  }
  report(9, ok, "weighted-centre synthesis feasible and immobilizing",
         "min weight " + fmt(worst_weight));
}

// --------------------------------------------------------------------------
// 10: the sampling oracle agrees with the algebraic verdict away from the
//     knife edge, and every refutation witness actually fails to penetrate.
// --------------------------------------------------------------------------

void criterion_10() {
  const auto t0 = Clock::now();
  Rng rng(5005);
  bool ok = true;
  int decided = 0;
  double worst_witness = 0.0;
  for (int n = 2; n <= 4; ++n) {
    Simplex s = support::random_simplex(n, rng);
    for (int i = 0; i < 200; ++i) {
      if (i % 10 == 0) s = support::random_simplex(n, rng);

      ContactSet c;
      if (i % 4 == 3) {
        c = contacts_from_barycentric(s, support::random_interior_weights(n, rng));
      } else {
        const double scale = (i % 4 == 2) ? 1.5 : 0.25;
        c = support::random_displaced_contacts(s, rng, scale);
      }

      const NormalFan fan = normals_from_vertices(s);
      const PenetrationMatrix pm = penetration_matrix(fan, c);
      const ImmobilizationVerdict v = immobilizes(s, c);

      OracleConfig cfg;
      cfg.seed = 7000 + static_cast<std::uint64_t>(n) * 1000 + i;
      const OracleReport rep = falsify(s, c, cfg);

      if (rep.witness) {
        worst_witness = std::min(worst_witness, rep.witness_psi);
        if (rep.witness_psi < -1e-12) ok = false;
      }

      // Agreement is only demanded away from the knife edge.
      if (pm.symmetric && std::abs(pm.min_pair_sum) <= 1e-6 * pm.norm)
        continue;
      ++decided;
      const bool oracle_immob =
          rep.verdict == OracleVerdict::ConfirmImmobilizing;
      if (rep.verdict == OracleVerdict::Inconclusive ||
          oracle_immob != v.immobilizes)
        ok = false;
    }
  }
  const double elapsed_ms = ms_since(t0);
  ok = ok && elapsed_ms < 60000.0;
  report(10, ok, "oracle/algebra agreement on 600 contact sets",
         std::to_string(decided) + " decided, worst witness psi " +
             fmt(worst_witness) + ", " + fmt(elapsed_ms) + " ms");
}

// --------------------------------------------------------------------------
// 11: translations never change the penetration total, yet always push some
//     contact inward.
// --------------------------------------------------------------------------

void criterion_11(const std::vector<Simplex>& corpus) {
  Rng rng(6006);
  bool ok = true;
  double worst_phi = 0.0;
  for (const Simplex& s : corpus) {
    const NormalFan fan = normals_from_vertices(s);
    const ContactSet c = centroid_contacts(s);
    for (int trial = 0; trial < 100; ++trial) {
      Vec a(s.n);
      double len = 0.0;
      while (len < 1e-8) {
        for (int i = 0; i < s.n; ++i) a[i] = rng.normal();
        len = norm2(a);
      }
      for (int i = 0; i < s.n; ++i) a[i] /= len;

      const RigidMotion g = make_rigid_motion(Mat::identity(s.n), a);
      worst_phi = std::max(worst_phi, std::abs(phi(fan, c, g)));

      const TranslationPenetration tp = translation_penetration(fan, a);
      if (tp.rate >= 0.0 || dot(fan.normal(tp.contact), a) >= 0.0) ok = false;
    }
  }
  ok = ok && worst_phi <= 1e-12;
  report(11, ok, "translation invariance of the penetration total",
         "worst |phi| " + fmt(worst_phi));
}

// --------------------------------------------------------------------------
// 12: the equalizing translation balances all n+1 normal penetrations at
//     phi(r)/(n+1).
// --------------------------------------------------------------------------

void criterion_12() {
  Rng rng(7007);
  bool ok = true;
  double worst = 0.0;
  for (int n = 2; n <= 5; ++n) {
    const Simplex s = support::random_simplex(n, rng);
    const NormalFan fan = normals_from_vertices(s);
    const ContactSet c = support::random_displaced_contacts(s, rng);
    for (int trial = 0; trial < 25; ++trial) {
      const Mat r = rotation_from_skew(random_skew(n, 0.2, rng));
      const RigidMotion rot = make_rigid_motion(r, Vec(n, 0.0));
      const RigidMotion g = equalizing_translation(fan, c, r);
      const double target = phi(fan, c, rot) / (n + 1);

      for (int i = 0; i <= n; ++i) {
        const Vec p = c.point(i);
        Vec moved = g.R * p;
        for (int row = 0; row < n; ++row) moved[row] += g.a[row] - p[row];
        const double pen = dot(moved, fan.normal(i));
        const double err = std::abs(pen - target) / (1.0 + std::abs(target));
        worst = std::max(worst, err);
        if (err > 1e-10) ok = false;
      }
    }
  }
  report(12, ok, "equalizing translation balances contact penetrations",
         "worst deviation " + fmt(worst));
}

// --------------------------------------------------------------------------
// 13: the similarity identity K P^T = -n vol K Lambda^T K^{-1} holds for
//     arbitrary valid contact sets.
// --------------------------------------------------------------------------

void criterion_13() {
  Rng rng(8008);
  bool ok = true;
  double worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 2 + trial % 4;
    const Simplex s = support::random_simplex(n, rng);
    const ContactSet c =
        contacts_from_barycentric(s, support::random_interior_weights(n, rng));
    const SpectralLinkReport rep = spectral_link_check(s, c);
    worst = std::max(worst, rep.max_residual);
    if (!rep.ok) ok = false;
  }
  report(13, ok, "stochastic similarity identity on 500 random pairs",
         "worst residual " + fmt(worst));
}

// --------------------------------------------------------------------------
// 14: in the plane, immobilizing contact normals are concurrent.
// --------------------------------------------------------------------------

void criterion_14() {
  Rng rng(9009);
  bool ok = true;
  double worst_spread = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Simplex s = support::random_simplex(2, rng);
    const ContactSet c = support::random_displaced_contacts(s, rng);
    if (!immobilizes(s, c).immobilizes) {
      ok = false;
      continue;
    }
    const NormalFan fan = normals_from_vertices(s);

    // Pairwise intersections of the three inward normal lines.
    std::vector<Vec> meet;
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) {
        const Vec di = -1.0 * fan.normal(i);
        const Vec dj = -1.0 * fan.normal(j);
        Mat m(2, 2);
        m(0, 0) = di[0];
        m(1, 0) = di[1];
        m(0, 1) = -dj[0];
        m(1, 1) = -dj[1];
        const Vec rhs = c.point(j) - c.point(i);
        const Vec su = lu_solve(lu_factor(m), rhs);
        meet.push_back(c.point(i) + su[0] * di);
      }
    for (std::size_t a = 0; a < meet.size(); ++a)
      for (std::size_t b = a + 1; b < meet.size(); ++b)
        worst_spread = std::max(worst_spread, norm2(meet[a] - meet[b]));
  }
  ok = ok && worst_spread <= 1e-8;
  report(14, ok, "planar immobilizing sets have concurrent normals",
         "worst spread " + fmt(worst_spread));
}

}  // namespace

int main() {
  const std::vector<Simplex> corpus = make_corpus();

  criterion_1();
  criterion_2();
  criterion_3(corpus);
  criterion_4(corpus);
  criterion_5(corpus);
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9(corpus);
  criterion_10();
  criterion_11(corpus);
  criterion_12();
  criterion_13();
  criterion_14();

  if (g_failures == 0) {
    std::printf("all 14 acceptance criteria pass\n");
    return 0;
  }
  std::printf("%d acceptance criterion(s) failed\n", g_failures);
  return 1;
}
