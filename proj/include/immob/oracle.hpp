#pragma once

// Brute-force penetration oracle on the motion group.
//
// The penetration sum Phi(g) = sum_i (g(p_i) - p_i) . k_i is negative for
// motions that press the body into its contacts and equals tr(A^T (g - I))
// in matrix form; restricted to rotations g = exp(S) with S skew this is
// Psi(S) = tr(A^T (exp S - I)).  The falsifier below cross-examines the
// algebraic verdict:
//
//  * asymmetric A: the skew part of A itself is an ascent direction of the
//    first-order term, so a small step along it has Psi >= 0;
//  * symmetric A failing the pair-sum criterion: a plane rotation in the
//    eigenplane of the two smallest eigenvalues gives exactly
//    Psi = -(lambda_p + lambda_q)(1 - cos theta) >= 0;
//  * otherwise it samples every eigenplane generator plus a batch of random
//    unit twists and confirms Psi < 0 on all of them.
//
// Everything is deterministic given the config seed.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "immob/contact.hpp"
#include "immob/errors.hpp"
#include "immob/mat.hpp"
#include "immob/random.hpp"
#include "immob/simplex.hpp"
#include "immob/spectral.hpp"

namespace immob {

// ---------------------------------------------------------------------------
// Motions
// ---------------------------------------------------------------------------

struct RigidMotion {
  int n = 0;
  Mat R;  // n x n rotation
  Vec a;  // translation

  Mat homogeneous() const {
    Mat h(n + 1, n + 1);
    h(0, 0) = 1.0;
    for (int i = 0; i < n; ++i) {
      h(i + 1, 0) = a[i];
      for (int j = 0; j < n; ++j) h(i + 1, j + 1) = R(i, j);
    }
    return h;
  }
};

inline RigidMotion identity_motion(int n) {
  return RigidMotion{n, Mat::identity(n), Vec(n, 0.0)};
}

inline RigidMotion make_rigid_motion(Mat r, Vec a,
                                     const Tolerances& tol = {}) {
  if (r.rows() != r.cols() || static_cast<int>(a.size()) != r.rows())
    throw BadInput("make_rigid_motion: shape mismatch");
  if (orthogonality_drift(r) > tol.orthonormal)
    throw BadInput("make_rigid_motion: matrix is not orthogonal");
  if (det(r) < 0.0)
    throw BadInput("make_rigid_motion: matrix is a reflection");
  return RigidMotion{r.rows(), std::move(r), std::move(a)};
}

struct SkewGenerator {
  int n = 0;
  Mat S;

  double fro() const { return S.frobenius(); }
};

// Builds S from its strict upper triangle, so S + S^T = 0 holds exactly.
inline SkewGenerator skew_from_upper(int n, const Vec& upper) {
  SkewGenerator g;
  g.n = n;
  g.S = Mat(n, n);
  std::size_t k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      g.S(i, j) = upper[k];
      g.S(j, i) = -upper[k];
      ++k;
    }
  assert(k == upper.size());
  return g;
}

// Plane rotation generator scaled to Frobenius norm |theta| * sqrt(2) ...
// kept raw: exp of it rotates the (p, q) coordinate plane by theta.
inline SkewGenerator coordinate_skew(int n, int p, int q, double theta) {
  SkewGenerator g;
  g.n = n;
  g.S = Mat(n, n);
  g.S(p, q) = theta;
  g.S(q, p) = -theta;
  return g;
}

inline SkewGenerator random_skew(int n, double fro_norm, Rng& rng) {
  const int pairs = n * (n - 1) / 2;
  Vec upper(pairs);
  for (;;) {
    for (int k = 0; k < pairs; ++k) upper[k] = rng.normal();
    double s = 0.0;
    for (double x : upper) s += 2.0 * x * x;
    s = std::sqrt(s);
    if (s > 1e-12) {
      for (double& x : upper) x *= fro_norm / s;
      return skew_from_upper(n, upper);
    }
  }
}

// Rotation from a generator, re-orthonormalized if the series drifted.
inline Mat rotation_from_skew(const SkewGenerator& s,
                              const Tolerances& tol = {}) {
  Mat e = expm(s.S);
  if (orthogonality_drift(e) > tol.orthonormal) e = polar_orthonormalize(e);
  return e;
}

// ---------------------------------------------------------------------------
// Penetration sums
// ---------------------------------------------------------------------------

inline double phi(const NormalFan& fan, const ContactSet& c,
                  const RigidMotion& g) {
  if (fan.n != c.n || g.n != c.n) throw BadInput("phi: dimension mismatch");
  double sum = 0.0;
  for (int i = 0; i <= fan.n; ++i) {
    const Vec p = c.point(i);
    Vec moved = g.R * p;
    for (int r = 0; r < fan.n; ++r) moved[r] += g.a[r] - p[r];
    sum += dot(moved, fan.normal(i));
  }
  return sum;
}

inline double psi(const PenetrationMatrix& pm, const SkewGenerator& s,
                  const Tolerances& tol = {}) {
  if (pm.n != s.n) throw BadInput("psi: dimension mismatch");
  const Mat e = rotation_from_skew(s, tol);
  double sum = 0.0;
  for (int i = 0; i < pm.n; ++i)
    for (int j = 0; j < pm.n; ++j)
      sum += pm.A(i, j) * (e(i, j) - (i == j ? 1.0 : 0.0));
  return sum;
}

// ---------------------------------------------------------------------------
// Equalizing translation
// ---------------------------------------------------------------------------

// For any rotation R there is a unique translation a making all per-contact
// penetrations equal (necessarily to Phi(R)/(n+1), since translations leave
// Phi unchanged).  Solving K^T (0, a) = b via the duality gives
// (0, a) = -V b / (n vol); the leading component vanishes identically
// because the b_i sum to zero.
inline RigidMotion equalizing_translation(const NormalFan& fan,
                                          const ContactSet& c, const Mat& r,
                                          const Tolerances& tol = {}) {
  const int m = fan.n + 1;
  const RigidMotion rot = make_rigid_motion(r, Vec(fan.n, 0.0), tol);
  const double target = phi(fan, c, rot) / m;

  Vec b(m);
  for (int i = 0; i < m; ++i) {
    const Vec p = c.point(i);
    Vec moved = rot.R * p;
    for (int k = 0; k < fan.n; ++k) moved[k] -= p[k];
    b[i] = target - dot(moved, fan.normal(i));
  }

  const Simplex s = vertices_from_normals(fan, tol);
  const Vec ah = (-1.0 / fan.nvol()) * (s.V * b);
  Vec a(fan.n);
  for (int k = 0; k < fan.n; ++k) a[k] = ah[k + 1];
  return RigidMotion{fan.n, rot.R, a};
}

// Index of the contact a pure translation presses on hardest (most negative
// a . k_i).  Some rate is always negative: the k_i span R^n and sum to zero.
struct TranslationPenetration {
  int contact = -1;
  double rate = 0.0;  // a . k_contact
};

inline TranslationPenetration translation_penetration(const NormalFan& fan,
                                                      const Vec& a) {
  if (static_cast<int>(a.size()) != fan.n)
    throw BadInput("translation_penetration: dimension mismatch");
  if (norm2(a) == 0.0)
    throw ZeroTranslation("translation_penetration: zero translation");
  TranslationPenetration out;
  for (int i = 0; i <= fan.n; ++i) {
    const double rate = dot(a, fan.normal(i));
    if (out.contact < 0 || rate < out.rate) {
      out.contact = i;
      out.rate = rate;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Falsifier
// ---------------------------------------------------------------------------

struct OracleConfig {
  double epsilon = 1e-3;   // Frobenius norm of the probe generators
  int n_random = 256;      // random unit twists in the confirm sweep
  std::uint64_t seed = 0;
};

enum class OracleVerdict { ConfirmImmobilizing, RefuteWithWitness, Inconclusive };

struct OracleReport {
  OracleVerdict verdict = OracleVerdict::Inconclusive;
  long samples = 0;        // Psi evaluations performed
  double worst_psi = -std::numeric_limits<double>::infinity();
  std::optional<SkewGenerator> witness;
  double witness_psi = 0.0;
  std::string note;
};

namespace detail {

// Plane generator in the eigenbasis: S = theta (q_p q_q^T - q_q q_p^T),
// rebuilt from its upper triangle so it is skew to the last bit.
inline SkewGenerator eigenplane_skew(const Mat& q, int p, int qq,
                                     double theta) {
  const int n = q.rows();
  const Vec u = q.col(p);
  const Vec v = q.col(qq);
  Vec upper(static_cast<std::size_t>(n) * (n - 1) / 2);
  std::size_t k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      upper[k++] = theta * (u[i] * v[j] - u[j] * v[i]);
  return skew_from_upper(n, upper);
}

}  // namespace detail

inline OracleReport falsify(const Simplex& s, const ContactSet& c,
                            const OracleConfig& cfg = {},
                            const Tolerances& tol = {}) {
  const NormalFan fan = normals_from_vertices(s);
  const PenetrationMatrix pm = penetration_matrix(fan, c, tol);
  OracleReport rep;

  const auto probe_best = [&](SkewGenerator cand) {
    // Halve the step until the predicted sign shows up; keep the best seen.
    SkewGenerator best = cand;
    double best_psi = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < 50; ++k) {
      const double value = psi(pm, cand, tol);
      ++rep.samples;
      if (value > best_psi) {
        best_psi = value;
        best = cand;
      }
      if (value > 0.0) break;
      cand.S = 0.5 * cand.S;
    }
    rep.witness = best;
    rep.witness_psi = best_psi;
    rep.worst_psi = best_psi;
  };

  if (!pm.symmetric) {
    // Skew part of A: tr(A^T W) = |W|_F^2 > 0, so the first-order term of
    // Psi along W is positive and a small enough step is non-negative.
    Mat w = 0.5 * (pm.A - pm.A.transposed());
    const double wn = w.frobenius();
    SkewGenerator g{pm.n, (cfg.epsilon / wn) * w};
    probe_best(g);
    rep.verdict = OracleVerdict::RefuteWithWitness;
    rep.note = "asymmetric penetration matrix";
    return rep;
  }

  const double scale = std::max(pm.norm, 1e-300);
  const double mps = pm.min_pair_sum;

  if (std::abs(mps) <= tol.apd * scale) {
    SkewGenerator g = detail::eigenplane_skew(pm.eigenvectors, 0, 1,
                                              cfg.epsilon / std::sqrt(2.0));
    rep.witness = g;
    rep.witness_psi = psi(pm, g, tol);
    ++rep.samples;
    rep.worst_psi = rep.witness_psi;
    rep.verdict = OracleVerdict::Inconclusive;
    rep.note = "smallest pair sum is inside the tolerance band of zero";
    return rep;
  }

  if (mps < 0.0) {
    // Rotating the eigenplane of the two smallest eigenvalues by theta gives
    // Psi = -(l0 + l1)(1 - cos theta) > 0 exactly.
    SkewGenerator g = detail::eigenplane_skew(pm.eigenvectors, 0, 1,
                                              cfg.epsilon / std::sqrt(2.0));
    probe_best(g);
    rep.verdict = OracleVerdict::RefuteWithWitness;
    rep.note = "pair-sum criterion fails on the two smallest eigenvalues";
    return rep;
  }

  // Algebra says immobilizing; sweep every eigenplane generator and a batch
  // of random twists looking for a counterexample.
  rep.worst_psi = -std::numeric_limits<double>::infinity();
  Rng rng(cfg.seed);
  const double theta = cfg.epsilon / std::sqrt(2.0);
  for (int p = 0; p <= pm.n - 1; ++p)
    for (int q = p + 1; q < pm.n; ++q) {
      const SkewGenerator g = detail::eigenplane_skew(pm.eigenvectors, p, q,
                                                      theta);
      const double value = psi(pm, g, tol);
      ++rep.samples;
      if (value > rep.worst_psi) rep.worst_psi = value;
      if (value >= 0.0) {
        rep.verdict = OracleVerdict::RefuteWithWitness;
        rep.witness = g;
        rep.witness_psi = value;
        rep.note = "eigenplane generator achieved non-negative penetration";
        return rep;
      }
    }
  for (int r = 0; r < cfg.n_random; ++r) {
    const SkewGenerator g = random_skew(pm.n, cfg.epsilon, rng);
    const double value = psi(pm, g, tol);
    ++rep.samples;
    if (value > rep.worst_psi) rep.worst_psi = value;
    if (value >= 0.0) {
      rep.verdict = OracleVerdict::RefuteWithWitness;
      rep.witness = g;
      rep.witness_psi = value;
      rep.note = "random twist achieved non-negative penetration";
      return rep;
    }
  }
  rep.verdict = OracleVerdict::ConfirmImmobilizing;
  rep.note = "all sampled twists strictly penetrate";
  return rep;
}

}  // namespace immob
