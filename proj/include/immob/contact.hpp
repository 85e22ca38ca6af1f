#pragma once

// Contact sets on the faces of a simplex and the immobilization criterion.
//
// A contact set places one point p_i on each face F_i.  Its barycentric
// encoding is the (n+1)x(n+1) matrix La with P = V La, where column j holds
// the weights of p_j over the vertices; membership of p_j in face j forces a
// zero diagonal, and the homogeneous row forces columns to sum to one.
//
// The whole first-order theory is carried by the penetration matrix
//
//     A = sum_i k_i p_i^T  (n x n),
//
// through Phi(g) = tr(A^T (g - I)) for rigid g.  The contact set immobilizes
// the simplex iff A is symmetric and "almost positive definite": every sum
// of two eigenvalues is positive, equivalently the two smallest eigenvalues
// sum to a positive number.  The margin reported below is that smallest pair
// sum divided by 2 vol(Delta), which normalizes the centroid configuration
// to margin exactly 1.

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "immob/errors.hpp"
#include "immob/mat.hpp"
#include "immob/random.hpp"
#include "immob/simplex.hpp"
#include "immob/spectral.hpp"

namespace immob {

// Column-stochastic validation is an absolute contract on the encoding, not
// a scale-relative one: barycentric columns sum to 1 by definition.
inline constexpr double kStochasticTol = 1e-12;

struct ContactSet {
  int n = 0;
  Mat P;   // column i = (1, p_i)
  Mat La;  // barycentric weights, P = V La
  bool strictly_interior = false;
  // Entries (i, j), i != j, with lambda_ij <= interiority tolerance: the
  // contact p_j touches (or has crossed) the sub-face where vertex i's
  // weight vanishes.  Verdicts are still computed for such sets.
  std::vector<std::pair<int, int>> boundary_entries;

  Vec point(int i) const {
    Vec p(n);
    for (int r = 0; r < n; ++r) p[r] = P(r + 1, i);
    return p;
  }

  std::vector<Vec> points() const {
    std::vector<Vec> out(n + 1);
    for (int i = 0; i <= n; ++i) out[i] = point(i);
    return out;
  }
};

namespace detail {

inline void classify_interiority(ContactSet& c, const Tolerances& tol) {
  c.boundary_entries.clear();
  for (int j = 0; j <= c.n; ++j)
    for (int i = 0; i <= c.n; ++i) {
      if (i == j) continue;
      if (c.La(i, j) <= tol.interior) c.boundary_entries.emplace_back(i, j);
    }
  c.strictly_interior = c.boundary_entries.empty();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

inline ContactSet contacts_from_points(const Simplex& s,
                                       const std::vector<Vec>& pts,
                                       const Tolerances& tol = {}) {
  const int m = s.n + 1;
  if (static_cast<int>(pts.size()) != m)
    throw BadInput("contacts_from_points: need one point per face");
  for (const Vec& p : pts)
    if (static_cast<int>(p.size()) != s.n)
      throw BadInput("contacts_from_points: points must have dimension n");

  const NormalFan fan = normals_from_vertices(s);
  for (int i = 0; i < m; ++i) {
    const Vec k = fan.normal(i);
    const double res = dot(k, pts[i]) + fan.kappa(i);
    const double scale = norm2(k) * (1.0 + norm2(pts[i]));
    if (std::abs(res) > tol.plane * scale)
      throw OffFace(i, res / norm2(k),
                    "contacts_from_points: point " + std::to_string(i) +
                        " is off its face hyperplane");
  }

  ContactSet c;
  c.n = s.n;
  c.P = Mat(m, m);
  for (int j = 0; j < m; ++j) {
    c.P(0, j) = 1.0;
    for (int r = 0; r < s.n; ++r) c.P(r + 1, j) = pts[j][r];
  }
  Lu f = lu_factor(s.V);
  if (f.singular)
    throw DegenerateSimplex("contacts_from_points: singular vertex matrix");
  c.La = lu_solve(f, c.P);
  // The diagonal vanishes exactly in exact arithmetic; snap the roundoff.
  for (int j = 0; j < m; ++j) c.La(j, j) = 0.0;
  detail::classify_interiority(c, tol);
  return c;
}

inline ContactSet contacts_from_barycentric(const Simplex& s, const Mat& la,
                                            const Tolerances& tol = {}) {
  const int m = s.n + 1;
  if (la.rows() != m || la.cols() != m)
    throw BadInput("contacts_from_barycentric: weight matrix must be "
                   "(n+1) x (n+1)");
  for (int j = 0; j < m; ++j) {
    if (std::abs(la(j, j)) > kStochasticTol)
      throw BadStochastic("contacts_from_barycentric: diagonal entry " +
                          std::to_string(j) + " is non-zero");
    double sum = 0.0;
    for (int i = 0; i < m; ++i) sum += la(i, j);
    if (std::abs(sum - 1.0) > kStochasticTol)
      throw BadStochastic("contacts_from_barycentric: column " +
                          std::to_string(j) + " does not sum to 1");
  }

  ContactSet c;
  c.n = s.n;
  c.La = la;
  for (int j = 0; j < m; ++j) c.La(j, j) = 0.0;
  c.P = s.V * c.La;
  for (int j = 0; j < m; ++j) c.P(0, j) = 1.0;
  detail::classify_interiority(c, tol);
  return c;
}

// ---------------------------------------------------------------------------
// Penetration matrix
// ---------------------------------------------------------------------------

struct PenetrationMatrix {
  int n = 0;
  Mat A;
  double symmetric_defect = 0.0;  // max |A - A^T| entry
  bool symmetric = false;
  Vec eigenvalues;   // ascending; populated only when symmetric
  Mat eigenvectors;  // columns match eigenvalues
  double min_pair_sum = std::numeric_limits<double>::quiet_NaN();
  // Spectral norm of A when symmetric, Frobenius norm otherwise; either way
  // a sound scale for relative thresholds.
  double norm = 0.0;
  double max_entry = 0.0;
};

// Assembles the report for an externally supplied matrix.  Useful on its own
// for probing the criterion against synthetic spectra.
inline PenetrationMatrix penetration_from_matrix(Mat a,
                                                 const Tolerances& tol = {}) {
  PenetrationMatrix pm;
  pm.n = a.rows();
  pm.A = std::move(a);
  pm.max_entry = pm.A.max_abs();
  double defect = 0.0;
  for (int i = 0; i < pm.n; ++i)
    for (int j = i + 1; j < pm.n; ++j)
      defect = std::max(defect, std::abs(pm.A(i, j) - pm.A(j, i)));
  pm.symmetric_defect = defect;
  pm.symmetric = defect <= tol.sym * std::max(pm.max_entry, 1e-300);

  if (pm.symmetric) {
    const Mat sym = 0.5 * (pm.A + pm.A.transposed());
    EigenSym es = jacobi_eigensystem(sym);
    pm.eigenvalues = std::move(es.values);
    pm.eigenvectors = std::move(es.vectors);
    if (pm.n >= 2)
      pm.min_pair_sum = pm.eigenvalues[0] + pm.eigenvalues[1];
    else
      pm.min_pair_sum = pm.eigenvalues.empty() ? 0.0 : pm.eigenvalues[0];
    double spec = 0.0;
    for (double x : pm.eigenvalues) spec = std::max(spec, std::abs(x));
    pm.norm = spec;
  } else {
    pm.norm = pm.A.frobenius();
  }
  return pm;
}

inline PenetrationMatrix penetration_matrix(const NormalFan& fan,
                                            const ContactSet& c,
                                            const Tolerances& tol = {}) {
  if (fan.n != c.n)
    throw BadInput("penetration_matrix: fan and contacts disagree on n");
  Mat a(fan.n, fan.n);
  for (int i = 0; i <= fan.n; ++i)
    add_outer(a, 1.0, fan.normal(i), c.point(i));
  return penetration_from_matrix(std::move(a), tol);
}

inline bool is_almost_positive_definite(const PenetrationMatrix& pm,
                                        const Tolerances& tol = {}) {
  if (!pm.symmetric)
    throw NotSymmetric(
        "is_almost_positive_definite: matrix is not symmetric");
  return pm.min_pair_sum > tol.apd * pm.norm;
}

// ---------------------------------------------------------------------------
// Verdict
// ---------------------------------------------------------------------------

struct ImmobilizationVerdict {
  bool symmetric = false;
  bool apd = false;
  bool immobilizes = false;
  // min pair sum over 2 vol(Delta); NaN when the matrix is asymmetric.
  double margin = std::numeric_limits<double>::quiet_NaN();
  double symmetric_defect = 0.0;
  Vec eigenvalues;
  bool strictly_interior = false;
  PenetrationMatrix pm;
};

inline ImmobilizationVerdict immobilizes(const Simplex& s, const ContactSet& c,
                                         const Tolerances& tol = {}) {
  const NormalFan fan = normals_from_vertices(s);
  PenetrationMatrix pm = penetration_matrix(fan, c, tol);

  ImmobilizationVerdict v;
  v.symmetric = pm.symmetric;
  v.symmetric_defect = pm.symmetric_defect;
  v.strictly_interior = c.strictly_interior;
  if (pm.symmetric) {
    v.apd = is_almost_positive_definite(pm, tol);
    v.margin = pm.min_pair_sum / (2.0 * s.vol);
    v.eigenvalues = pm.eigenvalues;
    // For n <= 3, symmetry plus strictly interior contacts implies the pair
    // sums are positive; a clear violation can only mean a bug upstream.
    if (s.n <= 3 && c.strictly_interior && !v.apd && v.margin < -1e-8)
      throw InternalCheckFailure(
          "immobilizes: low-dimensional spectral bound violated");
  }
  v.immobilizes = v.symmetric && v.apd;
  v.pm = std::move(pm);
  return v;
}

// ---------------------------------------------------------------------------
// Structural cross-checks
// ---------------------------------------------------------------------------

struct SpectralLinkReport {
  bool ok = false;
  double max_residual = 0.0;  // relative to max(n vol, |A| entries)
  explicit operator bool() const { return ok; }
};

// Verifies the factorization that ties the contact spectrum to the weight
// spectrum: K P^T has first column (-n vol, 0, ..., 0), carries A as its
// trailing n x n block, and equals -n vol K La^T K^-1.  The latter makes
// A's eigenvalues (plus the -n vol outlier) a similarity transform of La^T's,
// which is what the stochastic bound below feeds on.
inline SpectralLinkReport spectral_link_check(const Simplex& s,
                                              const ContactSet& c,
                                              const Tolerances& tol = {}) {
  const NormalFan fan = normals_from_vertices(s);
  const PenetrationMatrix pm = penetration_matrix(fan, c, tol);
  const int m = s.n + 1;
  const double nvol = fan.nvol();

  const Mat l = fan.K * c.P.transposed();
  double r = std::abs(l(0, 0) + nvol);
  for (int i = 1; i < m; ++i) r = std::max(r, std::abs(l(i, 0)));
  for (int i = 1; i < m; ++i)
    for (int j = 1; j < m; ++j)
      r = std::max(r, std::abs(l(i, j) - pm.A(i - 1, j - 1)));

  // X = K La^T K^-1 via K^T X^T = La K^T.
  Lu f = lu_factor(fan.K.transposed());
  if (f.singular)
    throw InvalidFan("spectral_link_check: singular fan matrix");
  const Mat xt = lu_solve(f, c.La * fan.K.transposed());
  const Mat x = xt.transposed();
  const Mat diff = l - (-nvol) * x;
  r = std::max(r, diff.max_abs());

  SpectralLinkReport rep;
  const double scale = std::max(nvol, pm.max_entry);
  rep.max_residual = r / scale;
  rep.ok = rep.max_residual <= tol.spectral_link;
  return rep;
}

struct StochasticBoundReport {
  bool ok = false;
  bool preconditions_met = false;
  std::string note;
  double column_sum_residual = 0.0;
  // Largest final norm of a zero-sum unit probe after the iteration; values
  // below the threshold certify that all non-unit eigenvalues of the weight
  // matrix lie strictly inside the unit circle.
  double contraction = 0.0;
  bool contraction_ok = false;
  int iterations = 0;
  int probes = 0;
};

// Power-iteration certificate for the weight-matrix spectrum.  The vector of
// ones is a fixed left eigenvector of any column-stochastic La, so the
// zero-sum hyperplane is invariant under x -> La x and carries exactly the
// non-unit part of the spectrum; 256 applications shrinking every probe
// below 0.99 is an overwhelming margin for eigenvalues bounded away from 1.
// Preconditions for the strict bound: at least three contacts and strictly
// positive off-diagonal weights (two contacts give a genuine -1 eigenvalue,
// which the report flags rather than hides).
inline StochasticBoundReport stochastic_spectrum_bound(
    const Mat& la, std::uint64_t seed = 0, int iterations = 256,
    int probes = 32, double threshold = 0.99) {
  if (la.rows() != la.cols() || la.rows() < 2)
    throw BadInput("stochastic_spectrum_bound: need a square matrix, m >= 2");
  const int m = la.rows();

  StochasticBoundReport rep;
  rep.iterations = iterations;
  rep.probes = probes;

  for (int j = 0; j < m; ++j) {
    if (std::abs(la(j, j)) > kStochasticTol)
      throw BadStochastic("stochastic_spectrum_bound: non-zero diagonal");
    double sum = 0.0;
    for (int i = 0; i < m; ++i) sum += la(i, j);
    rep.column_sum_residual =
        std::max(rep.column_sum_residual, std::abs(sum - 1.0));
  }
  if (rep.column_sum_residual > kStochasticTol)
    throw BadStochastic("stochastic_spectrum_bound: columns do not sum to 1");

  rep.preconditions_met = m >= 3;
  for (int j = 0; j < m && rep.preconditions_met; ++j)
    for (int i = 0; i < m; ++i)
      if (i != j && la(i, j) <= 0.0) {
        rep.preconditions_met = false;
        break;
      }
  if (!rep.preconditions_met)
    rep.note = m < 3 ? "fewer than three contacts: -1 is an eigenvalue"
                     : "weights are not strictly positive off the diagonal";

  Rng rng(seed);
  for (int p = 0; p < probes; ++p) {
    Vec x;
    for (;;) {
      x = rng.normal_vec(m);
      double mean = 0.0;
      for (double v : x) mean += v;
      mean /= m;
      for (double& v : x) v -= mean;
      const double nrm = norm2(x);
      if (nrm > 1e-8) {
        x = (1.0 / nrm) * x;
        break;
      }
    }
    for (int it = 0; it < iterations; ++it) x = la * x;
    rep.contraction = std::max(rep.contraction, norm2(x));
  }
  rep.contraction_ok = rep.contraction <= threshold;
  rep.ok = rep.preconditions_met && rep.contraction_ok;
  return rep;
}

}  // namespace immob
