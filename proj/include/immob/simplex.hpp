#pragma once

// Simplices in homogeneous coordinates and their outward normal fans.
//
// A simplex on vertices v_0..v_n is stored as the (n+1)x(n+1) matrix V whose
// column j is (1, v_j); construction enforces det V > 0 by transposing the
// first two vertex labels if needed, so vol = det(V)/n! is always positive.
//
// The canonical fan K stores column i = (kappa_i, k_i), where k_i is the
// outward normal of the face opposite vertex i scaled so that
//
//     K^T V = V K^T = -n vol(Delta) I.
//
// With that normalization sum(k_i) = 0, sum(kappa_i) = -n vol, and |k_i| is
// (n-1)! times the (n-1)-volume of face i.  The two directions of the
// duality (vertices -> normals, normals -> vertices) are inverses up to
// roundoff, and both are exercised heavily by the tests.

#include <cmath>
#include <string>
#include <vector>

#include "immob/errors.hpp"
#include "immob/mat.hpp"
#include "immob/spectral.hpp"

namespace immob {

struct Simplex {
  int n = 0;
  Mat V;                   // homogeneous vertex matrix, det V = n! vol > 0
  double vol = 0.0;
  bool reoriented = false; // vertices 0 and 1 were swapped at construction

  Vec vertex(int j) const {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = V(i + 1, j);
    return v;
  }

  std::vector<Vec> vertices() const {
    std::vector<Vec> out(n + 1);
    for (int j = 0; j <= n; ++j) out[j] = vertex(j);
    return out;
  }

  Vec centroid() const {
    Vec c(n, 0.0);
    for (int j = 0; j <= n; ++j) axpy(1.0 / (n + 1), vertex(j), c);
    return c;
  }
};

struct NormalFan {
  int n = 0;
  Mat K;            // column i = (kappa_i, k_i)
  double vol = 0.0;

  Vec normal(int i) const {
    Vec k(n);
    for (int r = 0; r < n; ++r) k[r] = K(r + 1, i);
    return k;
  }

  double kappa(int i) const { return K(0, i); }
  double nvol() const { return n * vol; }
};

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

inline Simplex make_simplex(const std::vector<Vec>& vertices,
                            const Tolerances& tol = {}) {
  const int n = static_cast<int>(vertices.size()) - 1;
  if (n < 1) throw BadInput("make_simplex: need at least 2 vertices");
  for (const Vec& v : vertices) {
    if (static_cast<int>(v.size()) != n)
      throw BadInput("make_simplex: expected " + std::to_string(n + 1) +
                     " vertices of dimension " + std::to_string(n));
  }

  Simplex s;
  s.n = n;
  s.V = Mat(n + 1, n + 1);
  for (int j = 0; j <= n; ++j) {
    s.V(0, j) = 1.0;
    for (int i = 0; i < n; ++i) s.V(i + 1, j) = vertices[j][i];
  }

  // Degeneracy is judged relative to the size of the configuration: the
  // homogeneous determinant scales like the product of the column norms.
  double colscale = 1.0;
  for (int j = 0; j <= n; ++j) colscale *= std::max(norm2(s.V.col(j)), 1.0);
  double d = det(s.V);
  if (std::abs(d) <= tol.degeneracy * colscale)
    throw DegenerateSimplex("make_simplex: vertices are affinely dependent");

  if (d < 0.0) {
    for (int i = 0; i <= n; ++i) std::swap(s.V(i, 0), s.V(i, 1));
    d = -d;
    s.reoriented = true;
  }

  double fact = 1.0;
  for (int i = 2; i <= n; ++i) fact *= i;
  s.vol = d / fact;
  return s;
}

inline NormalFan normals_from_vertices(const Simplex& s) {
  // K = -n vol (V^-1)^T, i.e. K^T is the solution of V^T K^T... column-wise
  // it is cheapest as K^T = -n vol V^-1 applied to the identity.
  Lu f = lu_factor(s.V);
  if (f.singular)
    throw DegenerateSimplex("normals_from_vertices: singular vertex matrix");
  const Mat vinv = lu_solve(f, Mat::identity(s.n + 1));
  NormalFan fan;
  fan.n = s.n;
  fan.vol = s.vol;
  fan.K = (-(s.n * s.vol)) * vinv.transposed();
  return fan;
}

// ---------------------------------------------------------------------------
// Fan validity
// ---------------------------------------------------------------------------

struct FanValidity {
  enum class Verdict { Valid, DependentSubset, MixedSigns };
  Verdict verdict = Verdict::Valid;
  int witness_index = -1;              // offending leave-one-out index
  std::vector<bool> subset_independent;
  Vec dependency;                      // normalized to max-abs entry 1

  bool valid() const { return verdict == Verdict::Valid; }
};

// A set of n+1 direction vectors is the normal fan of some simplex iff every
// n-subset is linearly independent and the (then unique) linear dependency
// has coefficients of one strict sign.  Independence is decided on singular
// value ratios of the actual column matrices.
inline FanValidity validate_normal_fan(const std::vector<Vec>& normals,
                                       const Tolerances& tol = {}) {
  const int m = static_cast<int>(normals.size());
  const int n = m - 1;
  if (n < 1) throw BadInput("validate_normal_fan: need at least 2 normals");
  for (const Vec& k : normals)
    if (static_cast<int>(k.size()) != n)
      throw BadInput("validate_normal_fan: normals must have dimension n");

  FanValidity out;
  out.subset_independent.assign(m, true);

  for (int skip = 0; skip < m; ++skip) {
    Mat sub(n, n);
    int c = 0;
    for (int j = 0; j < m; ++j) {
      if (j == skip) continue;
      sub.set_col(c++, normals[j]);
    }
    const Svd sv = onesided_jacobi_svd(sub);
    const double smax = sv.sigma[0];
    const bool indep = smax > 0.0 && sv.sigma[n - 1] > tol.svd_rank * smax;
    out.subset_independent[skip] = indep;
    if (!indep && out.witness_index < 0) out.witness_index = skip;
  }
  if (out.witness_index >= 0) {
    out.verdict = FanValidity::Verdict::DependentSubset;
    return out;
  }

  // All subsets independent: the null space of [k_0 ... k_n] is exactly one
  // dimensional, so the smallest right singular vector is the dependency.
  const Svd sv = onesided_jacobi_svd(Mat::from_columns(normals));
  Vec lam = sv.v.col(m - 1);
  int imax = 0;
  for (int i = 1; i < m; ++i)
    if (std::abs(lam[i]) > std::abs(lam[imax])) imax = i;
  lam = (1.0 / lam[imax]) * lam;  // max-abs entry becomes +1

  bool any_pos = false, any_neg = false;
  for (double x : lam) {
    if (x > 0.0) any_pos = true;
    if (x < 0.0) any_neg = true;
  }
  out.dependency = lam;
  if (any_pos && any_neg) out.verdict = FanValidity::Verdict::MixedSigns;
  return out;
}

// ---------------------------------------------------------------------------
// Normals -> simplex
// ---------------------------------------------------------------------------

namespace detail {

// Volume scale hidden in a canonical fan matrix:
//   det K = (-1)^(n+1) (n vol)^n / (n-1)!,
// so the sign of det K must be (-1)^(n+1) and n vol is the real n-th root of
// (n-1)! |det K|.
inline double nvol_from_detk(int n, double detk) {
  const double want_sign = (n % 2 == 0) ? -1.0 : 1.0;
  if (detk == 0.0 || (detk > 0.0) != (want_sign > 0.0))
    throw NonPositiveRadicand(
        "fan determinant has the wrong sign for dimension " +
        std::to_string(n) + "; no volume scale exists");
  double fact = 1.0;
  for (int i = 2; i < n; ++i) fact *= i;
  return std::pow(fact * std::abs(detk), 1.0 / n);
}

}  // namespace detail

// Builds a fan from already canonically scaled data, validating the scaling.
inline NormalFan make_normal_fan(const std::vector<Vec>& normals,
                                 const Vec& kappa,
                                 const Tolerances& tol = {}) {
  const int m = static_cast<int>(normals.size());
  const int n = m - 1;
  if (static_cast<int>(kappa.size()) != m)
    throw BadInput("make_normal_fan: need one kappa per normal");
  const FanValidity fv = validate_normal_fan(normals, tol);
  if (!fv.valid())
    throw InvalidFan("make_normal_fan: directions do not form a fan");

  NormalFan fan;
  fan.n = n;
  fan.K = Mat(m, m);
  double kscale = 0.0;
  for (int i = 0; i < m; ++i) {
    fan.K(0, i) = kappa[i];
    for (int r = 0; r < n; ++r) fan.K(r + 1, i) = normals[i][r];
    kscale = std::max(kscale, norm2(normals[i]));
  }

  const double nvol = detail::nvol_from_detk(n, det(fan.K));
  fan.vol = nvol / n;

  Vec ksum(n, 0.0);
  double kapsum = 0.0;
  for (int i = 0; i < m; ++i) {
    axpy(1.0, normals[i], ksum);
    kapsum += kappa[i];
  }
  if (norm2(ksum) > tol.fan_consistency * kscale ||
      std::abs(kapsum + nvol) > tol.fan_consistency * nvol)
    throw InvalidFan(
        "make_normal_fan: data is not canonically scaled "
        "(rescale against contact points first)");
  return fan;
}

inline Simplex vertices_from_normals(const NormalFan& fan,
                                     const Tolerances& tol = {}) {
  const int m = fan.n + 1;
  Lu f = lu_factor(fan.K.transposed());
  if (f.singular)
    throw InvalidFan("vertices_from_normals: fan matrix is singular");
  const Mat v = lu_solve(f, (-fan.nvol()) * Mat::identity(m));

  // Row 0 of V must be all ones; anything else means the homogeneous data
  // was inconsistent even though the determinant looked fine.
  for (int j = 0; j < m; ++j)
    if (std::abs(v(0, j) - 1.0) > tol.fan_consistency)
      throw InvalidFan(
          "vertices_from_normals: fan is not the scaled dual of any simplex");

  std::vector<Vec> verts(m, Vec(fan.n));
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < fan.n; ++i) verts[j][i] = v(i + 1, j);
  Simplex s = make_simplex(verts, tol);
  if (s.reoriented)
    throw InternalCheckFailure(
        "vertices_from_normals: recovered simplex changed orientation");
  return s;
}

// ---------------------------------------------------------------------------
// Rescaling a raw fan against contact points
// ---------------------------------------------------------------------------

// Given outward directions (arbitrary positive scales) and one point on each
// face's hyperplane, recovers the simplex and the canonical scaling.  The
// dependency coefficients fix the relative scales; the kappa sum fixes the
// overall one.
inline NormalFan rescale_fan(const std::vector<Vec>& raw_normals,
                             const std::vector<Vec>& points,
                             const Tolerances& tol = {}) {
  const int m = static_cast<int>(raw_normals.size());
  const int n = m - 1;
  if (static_cast<int>(points.size()) != m)
    throw BadInput("rescale_fan: need one point per normal");

  const FanValidity fv = validate_normal_fan(raw_normals, tol);
  if (!fv.valid()) throw InvalidFan("rescale_fan: directions do not form a fan");

  std::vector<Vec> khat(m);
  for (int i = 0; i < m; ++i)
    khat[i] = std::abs(fv.dependency[i]) * raw_normals[i];

  // Vertex j is the intersection of the n hyperplanes k_i . x = k_i . p_i,
  // i != j.
  std::vector<Vec> verts(m);
  std::vector<Vec> pts = points;
  for (int j = 0; j < m; ++j) {
    Mat rows(n, n);
    Vec rhs(n);
    int r = 0;
    for (int i = 0; i < m; ++i) {
      if (i == j) continue;
      for (int c = 0; c < n; ++c) rows(r, c) = khat[i][c];
      rhs[r] = dot(khat[i], pts[i]);
      ++r;
    }
    Lu f = lu_factor(rows);
    if (f.singular)
      throw InvalidFan("rescale_fan: face hyperplanes do not intersect");
    verts[j] = lu_solve(f, rhs);
  }

  // Fix orientation before pairing faces with vertices: a label swap of
  // vertices 0 and 1 swaps the opposite faces too.
  {
    Mat v(m, m);
    for (int j = 0; j < m; ++j) {
      v(0, j) = 1.0;
      for (int i = 0; i < n; ++i) v(i + 1, j) = verts[j][i];
    }
    if (det(v) < 0.0) {
      std::swap(verts[0], verts[1]);
      std::swap(khat[0], khat[1]);
      std::swap(pts[0], pts[1]);
    }
  }
  const Simplex s = make_simplex(verts, tol);

  Vec kaphat(m);
  double ksum = 0.0;
  for (int i = 0; i < m; ++i) {
    kaphat[i] = -dot(khat[i], pts[i]);
    ksum += kaphat[i];
  }
  if (ksum >= 0.0)
    throw NonNegativeKappaSum(
        "rescale_fan: offsets sum >= 0; directions point inward");

  const double c = s.n * s.vol / (-ksum);
  NormalFan fan;
  fan.n = n;
  fan.vol = s.vol;
  fan.K = Mat(m, m);
  for (int i = 0; i < m; ++i) {
    fan.K(0, i) = c * kaphat[i];
    for (int r = 0; r < n; ++r) fan.K(r + 1, i) = c * khat[i][r];
  }
  return fan;
}

// ---------------------------------------------------------------------------
// Face volumes
// ---------------------------------------------------------------------------

// (n-1)-volume of face i (the facet opposite vertex i) via the Gram
// determinant of its edge matrix.
inline double face_volume(const Simplex& s, int i) {
  assert(i >= 0 && i <= s.n);
  std::vector<Vec> fverts;
  for (int j = 0; j <= s.n; ++j)
    if (j != i) fverts.push_back(s.vertex(j));
  const int d = static_cast<int>(fverts.size()) - 1;
  if (d == 0) return 1.0;

  Mat e(s.n, d);
  for (int c = 0; c < d; ++c) e.set_col(c, fverts[c + 1] - fverts[0]);
  const Mat g = e.transposed() * e;
  double fact = 1.0;
  for (int k = 2; k <= d; ++k) fact *= k;
  return std::sqrt(std::max(det(g), 0.0)) / fact;
}

}  // namespace immob
