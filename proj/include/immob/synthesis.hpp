#pragma once

// Synthesis of immobilizing contact sets and the space of symmetry-keeping
// displacements around them.
//
// Two constructions are provided.  Placing each contact at its face centroid
// gives A = vol(Delta) I, the best-conditioned penetration matrix a simplex
// admits (margin exactly 1).  The centred family instead picks an interior
// point z and puts p_i = z + t_i k_i with t_i > 0 chosen so the contacts
// land on their faces; it exists for a nonempty open set of z and always
// yields a symmetric A = sum_i t_i k_i k_i^T that is positive definite.
//
// Around any symmetric-A contact set, the displacements that keep A
// symmetric while sliding contacts inside their faces form a linear space
// spanned by pair generators: generator (i, j) moves p_i by k_ij and p_j by
// k_ji, where k_ij is k_j made tangent to face i.  These generators carry
// exactly one linear dependency (all coefficients equal), so the space has
// dimension n(n+1)/2 - 1.

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "immob/contact.hpp"
#include "immob/errors.hpp"
#include "immob/mat.hpp"
#include "immob/simplex.hpp"
#include "immob/spectral.hpp"

namespace immob {

// ---------------------------------------------------------------------------
// Centroid contacts
// ---------------------------------------------------------------------------

inline ContactSet centroid_contacts(const Simplex& s,
                                    const Tolerances& tol = {}) {
  const int m = s.n + 1;
  Mat la(m, m, 1.0 / s.n);
  for (int j = 0; j < m; ++j) la(j, j) = 0.0;
  return contacts_from_barycentric(s, la, tol);
}

// ---------------------------------------------------------------------------
// Centred contacts
// ---------------------------------------------------------------------------

struct CentredWitness {
  Vec z;   // the centre
  Vec mu;  // barycentric weights of z
  Vec t;   // offsets along the outward normals, p_i = z + t_i k_i
};

struct CentredContacts {
  ContactSet set;
  CentredWitness witness;
};

// Contacts p_i = z + t_i k_i for a given interior centre z.  Feasibility
// requires every offset t_i and every off-diagonal weight lambda_ij to be
// strictly positive; violations are collected and thrown.
inline CentredContacts centred_contacts(const Simplex& s, const Vec& z,
                                        const Tolerances& tol = {}) {
  if (static_cast<int>(z.size()) != s.n)
    throw BadInput("centred_contacts: centre must have dimension n");
  const int m = s.n + 1;
  const NormalFan fan = normals_from_vertices(s);

  Lu f = lu_factor(s.V);
  if (f.singular)
    throw DegenerateSimplex("centred_contacts: singular vertex matrix");
  Vec zh(m);
  zh[0] = 1.0;
  for (int i = 0; i < s.n; ++i) zh[i + 1] = z[i];
  const Vec mu = lu_solve(f, zh);

  std::vector<double> ksq(m);
  for (int i = 0; i < m; ++i) ksq[i] = dot(fan.normal(i), fan.normal(i));

  Vec t(m);
  for (int j = 0; j < m; ++j) t[j] = fan.nvol() * mu[j] / ksq[j];

  Mat la(m, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i)
      la(i, j) = (i == j) ? 0.0
                          : mu[i] - mu[j] / ksq[j] *
                                        dot(fan.normal(i), fan.normal(j));

  std::vector<std::pair<int, int>> bad_weights;
  std::vector<int> bad_offsets;
  for (int j = 0; j < m; ++j) {
    if (!(t[j] > 0.0)) bad_offsets.push_back(j);
    for (int i = 0; i < m; ++i)
      if (i != j && !(la(i, j) > 0.0)) bad_weights.emplace_back(i, j);
  }
  if (!bad_weights.empty() || !bad_offsets.empty())
    throw NotCentredFeasible(std::move(bad_weights), std::move(bad_offsets),
                             "centred_contacts: centre admits no feasible "
                             "offsets");

  // Columns sum to 1 in exact arithmetic; renormalize the roundoff so the
  // stochastic contract holds bit-for-bit downstream.
  for (int j = 0; j < m; ++j) {
    double sum = 0.0;
    for (int i = 0; i < m; ++i) sum += la(i, j);
    for (int i = 0; i < m; ++i) la(i, j) /= sum;
  }

  CentredContacts out;
  out.set = contacts_from_barycentric(s, la, tol);
  out.witness = CentredWitness{z, mu, t};
  return out;
}

// A centre that is always feasible: weight each vertex by the size of the
// opposite face, mu_i = |k_i| / sum_l |k_l|.  Strict positivity of the
// lambda weights then reduces to the strict Cauchy-Schwarz inequality
// between non-parallel normals.
inline CentredContacts centred_feasible_witness(const Simplex& s,
                                                const Tolerances& tol = {}) {
  const int m = s.n + 1;
  const NormalFan fan = normals_from_vertices(s);
  double total = 0.0;
  Vec mu(m);
  for (int i = 0; i < m; ++i) {
    mu[i] = norm2(fan.normal(i));
    total += mu[i];
  }
  for (int i = 0; i < m; ++i) mu[i] /= total;

  Vec z(s.n, 0.0);
  for (int j = 0; j < m; ++j) axpy(mu[j], s.vertex(j), z);
  return centred_contacts(s, z, tol);
}

// ---------------------------------------------------------------------------
// Displacement space
// ---------------------------------------------------------------------------

struct DisplacementCoeff {
  int i = 0;
  int j = 0;
  double t = 0.0;
};

struct DisplacementBasis {
  int n = 0;
  // k_tangent[i][j] = k_j - (k_i . k_j / |k_i|^2) k_i, the direction contact
  // p_i moves under generator (i, j).  Diagonal entries are unused.
  std::vector<std::vector<Vec>> k_tangent;

  struct Generator {
    int i = 0;
    int j = 0;
    Mat dP;  // n x (n+1); column i = k_ij, column j = k_ji, rest zero
  };
  std::vector<Generator> generators;  // (i, j) lexicographic, i < j
};

inline DisplacementBasis displacement_basis(const NormalFan& fan) {
  const int m = fan.n + 1;
  DisplacementBasis b;
  b.n = fan.n;
  b.k_tangent.assign(m, std::vector<Vec>(m));
  for (int i = 0; i < m; ++i) {
    const Vec ki = fan.normal(i);
    const double ksq = dot(ki, ki);
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      Vec kij = fan.normal(j);
      axpy(-dot(ki, kij) / ksq, ki, kij);
      b.k_tangent[i][j] = std::move(kij);
    }
  }
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      DisplacementBasis::Generator g;
      g.i = i;
      g.j = j;
      g.dP = Mat(fan.n, m);
      g.dP.set_col(i, b.k_tangent[i][j]);
      g.dP.set_col(j, b.k_tangent[j][i]);
      b.generators.push_back(std::move(g));
    }
  return b;
}

namespace detail {

inline Vec vectorize(const Mat& m) {
  Vec v(static_cast<std::size_t>(m.rows()) * m.cols());
  std::size_t k = 0;
  for (int j = 0; j < m.cols(); ++j)
    for (int i = 0; i < m.rows(); ++i) v[k++] = m(i, j);
  return v;
}

inline Mat generator_matrix(const DisplacementBasis& b) {
  const int rows = b.n * (b.n + 1);
  const int cols = static_cast<int>(b.generators.size());
  Mat g(rows, cols);
  for (int c = 0; c < cols; ++c) g.set_col(c, vectorize(b.generators[c].dP));
  return g;
}

}  // namespace detail

struct DisplacementRankReport {
  int rank = 0;
  int generator_count = 0;
  Vec dependency;  // coefficients of the null direction, scaled to lead 1
  // Max deviation of the dependency entries from 1 after scaling; near zero
  // certifies the all-equal-coefficients null space.
  double dependency_spread = 0.0;
};

inline DisplacementRankReport displacement_space_rank(
    const DisplacementBasis& b, const Tolerances& tol = {}) {
  const Mat g = detail::generator_matrix(b);
  const Svd sv = onesided_jacobi_svd(g);
  DisplacementRankReport rep;
  rep.generator_count = g.cols();
  rep.rank = svd_rank(sv, tol.svd_rank);

  Vec dep = sv.v.col(g.cols() - 1);
  int imax = 0;
  for (int i = 1; i < g.cols(); ++i)
    if (std::abs(dep[i]) > std::abs(dep[imax])) imax = i;
  if (dep[imax] != 0.0) dep = (1.0 / dep[imax]) * dep;
  double spread = 0.0;
  for (double x : dep) spread = std::max(spread, std::abs(x - 1.0));
  rep.dependency = std::move(dep);
  rep.dependency_spread = spread;
  return rep;
}

// ---------------------------------------------------------------------------
// Applying displacements
// ---------------------------------------------------------------------------

inline ContactSet apply_displacement(const Simplex& s, const ContactSet& c,
                                     const std::vector<DisplacementCoeff>& coeffs,
                                     const Tolerances& tol = {}) {
  if (c.n != s.n) throw BadInput("apply_displacement: dimension mismatch");
  const int m = s.n + 1;
  const NormalFan fan = normals_from_vertices(s);
  const DisplacementBasis basis = displacement_basis(fan);

  std::vector<Vec> pts = c.points();
  for (const DisplacementCoeff& dc : coeffs) {
    if (dc.i < 0 || dc.j < 0 || dc.i >= m || dc.j >= m || dc.i == dc.j)
      throw BadInput("apply_displacement: bad generator index pair (" +
                     std::to_string(dc.i) + ", " + std::to_string(dc.j) + ")");
    axpy(dc.t, basis.k_tangent[dc.i][dc.j], pts[dc.i]);
    axpy(dc.t, basis.k_tangent[dc.j][dc.i], pts[dc.j]);
  }

  // Tangency keeps each point on its hyperplane, so the only failure mode is
  // sliding past the face boundary; report that before rebuilding.
  Lu f = lu_factor(s.V);
  if (f.singular)
    throw DegenerateSimplex("apply_displacement: singular vertex matrix");
  for (int j = 0; j < m; ++j) {
    Vec ph(m);
    ph[0] = 1.0;
    for (int r = 0; r < s.n; ++r) ph[r + 1] = pts[j][r];
    const Vec lam = lu_solve(f, ph);
    double worst = 0.0;
    for (int i = 0; i < m; ++i)
      if (i != j) worst = std::min(worst, lam[i]);
    if (worst < -tol.interior)
      throw LeftFace(j, worst,
                     "apply_displacement: contact " + std::to_string(j) +
                         " slid outside its face");
  }
  return contacts_from_points(s, pts, tol);
}

// ---------------------------------------------------------------------------
// Projection onto the generator span
// ---------------------------------------------------------------------------

struct ProjectionCoords {
  bool in_space = false;
  std::vector<DisplacementCoeff> coeffs;  // minimum-norm representation
  double residual = 0.0;                  // |G c - dP| over |dP|
  // Norm of sum_i (k_i dp_i^T - dp_i k_i^T); zero exactly when the
  // displacement keeps the penetration matrix symmetric.
  double wedge_defect = 0.0;
};

inline ProjectionCoords symmetry_projection_coords(const NormalFan& fan,
                                                   const Mat& dp,
                                                   const Tolerances& tol = {}) {
  const int m = fan.n + 1;
  if (dp.rows() != fan.n || dp.cols() != m)
    throw BadInput("symmetry_projection_coords: displacement must be "
                   "n x (n+1)");
  for (int i = 0; i < m; ++i) {
    const Vec ki = fan.normal(i);
    const Vec di = dp.col(i);
    const double nd = norm2(di);
    if (nd == 0.0) continue;
    if (std::abs(dot(ki, di)) > tol.plane * norm2(ki) * nd)
      throw BadInput("symmetry_projection_coords: column " +
                     std::to_string(i) + " is not tangent to its face");
  }

  const DisplacementBasis basis = displacement_basis(fan);
  const Mat g = detail::generator_matrix(basis);
  const Vec b = detail::vectorize(dp);
  const Svd sv = onesided_jacobi_svd(g);
  const Vec x = svd_min_norm_solve(sv, b, tol.svd_rank);

  Vec r = g * x - b;
  const double bn = norm2(b);

  ProjectionCoords out;
  out.residual = bn > 0.0 ? norm2(r) / bn : norm2(r);
  out.in_space = out.residual <= tol.span_residual;

  Mat wedge(fan.n, fan.n);
  for (int i = 0; i < m; ++i) {
    const Vec ki = fan.normal(i);
    const Vec di = dp.col(i);
    add_outer(wedge, 1.0, ki, di);
    add_outer(wedge, -1.0, di, ki);
  }
  out.wedge_defect = wedge.max_abs();

  out.coeffs.reserve(basis.generators.size());
  for (std::size_t c = 0; c < basis.generators.size(); ++c)
    out.coeffs.push_back({basis.generators[c].i, basis.generators[c].j,
                          x[c]});
  return out;
}

}  // namespace immob
