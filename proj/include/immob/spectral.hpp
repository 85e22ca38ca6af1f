#pragma once

// Spectral routines for the small dense matrices used throughout:
//
//  * cyclic Jacobi eigensolver for symmetric matrices,
//  * one-sided Jacobi SVD with accumulated right singular vectors,
//  * scaling-and-squaring matrix exponential (degree-13 diagonal Pade),
//  * Newton polar iteration to re-orthonormalize a drifted rotation.
//
// Rank and independence questions are always decided on singular values of
// the matrix itself, never on eigenvalues of a Gram matrix: squaring the
// spectrum would push the interesting ratios below machine precision.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "immob/mat.hpp"

namespace immob {

// ---------------------------------------------------------------------------
// Symmetric eigenproblem, cyclic Jacobi
// ---------------------------------------------------------------------------

struct EigenSym {
  Vec values;   // ascending
  Mat vectors;  // orthonormal columns, vectors.col(i) pairs with values[i]
  int sweeps = 0;
};

// Sweeps stop when the off-diagonal Frobenius norm falls below
// rel_tol * ||A||_F.  50 sweeps is far beyond what these sizes ever need;
// hitting the cap means the input was not symmetric to begin with.
inline EigenSym jacobi_eigensystem(const Mat& a_in, double rel_tol = 1e-13,
                                   int max_sweeps = 50) {
  assert(a_in.rows() == a_in.cols());
  const int n = a_in.rows();
  Mat a = a_in;
  Mat v = Mat::identity(n);
  const double scale = a.frobenius();

  EigenSym out;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += 2.0 * a(p, q) * a(p, q);
    off = std::sqrt(off);
    if (off <= rel_tol * scale || off == 0.0) break;
    out.sweeps = sweep + 1;

    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Stable rotation angle: tan(2*theta) = 2*apq / (aqq - app).
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t =
            (theta >= 0.0 ? 1.0 : -1.0) /
            (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        const double app = a(p, p);
        const double aqq = a(q, q);
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (int i = 0; i < n; ++i) {
          if (i == p || i == q) continue;
          const double aip = a(i, p);
          const double aiq = a(i, q);
          a(i, p) = aip - s * (aiq + tau * aip);
          a(i, q) = aiq + s * (aip - tau * aiq);
          a(p, i) = a(i, p);
          a(q, i) = a(i, q);
        }
        for (int i = 0; i < n; ++i) {
          const double vip = v(i, p);
          const double viq = v(i, q);
          v(i, p) = vip - s * (viq + tau * vip);
          v(i, q) = viq + s * (vip - tau * viq);
        }
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return a(i, i) < a(j, j); });
  out.values.resize(n);
  out.vectors = Mat(n, n);
  for (int j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]);
    for (int i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// One-sided Jacobi SVD
// ---------------------------------------------------------------------------

struct Svd {
  Vec sigma;  // descending, size = cols of the input
  Mat u;      // same shape as the input; columns with sigma > 0 are unit
  Mat v;      // cols x cols, orthonormal columns
  int sweeps = 0;
};

// Hestenes one-sided Jacobi: orthogonalize column pairs of U by plane
// rotations, accumulating the same rotations into V, so input = U' diag(s) V^T
// after column normalization.  Convergence is quadratic; 60 sweeps is a
// safety net, typical runs finish in < 10.
inline Svd onesided_jacobi_svd(const Mat& m, int max_sweeps = 60) {
  const int k = m.cols();
  Svd out;
  out.u = m;
  out.v = Mat::identity(k);

  Mat& u = out.u;
  const double eps = 1e-15;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (int p = 0; p < k - 1; ++p) {
      for (int q = p + 1; q < k; ++q) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (int i = 0; i < u.rows(); ++i) {
          alpha += u(i, p) * u(i, p);
          beta += u(i, q) * u(i, q);
          gamma += u(i, p) * u(i, q);
        }
        if (gamma == 0.0) continue;
        if (std::abs(gamma) <= eps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t =
            (zeta >= 0.0 ? 1.0 : -1.0) /
            (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (int i = 0; i < u.rows(); ++i) {
          const double uip = u(i, p);
          const double uiq = u(i, q);
          u(i, p) = c * uip - s * uiq;
          u(i, q) = s * uip + c * uiq;
        }
        for (int i = 0; i < k; ++i) {
          const double vip = out.v(i, p);
          const double viq = out.v(i, q);
          out.v(i, p) = c * vip - s * viq;
          out.v(i, q) = s * vip + c * viq;
        }
      }
    }
    out.sweeps = sweep + 1;
    if (!rotated) break;
  }

  out.sigma.resize(k);
  for (int j = 0; j < k; ++j) out.sigma[j] = norm2(u.col(j));

  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return out.sigma[i] > out.sigma[j]; });

  Svd sorted;
  sorted.sweeps = out.sweeps;
  sorted.sigma.resize(k);
  sorted.u = Mat(u.rows(), k);
  sorted.v = Mat(k, k);
  for (int j = 0; j < k; ++j) {
    const int src = order[j];
    sorted.sigma[j] = out.sigma[src];
    Vec uc = u.col(src);
    if (sorted.sigma[j] > 0.0) uc = (1.0 / sorted.sigma[j]) * uc;
    sorted.u.set_col(j, uc);
    sorted.v.set_col(j, out.v.col(src));
  }
  return sorted;
}

// Numerical rank with a relative cutoff on the largest singular value.
inline int svd_rank(const Svd& s, double rel_cutoff) {
  if (s.sigma.empty() || s.sigma[0] == 0.0) return 0;
  const double cut = rel_cutoff * s.sigma[0];
  int r = 0;
  for (double x : s.sigma)
    if (x > cut) ++r;
  return r;
}

// Minimum-norm least squares via the pseudoinverse, same cutoff rule.
inline Vec svd_min_norm_solve(const Svd& s, const Vec& b, double rel_cutoff) {
  assert(s.u.rows() == static_cast<int>(b.size()));
  const int k = static_cast<int>(s.sigma.size());
  const double cut = s.sigma.empty() ? 0.0 : rel_cutoff * s.sigma[0];
  Vec x(k, 0.0);
  for (int j = 0; j < k; ++j) {
    if (s.sigma[j] <= cut || s.sigma[j] == 0.0) continue;
    const double coef = dot(s.u.col(j), b) / s.sigma[j];
    axpy(coef, s.v.col(j), x);
  }
  return x;
}

// ---------------------------------------------------------------------------
// Matrix exponential, scaling and squaring with degree-13 Pade
// ---------------------------------------------------------------------------

inline Mat expm(const Mat& a_in) {
  assert(a_in.rows() == a_in.cols());
  const int n = a_in.rows();

  // 1-norm (max column sum) drives the scaling step count.
  double n1 = 0.0;
  for (int j = 0; j < n; ++j) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += std::abs(a_in(i, j));
    n1 = std::max(n1, s);
  }
  const double theta13 = 5.371920351148152;
  int squarings = 0;
  Mat a = a_in;
  if (n1 > theta13) {
    squarings = static_cast<int>(std::ceil(std::log2(n1 / theta13)));
    a = std::ldexp(1.0, -squarings) * a;
  }

  static const double b[14] = {64764752532480000.0, 32382376266240000.0,
                               7771770303897600.0,  1187353796428800.0,
                               129060195264000.0,   10559470521600.0,
                               670442572800.0,      33522128640.0,
                               1323241920.0,        40840800.0,
                               960960.0,            16380.0,
                               182.0,               1.0};

  const Mat id = Mat::identity(n);
  const Mat a2 = a * a;
  const Mat a4 = a2 * a2;
  const Mat a6 = a4 * a2;

  Mat w1 = b[13] * a6 + b[11] * a4 + b[9] * a2;
  Mat u = a * (a6 * w1 + (b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id));
  Mat w2 = b[12] * a6 + b[10] * a4 + b[8] * a2;
  Mat v = a6 * w2 + (b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id);

  // Solve (V - U) X = (V + U).
  Mat num = v + u;
  Mat den = v - u;
  Lu f = lu_factor(den);
  if (f.singular) throw std::domain_error("expm: Pade denominator singular");
  Mat x = lu_solve(f, num);
  for (int k = 0; k < squarings; ++k) x = x * x;
  return x;
}

// ---------------------------------------------------------------------------
// Polar orthonormalization
// ---------------------------------------------------------------------------

inline double orthogonality_drift(const Mat& q) {
  const Mat r = q.transposed() * q - Mat::identity(q.cols());
  return r.max_abs();
}

// Newton iteration Q <- (Q + Q^-T)/2 converges quadratically to the nearest
// orthogonal factor; for inputs that are rotations up to rounding a couple
// of steps reach machine precision.
inline Mat polar_orthonormalize(Mat q, int max_iters = 20,
                                double tol = 1e-15) {
  assert(q.rows() == q.cols());
  for (int it = 0; it < max_iters; ++it) {
    if (orthogonality_drift(q) <= tol) break;
    Lu f = lu_factor(q.transposed());
    if (f.singular) throw std::domain_error("polar: singular iterate");
    const Mat qinv_t = lu_solve(f, Mat::identity(q.rows()));
    q = 0.5 * (q + qinv_t);
  }
  return q;
}

}  // namespace immob
