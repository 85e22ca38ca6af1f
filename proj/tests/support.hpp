#pragma once

// Shared corpus generators for the unit suites and the acceptance gate.
// Everything is seeded explicitly; a fixed seed reproduces the exact corpus.

#include <cmath>
#include <vector>

#include "immob/immob.hpp"

namespace support {

using namespace immob;

// Random simplex with a conditioning guard: vertices are uniform in the
// cube, rejected until the homogeneous matrix is comfortably far from
// singular so that downstream relative tolerances are meaningful.
inline Simplex random_simplex(int n, Rng& rng, double min_ratio = 0.02,
                              double min_vol = 1e-3) {
  for (;;) {
    std::vector<Vec> verts(n + 1);
    for (int j = 0; j <= n; ++j) {
      verts[j] = Vec(n);
      for (int i = 0; i < n; ++i) verts[j][i] = rng.uniform(-1.0, 1.0);
    }
    Mat v(n + 1, n + 1);
    for (int j = 0; j <= n; ++j) {
      v(0, j) = 1.0;
      for (int i = 0; i < n; ++i) v(i + 1, j) = verts[j][i];
    }
    const Svd sv = onesided_jacobi_svd(v);
    if (sv.sigma[0] <= 0.0) continue;
    if (sv.sigma[n] / sv.sigma[0] < min_ratio) continue;
    try {
      Simplex s = make_simplex(verts);
      if (s.vol >= min_vol) return s;
    } catch (const DegenerateSimplex&) {
    }
  }
}

// Strictly interior barycentric weights: positive entries bounded away from
// zero, columns normalized.
inline Mat random_interior_weights(int n, Rng& rng) {
  const int m = n + 1;
  Mat la(m, m);
  for (int j = 0; j < m; ++j) {
    double sum = 0.0;
    for (int i = 0; i < m; ++i) {
      if (i == j) continue;
      la(i, j) = rng.uniform(0.05, 1.0);
      sum += la(i, j);
    }
    for (int i = 0; i < m; ++i)
      if (i != j) la(i, j) /= sum;
  }
  return la;
}

inline std::vector<DisplacementCoeff> random_coeffs(int n, Rng& rng,
                                                    double scale) {
  std::vector<DisplacementCoeff> out;
  for (int i = 0; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      out.push_back({i, j, scale * rng.normal()});
  return out;
}

// Centroid contacts displaced by a random in-span step, backed off until the
// result stays strictly interior.  Always succeeds: centroids are interior
// and the weights move continuously with the step size.
inline ContactSet random_displaced_contacts(const Simplex& s, Rng& rng,
                                            double initial_scale = 0.25) {
  const ContactSet base = centroid_contacts(s);
  std::vector<DisplacementCoeff> coeffs =
      random_coeffs(s.n, rng, initial_scale * s.vol);
  for (int attempt = 0; attempt < 60; ++attempt) {
    try {
      ContactSet moved = apply_displacement(s, base, coeffs);
      if (moved.strictly_interior) return moved;
    } catch (const LeftFace&) {
    }
    for (auto& dc : coeffs) dc.t *= 0.5;
  }
  return base;
}

inline double max_abs_diff(const immob::Mat& a, const immob::Mat& b) {
  return (a - b).max_abs();
}

inline double max_abs_diff(const immob::Vec& a, const immob::Vec& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace support
