#pragma once

// Deterministic random sampling.  mt19937_64 output is pinned by the
// standard, and the transforms below avoid std::*_distribution (whose
// streams are implementation defined), so identical seeds give identical
// corpora on every platform.

#include <cstdint>
#include <random>

#include "immob/mat.hpp"

namespace immob {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1) with 53 significant bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Box-Muller without the cached spare, so draws map 1:1 to engine steps.
  double normal() {
    double u1 = uniform();
    while (u1 == 0.0) u1 = uniform();
    const double u2 = uniform();
    const double two_pi = 6.283185307179586476925286766559;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
  }

  Vec normal_vec(int n) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = normal();
    return v;
  }

  Vec unit_vec(int n) {
    for (;;) {
      Vec v = normal_vec(n);
      const double r = norm2(v);
      if (r > 1e-12) return (1.0 / r) * v;
    }
  }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace immob
