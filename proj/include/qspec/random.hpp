#pragma once

// Seeded generators for reproducible sweeps. std::mt19937_64 is specified
// bit-exactly by the standard; the conversions below avoid the
// implementation-defined std::*_distribution so that a seed means the same
// numbers on every platform.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "qspec/qmatrix.hpp"
#include "qspec/quaternion.hpp"

namespace qspec {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller.
  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  Quaternion quaternion() { return {normal(), normal(), normal(), normal()}; }

  /// Uniform on the sphere of imaginary units.
  ImaginaryUnit unit() {
    for (;;) {
      const double x = normal(), y = normal(), z = normal();
      if (std::hypot(std::hypot(x, y), z) > 1e-8) return ImaginaryUnit::from_vector(x, y, z);
    }
  }

  /// Gaussian entries rescaled to operator norm `target_norm`.
  QMatrix matrix(std::size_t n, double target_norm = 1.0) {
    QMatrix m(n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) m(r, c) = quaternion();
    const double scale = operator_norm(m);
    return scale > 0.0 ? m * (target_norm / scale) : m;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace qspec
