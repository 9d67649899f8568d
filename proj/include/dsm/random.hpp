#pragma once

#include "dsm/core.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace dsm {

/// Seeded generator whose draws are identical on every platform: the
/// engine is fully specified by the standard and the mapping to doubles
/// is done here rather than by a library distribution.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  Vector uniform_vector(Eigen::Index n, double lo, double hi) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = uniform(lo, hi);
    return v;
  }

  /// Random point with norm at most `radius`. Directions come from the
  /// cube, so the density is not exactly uniform; radii follow r^(1/n).
  Vector in_ball(Eigen::Index n, double radius) {
    Vector v = uniform_vector(n, -1.0, 1.0);
    const double len = v.norm();
    if (len == 0.0) return v;
    const double r = std::pow(unit(), 1.0 / static_cast<double>(n));
    return v * (radius * r / len);
  }

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace dsm
