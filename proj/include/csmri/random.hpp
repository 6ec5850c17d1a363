#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace csmri {

/// Seeded generator whose derived draws are defined here rather than by the
/// standard library's distributions, so sequences match across toolchains.
class Rng
{
public:
  explicit Rng(std::uint64_t seed)
    : engine_(seed)
  {
  }

  std::uint64_t bits() { return engine_(); }

  /// Uniform on [0, 1) with 53 bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_open0() { return 1.0 - uniform(); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::size_t index(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }

  /// Standard normal by Box-Muller (one draw per call, no cached pair).
  double normal()
  {
    double const u1 = uniform_open0();
    double const u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

private:
  std::mt19937_64 engine_;
};

} // namespace csmri
