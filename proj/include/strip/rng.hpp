#pragma once

#include <cstdint>
#include <random>

namespace strip {

/// Deterministic random stream. Distributions are implemented on top of the
/// raw mt19937_64 output so results are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Uniform in (0, 1); never returns 0 or 1.
  double uniform() {
    const std::uint64_t u = eng_() >> 11;  // 53 bits
    return (static_cast<double>(u) + 0.5) * 0x1.0p-53;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double ang = 6.283185307179586476925286766559 * u2;
    spare_ = rad * std::sin(ang);
    have_spare_ = true;
    return rad * std::cos(ang);
  }

  /// Lomax (Pareto type II): density (alpha/scale)(1+u/scale)^{-alpha-1}, u>0.
  double lomax(double alpha, double scale) {
    return scale * (std::pow(uniform(), -1.0 / alpha) - 1.0);
  }

  /// Seed for a derived stream (chunked Monte Carlo).
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t chunk) {
    std::uint64_t x = seed ^ (0x9E3779B97F4A7C15ULL * (chunk + 1));
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
  }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace strip
