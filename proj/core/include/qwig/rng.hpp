#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace qwig {

// Default seed used for every "seeded" artifact in the suite.
inline constexpr std::uint64_t kDefaultSeed = 0x57160;

// Deterministic random source. std::mt19937_64 has a fully specified
// algorithm, but the std:: distributions do not, so normals are produced by
// an explicit Box-Muller transform: identical streams on every platform and
// standard library. Not thread-safe; use one instance per thread.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = kDefaultSeed) : engine_(seed) {}

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1p-53;
  }

  // Standard normal via Box-Muller; caches the second variate.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  // Complex with independent standard-normal real and imaginary parts.
  std::complex<double> cnormal() {
    const double re = normal();
    const double im = normal();
    return {re, im};
  }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace qwig
