#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace teflow {

// Reproducible random stream for the synthetic generators.
//
// Raw bits come from std::mt19937_64 seeded with the 64-bit seed as-is (the
// engine's output sequence is fixed by the C++ standard). Derived variates:
//   uniform()  = (next() >> 11) * 2^-53                in [0, 1)
//   normal()   = Box-Muller on u1 = 1 - uniform(), u2 = uniform():
//                r = sqrt(-2 ln u1); returns r cos(2 pi u2), then r sin(2 pi u2)
// Each normal() pair consumes exactly two raw draws; the sine half is cached.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace teflow
