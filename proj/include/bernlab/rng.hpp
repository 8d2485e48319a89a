#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace bernlab {

/// Seeded generator with distribution code owned by us, so that identical
/// seeds reproduce identical corpora on every platform and thread count.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() {  // [0, 1)
    return (double)(gen_() >> 11) * 0x1.0p-53;
  }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  int uniform_int(int lo, int hi) {  // inclusive range, modest spans only
    return lo + (int)(uniform() * (double)(hi - lo + 1));
  }
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0;
    while (u1 == 0) u1 = uniform();
    double u2 = uniform();
    double m = std::sqrt(-2.0 * std::log(u1));
    spare_ = m * std::sin(6.283185307179586 * u2);
    have_spare_ = true;
    return m * std::cos(6.283185307179586 * u2);
  }
  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0;
};

}  // namespace bernlab
