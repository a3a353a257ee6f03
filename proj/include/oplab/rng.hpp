#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace oplab {

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Counter-based splittable RNG. Every subcomputation derives its own stream
// from (seed, label...) so results are reproducible independently of
// scheduling or thread count.
class Rng {
 public:
  explicit Rng(std::uint64_t key) : key_(key) {}

  Rng derive(std::uint64_t label) const {
    return Rng(mix64(key_ ^ mix64(label + 0x517CC1B727220A95ull)));
  }
  Rng derive(std::uint64_t a, std::uint64_t b) const {
    return derive(a).derive(b);
  }
  Rng derive(std::uint64_t a, std::uint64_t b, std::uint64_t c) const {
    return derive(a).derive(b).derive(c);
  }

  std::uint64_t next_u64() {
    return mix64(key_ + 0x9E3779B97F4A7C15ull * ++counter_);
  }

  // uniform in [0, 1)
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform integer in [0, n)
  int uniform_int(int n) {
    return n <= 1 ? 0 : static_cast<int>(next_u64() % static_cast<std::uint64_t>(n));
  }

  int sign() { return (next_u64() & 1u) ? 1 : -1; }

  // standard real Gaussian, Box-Muller
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - uniform01();  // (0, 1]
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double t = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

  // complex Gaussian with E|g|^2 = 1
  std::complex<double> cnormal() {
    constexpr double half = 0.70710678118654752440;
    double re = normal();
    double im = normal();
    return {half * re, half * im};
  }

 private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace oplab
