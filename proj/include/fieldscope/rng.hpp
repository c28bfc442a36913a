#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "fieldscope/hash.hpp"

namespace fieldscope {

// Deterministic RNG wrapper. mt19937_64 output is fixed by the standard, and
// the derived draws below avoid std::uniform_*_distribution, whose mapping is
// implementation-defined; results are therefore identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Independent stream for a labeled sub-task (e.g. one tree of a forest).
  static Rng stream(std::uint64_t seed, std::uint64_t stream_id) {
    return Rng(fnv1a64(stream_id, fnv1a64(seed)));
  }

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, n). Rejection-free modulo; bias is negligible for the
  // bounded n used here (n << 2^32).
  std::uint64_t below(std::uint64_t n) { return gen_() % n; }

  // Uniform in [0, 1) with 53-bit resolution.
  double next_double() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Standard normal via Box-Muller (polar form would consume a variable
  // number of draws; the trig form keeps the draw count fixed).
  double next_gaussian() {
    double u1 = next_double();
    double u2 = next_double();
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace fieldscope
