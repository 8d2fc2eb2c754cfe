#pragma once

#include <cstdint>

namespace sfol {

/// Self-contained seeded generator. The distribution transforms are written
/// out here rather than taken from <random> so that streams are bit-for-bit
/// reproducible independent of the standard library implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

  /// xorshift64* core.
  std::uint64_t next_u64() {
    std::uint64_t x = state_;
    x ^= x >> 12;
    x ^= x << 25;
    x ^= x >> 27;
    state_ = x;
    return x * 0x2545F4914F6CDD1DULL;
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in (0, 1), never exactly 0 (safe for logs).
  double uniform_open() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  int uniform_int(int n);  // in [0, n)

  bool bernoulli(double p) { return uniform() < p; }

  /// Standard normal, Box-Muller.
  double normal();

  /// Gamma(shape, 1), Marsaglia-Tsang. Any shape > 0.
  double gamma(double shape);

  /// Beta(a, b) as a ratio of gammas.
  double beta(double a, double b);

 private:
  std::uint64_t state_;
  bool has_cached_normal_ = false;
  double cached_normal_ = 0.0;
};

}  // namespace sfol
