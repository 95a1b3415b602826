#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>

namespace irfit {

// SplitMix64 finalizer. Used as a mixing function when deriving seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives a child seed from a parent seed and a stream index. Derivation is a
// pure function of its inputs, so independent streams can be split off in any
// order (and from any thread) without coordination.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream) {
  return splitmix64(splitmix64(parent) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t s1,
                                    std::uint64_t s2) {
  return derive_seed(derive_seed(parent, s1), s2);
}

// Deterministic random source over std::mt19937_64. All distributions are
// implemented here with explicit arithmetic on raw engine output, because the
// standard <random> distributions are not required to produce identical
// streams across implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n). Rejection sampling keeps the draw unbiased.
  int uniform_int(int n) {
    const auto un = static_cast<std::uint64_t>(n);
    constexpr std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - max % un;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return static_cast<int>(x % un);
  }

  // Gaussian via Box-Muller; the second variate of each pair is cached.
  double normal(double mean, double sd) {
    if (has_spare_) {
      has_spare_ = false;
      return mean + sd * spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return mean + sd * radius * std::cos(angle);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace irfit
