#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace interlace {

/// SplitMix64 finalizer; the fixed mixing function behind every derived seed.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed of the `index`-th child of `seed`. Children of distinct indices are
/// statistically independent streams; the mapping never depends on threads.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return mix64(mix64(seed) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

/// Named sub-purposes so that two consumers of one master seed never share draws.
enum class StreamTag : std::uint64_t {
  PathA = 1,
  PathB = 2,
  Kernel = 3,
  Evolve = 4,
  Permutation = 5,
  Ensemble = 6,
  Fresh = 7,
  Misc = 8,
};

constexpr std::uint64_t derive_seed(std::uint64_t seed, StreamTag tag) noexcept {
  return derive_seed(seed, 0xfeedULL * static_cast<std::uint64_t>(tag));
}

/// An owned, explicitly passed source of randomness.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(mix64(seed)) {}

  RandomStream child(std::uint64_t index) const { return RandomStream(derive_seed(seed_of_engine(), index)); }

  /// Uniform on the open interval (0, 1).
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  double normal() { return normal_(engine_); }

  double normal(double sd) { return sd * normal_(engine_); }

  /// Standard complex Gaussian: independent real/imaginary parts N(0, 1/2).
  std::complex<double> complex_normal() {
    constexpr double kHalfSd = 0.70710678118654752440;
    const double re = normal_(engine_);
    const double im = normal_(engine_);
    return {kHalfSd * re, kHalfSd * im};
  }

  double exponential() { return -std::log(uniform()); }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    std::uniform_int_distribution<std::uint64_t> dist(0, n - 1);
    return dist(engine_);
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_of_engine() const {
    std::mt19937_64 copy = engine_;
    return copy();
  }

  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace interlace
