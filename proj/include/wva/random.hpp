#pragma once

#include <cstdint>
#include <random>

namespace wva {

/// SplitMix64 finalizer; a bijective 64-bit mix.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of the stream with the given index, derived from a master seed.
/// Depends only on (seed, index), so per-trial streams are reproducible
/// whatever order trials run in.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(mix64(master) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

/// A single random stream. Not thread-safe; give each thread its own.
///
/// Every variate is produced by code in this library rather than by
/// <random> distributions, whose output is implementation-defined, so a
/// seed reproduces the same numbers on any standard library.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Stream for sub-task `index`, independent of this stream's state.
  static RandomStream derived(std::uint64_t master, std::uint64_t index) {
    return RandomStream(derive_seed(master, index));
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on the open interval (0, 1).
  double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

  /// Standard normal (Marsaglia polar method).
  double normal();

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  /// Exact Poisson variate: sequential inversion below intensity 30,
  /// Hörmann's PTRS transformed rejection above.
  std::int64_t poisson(double mean);

  /// Number of failures before the first success of Bernoulli(p) trials.
  /// Returns a negative value when p == 0 (no success ever).
  std::int64_t geometric_failures(double p);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace wva
