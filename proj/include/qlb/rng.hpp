#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace qlb {

/// Mixes a seed with a stream key (splitmix64 finalizer on both words).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t key);

/// Seedable 64-bit generator with platform-independent derived draws.
///
/// The standard distributions are implementation-defined, so uniform reals
/// and bounded integers are derived here from the raw 64-bit engine output.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Independent substream keyed by (seed, key).
  static Rng stream(std::uint64_t seed, std::uint64_t key) {
    return Rng(mix_seed(seed, key));
  }
  /// Substream keyed by (seed, key1, key2).
  static Rng stream(std::uint64_t seed, std::uint64_t key1, std::uint64_t key2) {
    return Rng(mix_seed(mix_seed(seed, key1), key2));
  }

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Unbiased integer in [0, n). Requires n > 0.
  std::uint64_t below(std::uint64_t n);

  /// True with probability q.
  bool bernoulli(double q) { return uniform() < q; }

  /// A fresh 64-bit seed for deriving child generators.
  std::uint64_t split() { return mix_seed(engine_(), 0x5eedULL); }

 private:
  std::mt19937_64 engine_;
};

/// Uniformly random permutation of 0..n-1 (Fisher-Yates).
std::vector<std::size_t> random_permutation(std::size_t n, Rng& rng);

/// Uniformly random k-subset of 0..n-1, sorted ascending.
std::vector<std::size_t> random_subset(std::size_t n, std::size_t k, Rng& rng);

}  // namespace qlb
