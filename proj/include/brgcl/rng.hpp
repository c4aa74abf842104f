#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "brgcl/common.hpp"

namespace brgcl {

/// splitmix64 step: advances the state and returns the next value.
std::uint64_t splitmix64(std::uint64_t& state);

/// Fixed 64-bit mixing of a root seed with two stream indices (noise level,
/// repeat, epoch, ...). Documented so any run in a sweep can be reproduced
/// standalone: mix_seed(root, a, b) == splitmix64 chain over root, a, b.
std::uint64_t mix_seed(std::uint64_t root, std::uint64_t a, std::uint64_t b);

/// Deterministic random source. All distributions are implemented in-repo on
/// top of mt19937_64 so that streams are bit-identical across platforms and
/// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). Requires n >= 1.
  std::size_t uniform_int(std::size_t n);

  /// Standard normal via Box-Muller; generates values in pairs.
  double normal();

  bool bernoulli(double p) { return uniform() < p; }

  /// In-place Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = uniform_int(i);
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace brgcl
