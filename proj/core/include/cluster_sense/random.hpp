#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace cluster_sense {

/// Mixes a list of integers into one 64-bit seed (SplitMix64 finalizer
/// chained over the inputs). Used for counter-based stream derivation:
/// every column, cell and repeat gets its own stream keyed by its indices.
std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts) noexcept;

/// Random stream with platform-independent transforms. std::mt19937_64 is
/// fully specified by the standard; the distribution objects are not, so the
/// uniform and normal transforms are implemented here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform() noexcept;
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  /// Standard normal via Box-Muller; the second variate of each pair is cached.
  double normal() noexcept;
  double normal(double mean, double stddev) noexcept { return mean + stddev * normal(); }
  /// Uniform integer in [0, bound), bound > 0. Rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t bound) noexcept;

  std::uint64_t next() noexcept { return engine_(); }

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace cluster_sense
