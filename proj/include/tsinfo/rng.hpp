#pragma once

#include <cstdint>
#include <span>

namespace tsinfo {

/// Deterministic counter-based generator (SplitMix64 core), keyed by
/// (seed, stream). Streams derived from the same seed are independent, so
/// experiment fan-out can draw from disjoint streams without coordination.
/// Output is identical across platforms; no OS entropy is ever used.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();

  /// Uniform double in [0, 1) with 53 random bits.
  double next_unit();

  /// Uniform double in [lo, hi).
  double next_range(double lo, double hi);

  /// Uniform integer in [0, n).
  std::uint64_t next_below(std::uint64_t n);

  /// Categorical draw by cumulative scan over a probability row.
  std::uint32_t next_index(std::span<const double> probs);

 private:
  std::uint64_t state_;
};

}  // namespace tsinfo
