#include "tsinfo/rng.hpp"

#include <stdexcept>

namespace tsinfo {

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : state_(mix64(seed + kGamma) ^ mix64(stream * kGamma + 0x6A09E667F3BCC909ull)) {}

std::uint64_t CounterRng::next_u64() {
  state_ += kGamma;
  return mix64(state_);
}

double CounterRng::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::next_range(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

std::uint64_t CounterRng::next_below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("CounterRng::next_below: n must be positive");
  // Rejection sampling keeps the draw exactly uniform.
  const std::uint64_t limit = n * (UINT64_MAX / n);
  std::uint64_t v = next_u64();
  while (v >= limit) v = next_u64();
  return v % n;
}

std::uint32_t CounterRng::next_index(std::span<const double> probs) {
  const double u = next_unit();
  double cum = 0.0;
  for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
    cum += probs[i];
    if (u < cum) return static_cast<std::uint32_t>(i);
  }
  return static_cast<std::uint32_t>(probs.empty() ? 0 : probs.size() - 1);
}

}  // namespace tsinfo
