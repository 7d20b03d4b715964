#include "tsinfo/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace tsinfo {

namespace {

// Entropy of a count table: log2(n) - (1/n) sum c log2 c.
// Counts are accumulated in sorted key order so results do not depend on
// hash-map iteration order.
Bits entropy_of_counts(const std::unordered_map<std::uint64_t, std::uint64_t>& counts,
                       std::uint64_t total) {
  if (total == 0 || counts.size() <= 1) return 0.0;  // point masses are exactly zero
  std::vector<std::pair<std::uint64_t, std::uint64_t>> cells(counts.begin(), counts.end());
  std::sort(cells.begin(), cells.end());
  double sum_clogc = 0.0;
  for (const auto& [code, c] : cells) {
    if (c > 0) sum_clogc += static_cast<double>(c) * std::log2(static_cast<double>(c));
  }
  const double n = static_cast<double>(total);
  return std::max(0.0, std::log2(n) - sum_clogc / n);
}

bool support_too_sparse(std::uint32_t alphabet_size, std::uint32_t k, std::uint64_t n_blocks) {
  const double cells = std::pow(static_cast<double>(alphabet_size), static_cast<double>(k) + 1.0);
  return cells > 10.0 * static_cast<double>(n_blocks);
}

}  // namespace

Bits entropy(std::span<const double> dist) {
  if (dist.empty()) throw ValidationError("estimators.entropy: empty distribution");
  double sum = 0.0;
  for (double p : dist) {
    if (p < 0.0) throw ValidationError("estimators.entropy: negative entry " + std::to_string(p));
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ValidationError("estimators.entropy: entries sum to " + std::to_string(sum) +
                          ", expected 1 within 1e-9");
  }
  double h = 0.0;
  for (double p : dist) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return std::clamp(h, 0.0, std::log2(static_cast<double>(dist.size())));
}

Bits block_entropy(const EmpiricalBlockDistribution& dist) {
  return entropy_of_counts(dist.counts, dist.n_blocks);
}

Bits binary_entropy(double p) {
  if (p < 0.0 || p > 1.0) {
    throw ValidationError("estimators.binary_entropy: argument " + std::to_string(p) +
                          " outside [0, 1]");
  }
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

double binary_entropy_inverse(Bits target) {
  if (target < 0.0 || target > 1.0) {
    throw ValidationError("estimators.binary_entropy_inverse: target " + std::to_string(target) +
                          " outside [0, 1]");
  }
  if (target == 0.0) return 0.0;
  if (target == 1.0) return 0.5;
  double lo = 0.0, hi = 0.5;
  for (int i = 0; i < 200 && hi - lo > 1e-16; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (binary_entropy(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

Bits h0_hat_symbols(std::span<const Symbol> symbols, std::uint32_t alphabet_size) {
  const auto marginal = collect_blocks(symbols, 0, alphabet_size);
  return block_entropy(marginal);
}

Bits h0_hat(const RepresentationFunction& f, const ObservationSeries& series) {
  const auto symbols = apply_representation(f, series);
  return h0_hat_symbols(symbols, f.alphabet_size());
}

Bits hk_hat_symbols(std::span<const Symbol> symbols, std::uint32_t alphabet_size, std::uint32_t k) {
  if (k == 0) throw ValidationError("estimators.hk_hat: block memory k must be >= 1");
  const auto joint = collect_blocks(symbols, k, alphabet_size);
  const auto first = marginalize_first(joint, k);
  return std::max(0.0, block_entropy(joint) - block_entropy(first));
}

Bits hk_hat(const RepresentationFunction& f, const ObservationSeries& series, std::uint32_t k) {
  const auto symbols = apply_representation(f, series);
  return hk_hat_symbols(symbols, f.alphabet_size(), k);
}

InfoEstimate ik_hat_symbols(std::span<const Symbol> symbols, std::uint32_t alphabet_size,
                            std::uint32_t k) {
  if (k == 0) throw ValidationError("estimators.ik_hat: block memory k must be >= 1");
  const auto joint = collect_blocks(symbols, k, alphabet_size);
  const auto first = marginalize_first(joint, k);

  EmpiricalBlockDistribution last;
  last.block_len = 1;
  last.alphabet_size = alphabet_size;
  last.n_blocks = joint.n_blocks;
  for (const auto& [code, count] : joint.counts) last.counts[code % alphabet_size] += count;

  InfoEstimate est;
  est.value = std::max(0.0, block_entropy(last) + block_entropy(first) - block_entropy(joint));
  est.k_used = k;
  est.n_effective = joint.n_blocks;
  est.support_warning = support_too_sparse(alphabet_size, k, joint.n_blocks);
  return est;
}

InfoEstimate ik_hat(const RepresentationFunction& f, const ObservationSeries& series,
                    std::uint32_t k) {
  const auto symbols = apply_representation(f, series);
  return ik_hat_symbols(symbols, f.alphabet_size(), k);
}

std::uint32_t schedule_k(std::uint64_t n, std::uint32_t alphabet_size) {
  if (n < 2) throw ValidationError("estimators.schedule_k: sample size must be >= 2");
  if (alphabet_size == 0) throw ValidationError("estimators.schedule_k: alphabet size must be >= 1");
  const auto loglog = static_cast<std::uint32_t>(
      std::floor(std::log2(std::log2(static_cast<double>(n) + 2.0))));
  std::uint32_t k = 0;
  for (std::uint32_t cand = 1; cand <= loglog; ++cand) {
    const double cells =
        std::pow(static_cast<double>(alphabet_size), static_cast<double>(cand) + 1.0);
    if (cells <= static_cast<double>(n) / 10.0) k = cand;
  }
  return std::max(1u, k);
}

InfoEstimate iinf_hat_symbols(std::span<const Symbol> symbols, std::uint32_t alphabet_size) {
  const auto k = schedule_k(symbols.size(), alphabet_size);
  return ik_hat_symbols(symbols, alphabet_size, k);
}

InfoEstimate iinf_hat(const RepresentationFunction& f, const ObservationSeries& series) {
  const auto symbols = apply_representation(f, series);
  return iinf_hat_symbols(symbols, f.alphabet_size());
}

}  // namespace tsinfo
