#pragma once

#include <cstdint>
#include <span>

#include "tsinfo/core.hpp"

namespace tsinfo {

/// A plug-in information estimate together with the block memory and sample
/// count it was computed from.
struct InfoEstimate {
  Bits value = 0.0;
  std::uint32_t k_used = 0;
  std::uint64_t n_effective = 0;
  /// True when |Y|^(k+1) > 10 * n_blocks, i.e. the block support is too
  /// large for the sample and the estimate is likely biased.
  bool support_warning = false;
};

/// Shannon entropy -sum p log2 p of a probability vector (0 log 0 := 0).
/// Entries must be nonnegative and sum to 1 within 1e-9.
Bits entropy(std::span<const double> dist);

/// Entropy of the empirical symbol counts of a block distribution.
Bits block_entropy(const EmpiricalBlockDistribution& dist);

Bits binary_entropy(double p);

/// Inverse of the binary entropy on [0, 1/2], by bisection.
/// binary_entropy(binary_entropy_inverse(t)) = t within 1e-10.
double binary_entropy_inverse(Bits target);

/// Plug-in entropy of the empirical marginal of f over the whole series.
Bits h0_hat(const RepresentationFunction& f, const ObservationSeries& series);
Bits h0_hat_symbols(std::span<const Symbol> symbols, std::uint32_t alphabet_size);

/// Plug-in conditional entropy H(Y_k | Y_0..Y_{k-1}), computed from one
/// empirical (k+1)-block distribution as H(joint) - H(first-k marginal).
Bits hk_hat(const RepresentationFunction& f, const ObservationSeries& series, std::uint32_t k);
Bits hk_hat_symbols(std::span<const Symbol> symbols, std::uint32_t alphabet_size, std::uint32_t k);

/// Plug-in mutual information between the last coordinate and the first k
/// coordinates of the empirical (k+1)-block distribution:
/// H(last) + H(first-k) - H(joint). Nonnegative by construction.
InfoEstimate ik_hat(const RepresentationFunction& f, const ObservationSeries& series,
                    std::uint32_t k);
InfoEstimate ik_hat_symbols(std::span<const Symbol> symbols, std::uint32_t alphabet_size,
                            std::uint32_t k);

/// Block memory schedule k_n = max(1, min(floor(log2 log2 (n+2)),
/// largest k with |Y|^(k+1) <= n/10)). Nondecreasing in n and unbounded.
std::uint32_t schedule_k(std::uint64_t n, std::uint32_t alphabet_size);

/// ik_hat evaluated at the scheduled memory k_n.
InfoEstimate iinf_hat(const RepresentationFunction& f, const ObservationSeries& series);
InfoEstimate iinf_hat_symbols(std::span<const Symbol> symbols, std::uint32_t alphabet_size);

}  // namespace tsinfo
