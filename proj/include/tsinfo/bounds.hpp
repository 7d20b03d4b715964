#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tsinfo/core.hpp"

namespace tsinfo {

/// Inputs to the concentration bounds. `d` is the VC dimension of the
/// per-label indicator class of the candidate family; `epsilon` is the
/// deviation threshold in bits; `gamma` the geometric mixing rate.
struct BoundParams {
  std::uint32_t d = 1;
  double epsilon = 0.1;
  std::uint64_t n = 0;
  double gamma = 0.9;
  std::uint32_t k = 1;
  std::uint32_t alphabet_size = 2;
};

/// Mixing coefficients beta(t) for t = 1..t_max; nonincreasing, in [0, 1].
class BetaSchedule {
 public:
  explicit BetaSchedule(std::vector<double> values);
  static BetaSchedule geometric(double gamma, std::size_t t_max);
  static BetaSchedule iid(std::size_t t_max);

  double at(std::size_t t) const;  // 1-based
  std::size_t t_max() const { return values_.size(); }

 private:
  std::vector<double> values_;
};

/// Blocking-technique deviation bound with an explicit mixing schedule:
///   n * beta(t_n) + 8 * t_n^(d+1) * exp(-l_n eps^2 / 8),   l_n = n / t_n.
/// Values above 1 are returned raw; callers clamp for probability use.
double blocked_deviation_bound(const BetaSchedule& beta, std::uint64_t d, double epsilon,
                               std::uint64_t n, std::uint64_t t_n);

/// Geometric-mixing specialization at t_n = l_n = sqrt(n):
///   n * gamma^sqrt(n) + 8 * n^((d+1)/2) * exp(-sqrt(n) eps^2 / 8).
/// Evaluated in the log domain; may return +inf when vacuously large.
double mixing_deviation_bound(std::uint64_t d, double epsilon, std::uint64_t n, double gamma);

/// Uniform deviation bound for the plug-in k-block information estimate
/// over a family with per-label VC dimension d:
///   2 |Y|^(k+1) * mixing_deviation_bound(7kd, eff, n-k, gamma),
/// where eff = min(eps / (6 (k+1) |Y|^(k+1) log2 |Y|),
///                 binary_entropy_inverse(eps / (6 |Y|^(k+1)))).
double ik_deviation_bound(const BoundParams& params);

/// Sample size past which ik_deviation_bound is nonincreasing in n (both of
/// its terms are decreasing). Saturates at 2^63 when out of double range.
std::uint64_t ik_deviation_crossover_n(const BoundParams& params);

/// Bound on |I(p) - I(q)| in bits from the block total variation
/// alpha = sum |p - q| over (k+1)-blocks:
///   3 (k+1) alpha log2|Y| + 3 h(min(alpha, 1/2))      for alpha <= 1,
/// and the trivial information cap 2 (k+1) log2|Y| (flagged saturated)
/// for alpha > 1, where the binary-entropy term is no longer monotone.
struct InfoTvBound {
  Bits bits = 0.0;
  bool saturated = false;
};
InfoTvBound info_tv_bound(std::uint32_t k, std::uint32_t alphabet_size, double alpha);

/// Smallest n (params.n is ignored) with ik_deviation_bound <= target_prob,
/// by exponential search plus bisection; minimal on the monotone tail.
/// Empty when no n <= 1e12 reaches the target.
std::optional<std::uint64_t> required_sample_size(const BoundParams& params, double target_prob);

/// Search cap for required_sample_size.
constexpr std::uint64_t kRequiredSampleSizeCap = 1000000000000ull;

}  // namespace tsinfo
