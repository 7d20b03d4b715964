#include "tsinfo/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tsinfo/estimators.hpp"

namespace tsinfo {

namespace {

constexpr double kExpOverflow = 709.0;  // exp() overflows past this

double exp_or_inf(double log_value) {
  if (log_value > kExpOverflow) return std::numeric_limits<double>::infinity();
  return std::exp(log_value);
}

void validate_common(double epsilon, double gamma, const char* op) {
  if (!(epsilon > 0.0)) {
    throw ValidationError(std::string(op) + ": epsilon must be positive");
  }
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw ValidationError(std::string(op) + ": gamma must lie in (0, 1)");
  }
}

}  // namespace

BetaSchedule::BetaSchedule(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw ValidationError("bounds.BetaSchedule: schedule must not be empty");
  double prev = 1.0;
  for (double v : values_) {
    if (v < 0.0 || v > 1.0) {
      throw ValidationError("bounds.BetaSchedule: coefficients must lie in [0, 1]");
    }
    if (v > prev + 1e-15) {
      throw ValidationError("bounds.BetaSchedule: coefficients must be nonincreasing");
    }
    prev = v;
  }
}

BetaSchedule BetaSchedule::geometric(double gamma, std::size_t t_max) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw ValidationError("bounds.BetaSchedule: gamma must lie in (0, 1)");
  }
  std::vector<double> values(t_max);
  double v = 1.0;
  for (double& out : values) {
    v *= gamma;
    out = v;
  }
  return BetaSchedule(std::move(values));
}

BetaSchedule BetaSchedule::iid(std::size_t t_max) {
  return BetaSchedule(std::vector<double>(t_max, 0.0));
}

double BetaSchedule::at(std::size_t t) const {
  if (t == 0 || t > values_.size()) {
    throw ValidationError("bounds.BetaSchedule: t=" + std::to_string(t) +
                          " outside schedule range 1.." + std::to_string(values_.size()));
  }
  return values_[t - 1];
}

double blocked_deviation_bound(const BetaSchedule& beta, std::uint64_t d, double epsilon,
                               std::uint64_t n, std::uint64_t t_n) {
  if (!(epsilon > 0.0)) {
    throw ValidationError("bounds.blocked_deviation_bound: epsilon must be positive");
  }
  if (t_n == 0 || t_n > n) {
    throw ValidationError("bounds.blocked_deviation_bound: t_n must lie in 1..n");
  }
  const double l_n = static_cast<double>(n) / static_cast<double>(t_n);
  const double mixing_term = static_cast<double>(n) * beta.at(t_n);
  const double process_term =
      exp_or_inf(std::log(8.0) + static_cast<double>(d + 1) * std::log(static_cast<double>(t_n)) -
                 l_n * epsilon * epsilon / 8.0);
  return mixing_term + process_term;
}

double mixing_deviation_bound(std::uint64_t d, double epsilon, std::uint64_t n, double gamma) {
  validate_common(epsilon, gamma, "bounds.mixing_deviation_bound");
  if (n == 0) throw ValidationError("bounds.mixing_deviation_bound: n must be >= 1");
  const double nd = static_cast<double>(n);
  const double root_n = std::sqrt(nd);
  const double mixing_term = exp_or_inf(std::log(nd) + root_n * std::log(gamma));
  const double process_term = exp_or_inf(std::log(8.0) +
                                         0.5 * static_cast<double>(d + 1) * std::log(nd) -
                                         root_n * epsilon * epsilon / 8.0);
  return mixing_term + process_term;
}

namespace {

void validate_ik_params(const BoundParams& p, const char* op) {
  validate_common(p.epsilon, p.gamma, op);
  if (p.alphabet_size < 2) {
    throw ValidationError(std::string(op) + ": alphabet size must be >= 2");
  }
  if (p.k == 0) throw ValidationError(std::string(op) + ": block memory k must be >= 1");
  if (p.d == 0) throw ValidationError(std::string(op) + ": VC dimension must be >= 1");
}

// Effective deviation passed to the inner bound after splitting epsilon
// between the linear and the binary-entropy error terms.
double effective_epsilon(const BoundParams& p) {
  const double cells = std::pow(static_cast<double>(p.alphabet_size),
                                static_cast<double>(p.k) + 1.0);
  const double log_y = std::log2(static_cast<double>(p.alphabet_size));
  const double linear = p.epsilon / (6.0 * static_cast<double>(p.k + 1) * cells * log_y);
  const double entropy_arg = std::min(1.0, p.epsilon / (6.0 * cells));
  return std::min(linear, binary_entropy_inverse(entropy_arg));
}

}  // namespace

double ik_deviation_bound(const BoundParams& p) {
  validate_ik_params(p, "bounds.ik_deviation_bound");
  if (p.n <= p.k) {
    throw ValidationError("bounds.ik_deviation_bound: need n > k");
  }
  const double cells = std::pow(static_cast<double>(p.alphabet_size),
                                static_cast<double>(p.k) + 1.0);
  const double eff = effective_epsilon(p);
  if (eff <= 0.0) return std::numeric_limits<double>::infinity();
  const std::uint64_t blown_d = 7ull * p.k * p.d;
  return 2.0 * cells * mixing_deviation_bound(blown_d, eff, p.n - p.k, p.gamma);
}

std::uint64_t ik_deviation_crossover_n(const BoundParams& p) {
  validate_ik_params(p, "bounds.ik_deviation_crossover_n");
  const double eff = effective_epsilon(p);
  constexpr std::uint64_t kSaturated = 1ull << 63;
  if (eff <= 0.0) return kSaturated;
  const std::uint64_t blown_d = 7ull * p.k * p.d;
  // m gamma^sqrt(m) decreases past (2 / -ln gamma)^2; the polynomial-times-
  // exponential term past (8 (d+1) / eff^2)^2.
  const double m_mixing = std::pow(2.0 / -std::log(p.gamma), 2.0);
  const double m_process = std::pow(8.0 * static_cast<double>(blown_d + 1) / (eff * eff), 2.0);
  const double m = std::max(m_mixing, m_process);
  if (m >= static_cast<double>(kSaturated)) return kSaturated;
  return p.k + static_cast<std::uint64_t>(std::ceil(m)) + 1;
}

InfoTvBound info_tv_bound(std::uint32_t k, std::uint32_t alphabet_size, double alpha) {
  if (alphabet_size == 0) {
    throw ValidationError("bounds.info_tv_bound: alphabet size must be >= 1");
  }
  if (alpha < 0.0) {
    throw ValidationError("bounds.info_tv_bound: total variation must be nonnegative");
  }
  if (alpha > 2.0 + 1e-9) {
    throw ValidationError("bounds.info_tv_bound: total variation cannot exceed 2");
  }
  const double log_y = std::log2(static_cast<double>(alphabet_size));
  InfoTvBound out;
  if (alpha > 1.0) {
    out.bits = 2.0 * static_cast<double>(k + 1) * log_y;
    out.saturated = true;
    return out;
  }
  out.bits = 3.0 * static_cast<double>(k + 1) * alpha * log_y +
             3.0 * binary_entropy(std::min(alpha, 0.5));
  return out;
}

std::optional<std::uint64_t> required_sample_size(const BoundParams& params, double target_prob) {
  validate_ik_params(params, "bounds.required_sample_size");
  if (!(target_prob > 0.0 && target_prob < 1.0)) {
    throw ValidationError("bounds.required_sample_size: target probability must lie in (0, 1)");
  }
  auto bound_at = [&](std::uint64_t n) {
    BoundParams q = params;
    q.n = n;
    return ik_deviation_bound(q);
  };

  std::uint64_t lo = params.k + 1;
  if (bound_at(lo) <= target_prob) return lo;

  std::uint64_t hi = 0;
  for (std::uint64_t step = 2;; step *= 2) {
    std::uint64_t cand = params.k + step;
    if (cand > kRequiredSampleSizeCap) {
      cand = kRequiredSampleSizeCap;
      if (bound_at(cand) <= target_prob) {
        hi = cand;
        break;
      }
      return std::nullopt;
    }
    if (bound_at(cand) <= target_prob) {
      hi = cand;
      break;
    }
    lo = cand;
  }

  // The bound is monotone on its tail; bisect for the first n under target.
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (bound_at(mid) <= target_prob) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace tsinfo
