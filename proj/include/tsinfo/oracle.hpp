#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "tsinfo/core.hpp"

namespace tsinfo {

/// A finite stationary Markov chain given by its row-stochastic transition
/// matrix. Immutable; the stationary distribution may be cached at build
/// time by generators that know it.
class MarkovChainSpec {
 public:
  MarkovChainSpec(std::uint32_t n_states, std::vector<double> row_major_transition);

  std::uint32_t n_states() const { return n_states_; }
  double transition(std::uint32_t from, std::uint32_t to) const {
    return p_[static_cast<std::size_t>(from) * n_states_ + to];
  }
  std::span<const double> row(std::uint32_t from) const {
    return {p_.data() + static_cast<std::size_t>(from) * n_states_, n_states_};
  }
  const std::vector<double>& transition_matrix() const { return p_; }

  /// Attaches a known stationary distribution; validated to 1e-10 residual.
  void cache_stationary(std::vector<double> pi);
  const std::optional<std::vector<double>>& cached_stationary() const { return stationary_; }

 private:
  std::uint32_t n_states_;
  std::vector<double> p_;
  std::optional<std::vector<double>> stationary_;
};

/// Exact stationary law of a block of mapped symbols, keyed by block code.
struct BlockDistribution {
  std::uint32_t block_len = 0;
  std::uint32_t alphabet_size = 0;
  std::map<std::uint64_t, double> prob;
};

/// Exact computable brackets for the entropy rate of the mapped process:
/// H(Y_k | Y_1..Y_{k-1}, X_0) <= h_inf <= H(Y_k | Y_0..Y_{k-1}).
/// The gap certifies how far the k-block approximation is from the limit.
struct EntropyRateSandwich {
  std::uint32_t k = 0;
  Bits lower = 0.0;
  Bits upper = 0.0;
};

struct CiCheckResult {
  bool satisfied = false;
  double max_violation = 0.0;
};

struct ChainRuleCheck {
  bool holds = false;
  Bits lhs = 0.0;
  Bits rhs = 0.0;
};

/// Unique stationary distribution of a chain with a single closed
/// communicating class (transient states get zero mass). Throws a
/// ValidationError naming the closed classes when there are several.
std::vector<double> stationary_distribution(const MarkovChainSpec& spec);

/// Strongly connected components of the positive-transition digraph,
/// as a component label per state plus the set of closed components.
struct SccResult {
  std::vector<std::uint32_t> component;
  std::uint32_t n_components = 0;
  std::vector<bool> closed;
};
SccResult strongly_connected_components(const MarkovChainSpec& spec);

/// Exact stationary law of (f(X_0),...,f(X_k)).
BlockDistribution exact_block_distribution(const MarkovChainSpec& spec,
                                           const RepresentationFunction& f, std::uint32_t k);

/// Entropy of the pushforward of the stationary distribution through f.
Bits exact_h0(const MarkovChainSpec& spec, const RepresentationFunction& f);

/// Exact conditional entropy H(Y_k | Y_0..Y_{k-1}) of the mapped process.
Bits exact_hk(const MarkovChainSpec& spec, const RepresentationFunction& f, std::uint32_t k);

/// Exact mutual information between the last and the first k coordinates of
/// the mapped block law.
Bits exact_ik(const MarkovChainSpec& spec, const RepresentationFunction& f, std::uint32_t k);

EntropyRateSandwich entropy_rate_sandwich(const MarkovChainSpec& spec,
                                          const RepresentationFunction& f, std::uint32_t k);

/// Checks, over every positive-probability window configuration, that the
/// conditional law of X_0 given its label and the window neighbours equals
/// the conditional law given the label alone. `window` is the number of
/// neighbours on each side; one suffices for Markov chains.
CiCheckResult ci_check_markov(const MarkovChainSpec& spec, const RepresentationFunction& f,
                              double tol, std::uint32_t window = 1);

/// Verifies the entropy identity
/// H(Y_0 | Y_{-1}, Z_{-1}, Y_1, Z_1) = H(Y_0 | Y_{-1}, Y_1), with Y = f(X)
/// and Z = g(X), which must hold whenever f passes the CI check. The two
/// sides are computed exactly and reported for diagnostics.
ChainRuleCheck chain_rule_identity_check(const MarkovChainSpec& spec,
                                         const RepresentationFunction& f,
                                         const RepresentationFunction& g);

/// Transition matrix of the reversed stationary chain (irreducible only).
MarkovChainSpec time_reversal(const MarkovChainSpec& spec);

/// Transition matrix of the induced label process M(y,y') =
/// P(f(X_1)=y' | f(X_0)=y) under the stationary law.
std::vector<double> induced_label_transition(const MarkovChainSpec& spec,
                                             const RepresentationFunction& f);

/// Smallest k <= k_max at which exact_ik(f,k) exceeds exact_ik(g,k) by more
/// than `margin`, if any.
std::optional<std::uint32_t> first_strict_k(const MarkovChainSpec& spec,
                                            const RepresentationFunction& f,
                                            const RepresentationFunction& g, std::uint32_t k_max,
                                            double margin);

/// Total variation sum |p - p_hat| between an exact block law and empirical
/// block counts on the same alphabet and block length. Range [0, 2].
double block_total_variation(const BlockDistribution& exact,
                             const EmpiricalBlockDistribution& empirical);

/// Entropy of an exact block law (or any nonnegative weight map summing
/// to ~1).
Bits entropy_of_map(const std::map<std::uint64_t, double>& prob);

}  // namespace tsinfo
