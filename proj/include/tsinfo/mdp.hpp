#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "tsinfo/core.hpp"
#include "tsinfo/oracle.hpp"

namespace tsinfo {

/// A finite MDP given by transition kernels P(x' | x, a), row-stochastic in
/// x' for every state-action pair. Layout: [(x * n_actions + a) * n_states + x'].
class MdpSpec {
 public:
  MdpSpec(std::uint32_t n_states, std::uint32_t n_actions, std::vector<double> transition);

  std::uint32_t n_states() const { return n_states_; }
  std::uint32_t n_actions() const { return n_actions_; }
  double transition(std::uint32_t x, std::uint32_t a, std::uint32_t x2) const {
    return p_[(static_cast<std::size_t>(x) * n_actions_ + a) * n_states_ + x2];
  }
  std::span<const double> row(std::uint32_t x, std::uint32_t a) const {
    return {p_.data() + (static_cast<std::size_t>(x) * n_actions_ + a) * n_states_, n_states_};
  }
  const std::vector<double>& transition_tensor() const { return p_; }

 private:
  std::uint32_t n_states_;
  std::uint32_t n_actions_;
  std::vector<double> p_;
};

/// A stationary policy pi(a | x), row-stochastic in a for each state.
class StationaryPolicy {
 public:
  StationaryPolicy(std::uint32_t n_states, std::uint32_t n_actions, std::vector<double> probs);

  static StationaryPolicy uniform(std::uint32_t n_states, std::uint32_t n_actions);

  std::uint32_t n_states() const { return n_states_; }
  std::uint32_t n_actions() const { return n_actions_; }
  double prob(std::uint32_t x, std::uint32_t a) const {
    return probs_[static_cast<std::size_t>(x) * n_actions_ + a];
  }
  std::span<const double> row(std::uint32_t x) const {
    return {probs_.data() + static_cast<std::size_t>(x) * n_actions_, n_actions_};
  }
  const std::vector<double>& prob_matrix() const { return probs_; }

  double alpha_floor() const { return alpha_floor_; }
  /// True when every action has positive probability in every state.
  bool stochastic() const { return alpha_floor_ > 0.0; }

 private:
  std::uint32_t n_states_;
  std::uint32_t n_actions_;
  std::vector<double> probs_;
  double alpha_floor_;
};

/// State chain M(x'|x) = sum_a pi(a|x) P(x'|x,a).
MarkovChainSpec induced_chain(const MdpSpec& mdp, const StationaryPolicy& policy);

struct ConnectivityResult {
  bool connected = false;
  /// An ordered pair (from, to) with `to` unreachable from `from`, when not
  /// connected.
  std::optional<std::pair<std::uint32_t, std::uint32_t>> witness;
};

/// True iff the digraph with an edge x -> x' whenever P(x'|x,a) > 0 for some
/// action is strongly connected.
ConnectivityResult check_weakly_connected(const MdpSpec& mdp);

/// Checks, over every positive-probability tuple
/// (x_{-1}, a_{-1}, x_0, a_0, x_1) under the stationary law of the
/// policy-induced chain, that
///   P(X_0 = x | f(X_0), A_0, X_{-1}, A_{-1}, X_1) = P(X_0 = x | f(X_0), A_0).
/// The concurrent action stays in the conditioning on both sides; otherwise
/// any state-dependent policy would tilt the left side by pi(a_0|x) alone.
CiCheckResult ci_check_under_policy(const MdpSpec& mdp, const StationaryPolicy& policy,
                                    const RepresentationFunction& f, double tol);

/// exact_ik of the policy-induced chain at memory 1.
Bits exact_i1_under_policy(const MdpSpec& mdp, const StationaryPolicy& policy,
                           const RepresentationFunction& f);

/// Stationary-start trajectory of (state, action) pairs; deterministic in
/// the seed. Fails when the policy-induced chain has several closed classes.
ObservationSeries sample_mdp(const MdpSpec& mdp, const StationaryPolicy& policy, std::uint64_t n,
                             std::uint64_t seed, std::uint64_t burn_in = 0);

}  // namespace tsinfo
