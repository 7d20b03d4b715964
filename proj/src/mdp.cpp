#include "tsinfo/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tsinfo/rng.hpp"

namespace tsinfo {

MdpSpec::MdpSpec(std::uint32_t n_states, std::uint32_t n_actions, std::vector<double> kernel)
    : n_states_(n_states), n_actions_(n_actions), p_(std::move(kernel)) {
  if (n_states_ == 0 || n_actions_ == 0) {
    throw ValidationError("mdp.MdpSpec: need at least one state and one action");
  }
  if (p_.size() != static_cast<std::size_t>(n_states_) * n_actions_ * n_states_) {
    throw ValidationError("mdp.MdpSpec: transition tensor size does not match dimensions");
  }
  for (std::uint32_t x = 0; x < n_states_; ++x) {
    for (std::uint32_t a = 0; a < n_actions_; ++a) {
      double sum = 0.0;
      for (std::uint32_t x2 = 0; x2 < n_states_; ++x2) {
        const double v = transition(x, a, x2);
        if (v < 0.0) {
          throw ValidationError("mdp.MdpSpec: negative probability in row (" + std::to_string(x) +
                                ", " + std::to_string(a) + ")");
        }
        sum += v;
      }
      if (std::abs(sum - 1.0) > 1e-12) {
        throw ValidationError("mdp.MdpSpec: row (" + std::to_string(x) + ", " + std::to_string(a) +
                              ") sums to " + std::to_string(sum) + ", expected 1 within 1e-12");
      }
    }
  }
}

StationaryPolicy::StationaryPolicy(std::uint32_t n_states, std::uint32_t n_actions,
                                   std::vector<double> probs)
    : n_states_(n_states), n_actions_(n_actions), probs_(std::move(probs)), alpha_floor_(1.0) {
  if (n_states_ == 0 || n_actions_ == 0) {
    throw ValidationError("mdp.StationaryPolicy: need at least one state and one action");
  }
  if (probs_.size() != static_cast<std::size_t>(n_states_) * n_actions_) {
    throw ValidationError("mdp.StationaryPolicy: probability matrix size does not match");
  }
  for (std::uint32_t x = 0; x < n_states_; ++x) {
    double sum = 0.0;
    for (std::uint32_t a = 0; a < n_actions_; ++a) {
      const double v = prob(x, a);
      if (v < 0.0) {
        throw ValidationError("mdp.StationaryPolicy: negative probability at state " +
                              std::to_string(x));
      }
      alpha_floor_ = std::min(alpha_floor_, v);
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      throw ValidationError("mdp.StationaryPolicy: row " + std::to_string(x) + " sums to " +
                            std::to_string(sum) + ", expected 1 within 1e-12");
    }
  }
}

StationaryPolicy StationaryPolicy::uniform(std::uint32_t n_states, std::uint32_t n_actions) {
  std::vector<double> probs(static_cast<std::size_t>(n_states) * n_actions,
                            1.0 / static_cast<double>(n_actions));
  return StationaryPolicy(n_states, n_actions, std::move(probs));
}

MarkovChainSpec induced_chain(const MdpSpec& mdp, const StationaryPolicy& policy) {
  if (policy.n_states() != mdp.n_states() || policy.n_actions() != mdp.n_actions()) {
    throw ValidationError("mdp.induced_chain: policy dimensions do not match the MDP");
  }
  const std::uint32_t n = mdp.n_states();
  std::vector<double> p(static_cast<std::size_t>(n) * n, 0.0);
  for (std::uint32_t x = 0; x < n; ++x) {
    for (std::uint32_t a = 0; a < mdp.n_actions(); ++a) {
      const double pa = policy.prob(x, a);
      if (pa == 0.0) continue;
      const auto row = mdp.row(x, a);
      for (std::uint32_t x2 = 0; x2 < n; ++x2) {
        p[static_cast<std::size_t>(x) * n + x2] += pa * row[x2];
      }
    }
  }
  return MarkovChainSpec(n, std::move(p));
}

ConnectivityResult check_weakly_connected(const MdpSpec& mdp) {
  // Any-action digraph as a chain spec, reusing the SCC machinery.
  const std::uint32_t n = mdp.n_states();
  std::vector<double> any(static_cast<std::size_t>(n) * n, 0.0);
  for (std::uint32_t x = 0; x < n; ++x) {
    std::uint32_t outdeg = 0;
    for (std::uint32_t x2 = 0; x2 < n; ++x2) {
      for (std::uint32_t a = 0; a < mdp.n_actions(); ++a) {
        if (mdp.transition(x, a, x2) > 0.0) {
          any[static_cast<std::size_t>(x) * n + x2] = 1.0;
          ++outdeg;
          break;
        }
      }
    }
    for (std::uint32_t x2 = 0; x2 < n; ++x2) {
      any[static_cast<std::size_t>(x) * n + x2] /= outdeg;
    }
  }
  const auto scc = strongly_connected_components(MarkovChainSpec(n, std::move(any)));

  ConnectivityResult result;
  result.connected = scc.n_components == 1;
  if (!result.connected) {
    // A state in a closed component cannot reach any other component.
    std::uint32_t closed_state = 0;
    for (std::uint32_t x = 0; x < n; ++x) {
      if (scc.closed[scc.component[x]]) {
        closed_state = x;
        break;
      }
    }
    for (std::uint32_t x = 0; x < n; ++x) {
      if (scc.component[x] != scc.component[closed_state]) {
        result.witness = std::make_pair(closed_state, x);
        break;
      }
    }
  }
  return result;
}

namespace {

std::vector<double> policy_stationary(const MdpSpec& mdp, const StationaryPolicy& policy,
                                      const char* op) {
  try {
    return stationary_distribution(induced_chain(mdp, policy));
  } catch (const ValidationError& e) {
    throw ValidationError(std::string(op) +
                          ": policy is not admissible for this MDP: " + e.what());
  }
}

}  // namespace

CiCheckResult ci_check_under_policy(const MdpSpec& mdp, const StationaryPolicy& policy,
                                    const RepresentationFunction& f, double tol) {
  if (!f.is_lookup() || f.domain_size() != mdp.n_states()) {
    throw ValidationError("mdp.ci_check_under_policy: map must be a lookup table over the states");
  }
  const auto mu = policy_stationary(mdp, policy, "mdp.ci_check_under_policy");
  const std::uint32_t n = mdp.n_states();
  const std::uint32_t n_actions = mdp.n_actions();
  const std::uint32_t y_count = f.alphabet_size();

  std::vector<std::vector<std::uint32_t>> pre(y_count);
  for (std::uint32_t x = 0; x < n; ++x) pre[f(x)].push_back(x);

  // Baseline conditional P(X_0 = x | f(X_0) = y, A_0 = a0), proportional to
  // mu(x) pi(a0|x) on the preimage of y.
  std::vector<std::vector<double>> base(static_cast<std::size_t>(y_count) * n_actions);
  for (std::uint32_t y = 0; y < y_count; ++y) {
    for (std::uint32_t a0 = 0; a0 < n_actions; ++a0) {
      auto& b = base[static_cast<std::size_t>(y) * n_actions + a0];
      b.assign(pre[y].size(), 0.0);
      double mass = 0.0;
      for (std::size_t i = 0; i < pre[y].size(); ++i) {
        b[i] = mu[pre[y][i]] * policy.prob(pre[y][i], a0);
        mass += b[i];
      }
      if (mass > 0.0) {
        for (double& v : b) v /= mass;
      } else {
        b.clear();  // conditioning event never occurs
      }
    }
  }

  CiCheckResult result;
  std::vector<double> cond;
  for (std::uint32_t xm1 = 0; xm1 < n; ++xm1) {
    if (mu[xm1] == 0.0) continue;
    for (std::uint32_t am1 = 0; am1 < n_actions; ++am1) {
      if (policy.prob(xm1, am1) == 0.0) continue;
      for (std::uint32_t a0 = 0; a0 < n_actions; ++a0) {
        for (std::uint32_t x1 = 0; x1 < n; ++x1) {
          for (std::uint32_t y = 0; y < y_count; ++y) {
            const auto& b = base[static_cast<std::size_t>(y) * n_actions + a0];
            if (b.empty()) continue;
            cond.assign(pre[y].size(), 0.0);
            double denom = 0.0;
            for (std::size_t i = 0; i < pre[y].size(); ++i) {
              const std::uint32_t x = pre[y][i];
              cond[i] = mdp.transition(xm1, am1, x) * policy.prob(x, a0) *
                        mdp.transition(x, a0, x1);
              denom += cond[i];
            }
            if (denom == 0.0) continue;
            for (std::size_t i = 0; i < pre[y].size(); ++i) {
              result.max_violation = std::max(result.max_violation,
                                              std::abs(cond[i] / denom - b[i]));
            }
          }
        }
      }
    }
  }
  result.satisfied = result.max_violation <= tol;
  return result;
}

Bits exact_i1_under_policy(const MdpSpec& mdp, const StationaryPolicy& policy,
                           const RepresentationFunction& f) {
  try {
    return exact_ik(induced_chain(mdp, policy), f, 1);
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("mdp.exact_i1_under_policy: ") + e.what());
  }
}

ObservationSeries sample_mdp(const MdpSpec& mdp, const StationaryPolicy& policy, std::uint64_t n,
                             std::uint64_t seed, std::uint64_t burn_in) {
  if (n == 0) throw ValidationError("mdp.sample_mdp: trajectory length must be >= 1");
  const auto mu = policy_stationary(mdp, policy, "mdp.sample_mdp");

  CounterRng rng(seed, 0);
  std::vector<std::uint32_t> states, actions;
  states.reserve(n);
  actions.reserve(n);

  std::uint32_t x = rng.next_index(mu);
  for (std::uint64_t i = 0; i < burn_in + n; ++i) {
    const std::uint32_t a = rng.next_index(policy.row(x));
    if (i >= burn_in) {
      states.push_back(x);
      actions.push_back(a);
    }
    x = rng.next_index(mdp.row(x, a));
  }

  auto series = ObservationSeries::discrete(std::move(states), SeriesMeta{seed, "mdp"});
  series.set_actions(std::move(actions));
  return series;
}

}  // namespace tsinfo
