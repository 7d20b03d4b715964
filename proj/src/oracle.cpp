#include "tsinfo/oracle.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

namespace tsinfo {

namespace {

constexpr double kEnumerationGuard = 1e8;

void require_lookup_domain(const MarkovChainSpec& spec, const RepresentationFunction& f,
                           const char* op) {
  if (!f.is_lookup()) {
    throw ValidationError(std::string(op) + ": oracle computations need a lookup-table map");
  }
  if (f.domain_size() != spec.n_states()) {
    throw ValidationError(std::string(op) + ": map domain " + std::to_string(f.domain_size()) +
                          " does not match chain with " + std::to_string(spec.n_states()) +
                          " states");
  }
}

void check_enumeration_guard(std::uint32_t n_states, std::uint32_t path_len, const char* op) {
  if (static_cast<double>(path_len) * std::log10(static_cast<double>(std::max(n_states, 2u))) >
      std::log10(kEnumerationGuard)) {
    throw GuardError(std::string(op) + ": |X|^" + std::to_string(path_len) +
                     " exceeds the enumeration guard of 1e8");
  }
  // Block codes additionally have to fit a u64.
  if (static_cast<double>(path_len) * std::log2(static_cast<double>(std::max(n_states, 2u))) >
      63.0) {
    throw GuardError(std::string(op) + ": block code exceeds the 64-bit range");
  }
}

std::vector<std::vector<std::uint32_t>> label_preimages(const MarkovChainSpec& spec,
                                                        const RepresentationFunction& f) {
  std::vector<std::vector<std::uint32_t>> pre(f.alphabet_size());
  for (std::uint32_t x = 0; x < spec.n_states(); ++x) pre[f(x)].push_back(x);
  return pre;
}

// Per-prefix state-weight layer used by the exact block enumeration:
// weights[x] = P(Y_0..Y_j = prefix, X_j = x).
using WeightLayer = std::map<std::uint64_t, std::vector<double>>;

WeightLayer extend_layer(const WeightLayer& layer, const MarkovChainSpec& spec,
                         const RepresentationFunction& f) {
  const std::uint32_t n = spec.n_states();
  const std::uint32_t y_count = f.alphabet_size();
  WeightLayer next;
  std::vector<double> pushed(n);
  for (const auto& [code, weights] : layer) {
    std::fill(pushed.begin(), pushed.end(), 0.0);
    for (std::uint32_t x = 0; x < n; ++x) {
      const double w = weights[x];
      if (w == 0.0) continue;
      const auto row = spec.row(x);
      for (std::uint32_t x2 = 0; x2 < n; ++x2) pushed[x2] += w * row[x2];
    }
    for (std::uint32_t y = 0; y < y_count; ++y) {
      std::vector<double> child(n, 0.0);
      bool any = false;
      for (std::uint32_t x2 = 0; x2 < n; ++x2) {
        if (f(x2) == y && pushed[x2] != 0.0) {
          child[x2] = pushed[x2];
          any = true;
        }
      }
      if (any) next.emplace(code * y_count + y, std::move(child));
    }
  }
  return next;
}

}  // namespace

MarkovChainSpec::MarkovChainSpec(std::uint32_t n_states, std::vector<double> row_major_transition)
    : n_states_(n_states), p_(std::move(row_major_transition)) {
  if (n_states_ == 0) throw ValidationError("oracle.MarkovChainSpec: need at least one state");
  if (p_.size() != static_cast<std::size_t>(n_states_) * n_states_) {
    throw ValidationError("oracle.MarkovChainSpec: transition matrix size " +
                          std::to_string(p_.size()) + " does not match " +
                          std::to_string(n_states_) + " states");
  }
  for (std::uint32_t x = 0; x < n_states_; ++x) {
    double sum = 0.0;
    for (std::uint32_t x2 = 0; x2 < n_states_; ++x2) {
      const double v = transition(x, x2);
      if (v < 0.0) {
        throw ValidationError("oracle.MarkovChainSpec: negative transition probability in row " +
                              std::to_string(x));
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      throw ValidationError("oracle.MarkovChainSpec: row " + std::to_string(x) + " sums to " +
                            std::to_string(sum) + ", expected 1 within 1e-12");
    }
  }
}

void MarkovChainSpec::cache_stationary(std::vector<double> pi) {
  if (pi.size() != n_states_) {
    throw ValidationError("oracle.MarkovChainSpec: cached stationary distribution has wrong size");
  }
  double residual = 0.0;
  for (std::uint32_t x2 = 0; x2 < n_states_; ++x2) {
    double out = 0.0;
    for (std::uint32_t x = 0; x < n_states_; ++x) out += pi[x] * transition(x, x2);
    residual += std::abs(out - pi[x2]);
  }
  if (residual > 1e-10) {
    throw ValidationError("oracle.MarkovChainSpec: cached stationary distribution has residual " +
                          std::to_string(residual));
  }
  stationary_ = std::move(pi);
}

SccResult strongly_connected_components(const MarkovChainSpec& spec) {
  const std::uint32_t n = spec.n_states();
  // Iterative Tarjan on the positive-transition digraph.
  SccResult result;
  result.component.assign(n, UINT32_MAX);
  std::vector<std::uint32_t> index(n, UINT32_MAX), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::uint32_t> stack;
  std::uint32_t next_index = 0;

  struct Frame {
    std::uint32_t v;
    std::uint32_t next_child;
  };
  std::vector<Frame> call;

  for (std::uint32_t root = 0; root < n; ++root) {
    if (index[root] != UINT32_MAX) continue;
    call.push_back({root, 0});
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& frame = call.back();
      const std::uint32_t v = frame.v;
      bool descended = false;
      while (frame.next_child < n) {
        const std::uint32_t w = frame.next_child++;
        if (spec.transition(v, w) <= 0.0) continue;
        if (index[w] == UINT32_MAX) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
          descended = true;
          break;
        }
        if (on_stack[w]) low[v] = std::min(low[v], index[w]);
      }
      if (descended) continue;
      if (low[v] == index[v]) {
        const std::uint32_t comp = result.n_components++;
        while (true) {
          const std::uint32_t w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          result.component[w] = comp;
          if (w == v) break;
        }
      }
      call.pop_back();
      if (!call.empty()) {
        const std::uint32_t parent = call.back().v;
        low[parent] = std::min(low[parent], low[v]);
      }
    }
  }

  result.closed.assign(result.n_components, true);
  for (std::uint32_t x = 0; x < n; ++x) {
    for (std::uint32_t x2 = 0; x2 < n; ++x2) {
      if (spec.transition(x, x2) > 0.0 && result.component[x] != result.component[x2]) {
        result.closed[result.component[x]] = false;
      }
    }
  }
  return result;
}

std::vector<double> stationary_distribution(const MarkovChainSpec& spec) {
  if (spec.cached_stationary()) return *spec.cached_stationary();
  const std::uint32_t n = spec.n_states();

  const auto scc = strongly_connected_components(spec);
  std::vector<std::uint32_t> closed_components;
  for (std::uint32_t c = 0; c < scc.n_components; ++c) {
    if (scc.closed[c]) closed_components.push_back(c);
  }
  if (closed_components.size() != 1) {
    std::string classes;
    for (std::uint32_t c : closed_components) {
      classes += classes.empty() ? "{" : ", {";
      bool first = true;
      for (std::uint32_t x = 0; x < n; ++x) {
        if (scc.component[x] == c) {
          classes += (first ? "" : " ") + std::to_string(x);
          first = false;
        }
      }
      classes += "}";
    }
    throw ValidationError(
        "oracle.stationary_distribution: reducible chain with closed classes " + classes);
  }

  // States of the single closed class; everything else is transient.
  std::vector<std::uint32_t> recurrent;
  for (std::uint32_t x = 0; x < n; ++x) {
    if (scc.component[x] == closed_components.front()) recurrent.push_back(x);
  }
  const std::uint32_t m = static_cast<std::uint32_t>(recurrent.size());

  std::vector<double> pi(n, 0.0);
  if (m == 1) {
    pi[recurrent.front()] = 1.0;
    return pi;
  }

  if (m <= 2000) {
    // Solve pi (P - I) = 0 with the last equation replaced by sum(pi) = 1.
    Eigen::MatrixXd a(m, m);
    for (std::uint32_t j = 0; j < m; ++j) {
      for (std::uint32_t i = 0; i < m; ++i) {
        a(j, i) = spec.transition(recurrent[i], recurrent[j]) - (i == j ? 1.0 : 0.0);
      }
    }
    for (std::uint32_t i = 0; i < m; ++i) a(m - 1, i) = 1.0;
    Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
    b(m - 1) = 1.0;
    const Eigen::VectorXd x = a.partialPivLu().solve(b);
    for (std::uint32_t i = 0; i < m; ++i) pi[recurrent[i]] = std::max(0.0, x(i));
  } else {
    // Damped power iteration for large chains; (I + P)/2 kills periodicity.
    std::vector<double> cur(n, 0.0), next(n, 0.0);
    for (std::uint32_t x : recurrent) cur[x] = 1.0 / m;
    for (int iter = 0; iter < 100000; ++iter) {
      std::fill(next.begin(), next.end(), 0.0);
      for (std::uint32_t x = 0; x < n; ++x) {
        if (cur[x] == 0.0) continue;
        next[x] += 0.5 * cur[x];
        const auto row = spec.row(x);
        for (std::uint32_t x2 = 0; x2 < n; ++x2) next[x2] += 0.5 * cur[x] * row[x2];
      }
      double diff = 0.0;
      for (std::uint32_t x = 0; x < n; ++x) diff += std::abs(next[x] - cur[x]);
      cur.swap(next);
      if (diff < 1e-14) break;
    }
    pi = cur;
  }

  double total = 0.0;
  for (double v : pi) total += v;
  for (double& v : pi) v /= total;

  double residual = 0.0;
  for (std::uint32_t x2 = 0; x2 < n; ++x2) {
    double out = 0.0;
    for (std::uint32_t x = 0; x < n; ++x) out += pi[x] * spec.transition(x, x2);
    residual += std::abs(out - pi[x2]);
  }
  if (residual > 1e-10) {
    throw ValidationError("oracle.stationary_distribution: solver residual " +
                          std::to_string(residual) + " exceeds 1e-10");
  }
  return pi;
}

BlockDistribution exact_block_distribution(const MarkovChainSpec& spec,
                                           const RepresentationFunction& f, std::uint32_t k) {
  require_lookup_domain(spec, f, "oracle.exact_block_distribution");
  check_enumeration_guard(spec.n_states(), k + 1, "oracle.exact_block_distribution");
  const auto pi = stationary_distribution(spec);

  WeightLayer layer;
  for (std::uint32_t x = 0; x < spec.n_states(); ++x) {
    if (pi[x] == 0.0) continue;
    auto [it, inserted] = layer.try_emplace(f(x), std::vector<double>(spec.n_states(), 0.0));
    it->second[x] += pi[x];
  }
  for (std::uint32_t step = 0; step < k; ++step) layer = extend_layer(layer, spec, f);

  BlockDistribution dist;
  dist.block_len = k + 1;
  dist.alphabet_size = f.alphabet_size();
  for (const auto& [code, weights] : layer) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (total > 0.0) dist.prob.emplace(code, total);
  }
  return dist;
}

Bits entropy_of_map(const std::map<std::uint64_t, double>& prob) {
  double h = 0.0;
  for (const auto& [code, p] : prob) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return std::max(0.0, h);
}

namespace {

std::map<std::uint64_t, double> marginal_first_map(const BlockDistribution& dist,
                                                   std::uint32_t prefix_len) {
  std::uint64_t divisor = 1;
  for (std::uint32_t i = prefix_len; i < dist.block_len; ++i) divisor *= dist.alphabet_size;
  std::map<std::uint64_t, double> out;
  for (const auto& [code, p] : dist.prob) out[code / divisor] += p;
  return out;
}

std::map<std::uint64_t, double> marginal_last_map(const BlockDistribution& dist) {
  std::map<std::uint64_t, double> out;
  for (const auto& [code, p] : dist.prob) out[code % dist.alphabet_size] += p;
  return out;
}

}  // namespace

Bits exact_h0(const MarkovChainSpec& spec, const RepresentationFunction& f) {
  const auto dist = exact_block_distribution(spec, f, 0);
  return entropy_of_map(dist.prob);
}

Bits exact_hk(const MarkovChainSpec& spec, const RepresentationFunction& f, std::uint32_t k) {
  if (k == 0) throw ValidationError("oracle.exact_hk: block memory k must be >= 1");
  const auto dist = exact_block_distribution(spec, f, k);
  return std::max(0.0, entropy_of_map(dist.prob) - entropy_of_map(marginal_first_map(dist, k)));
}

Bits exact_ik(const MarkovChainSpec& spec, const RepresentationFunction& f, std::uint32_t k) {
  if (k == 0) throw ValidationError("oracle.exact_ik: block memory k must be >= 1");
  const auto dist = exact_block_distribution(spec, f, k);
  const Bits joint = entropy_of_map(dist.prob);
  const Bits first = entropy_of_map(marginal_first_map(dist, k));
  const Bits last = entropy_of_map(marginal_last_map(dist));
  return std::max(0.0, first + last - joint);
}

EntropyRateSandwich entropy_rate_sandwich(const MarkovChainSpec& spec,
                                          const RepresentationFunction& f, std::uint32_t k) {
  if (k == 0) throw ValidationError("oracle.entropy_rate_sandwich: block memory k must be >= 1");
  require_lookup_domain(spec, f, "oracle.entropy_rate_sandwich");
  check_enumeration_guard(spec.n_states(), k + 1, "oracle.entropy_rate_sandwich");

  EntropyRateSandwich out;
  out.k = k;
  out.upper = exact_hk(spec, f, k);

  // Joint law of (X_0, Y_1..Y_k): one weight layer per starting state.
  const auto pi = stationary_distribution(spec);
  const std::uint32_t n = spec.n_states();
  const std::uint32_t y_count = f.alphabet_size();
  std::uint64_t y_pow = 1;
  for (std::uint32_t i = 0; i < k; ++i) y_pow *= y_count;

  std::map<std::uint64_t, double> with_last;   // key = x0 * |Y|^k + code(y_1..y_k)
  std::map<std::uint64_t, double> without_last;  // key = x0 * |Y|^(k-1) + code(y_1..y_{k-1})
  for (std::uint32_t x0 = 0; x0 < n; ++x0) {
    if (pi[x0] == 0.0) continue;
    WeightLayer layer;
    {
      std::vector<double> w(n, 0.0);
      w[x0] = pi[x0];
      layer.emplace(0, std::move(w));
    }
    for (std::uint32_t step = 0; step < k; ++step) layer = extend_layer(layer, spec, f);
    for (const auto& [code, weights] : layer) {
      double total = 0.0;
      for (double w : weights) total += w;
      if (total <= 0.0) continue;
      with_last[static_cast<std::uint64_t>(x0) * y_pow + code] += total;
      without_last[static_cast<std::uint64_t>(x0) * (y_pow / y_count) + code / y_count] += total;
    }
  }
  out.lower = std::max(0.0, entropy_of_map(with_last) - entropy_of_map(without_last));
  return out;
}

CiCheckResult ci_check_markov(const MarkovChainSpec& spec, const RepresentationFunction& f,
                              double tol, std::uint32_t window) {
  require_lookup_domain(spec, f, "oracle.ci_check_markov");
  if (window == 0) throw ValidationError("oracle.ci_check_markov: window must be >= 1");
  check_enumeration_guard(spec.n_states(), 2 * window + 1, "oracle.ci_check_markov");

  const auto pi = stationary_distribution(spec);
  const std::uint32_t n = spec.n_states();
  const auto pre = label_preimages(spec, f);

  // Baseline conditional P(X_0 = x | f(X_0) = y).
  std::vector<double> label_mass(f.alphabet_size(), 0.0);
  for (std::uint32_t x = 0; x < n; ++x) label_mass[f(x)] += pi[x];

  CiCheckResult result;
  result.max_violation = 0.0;

  // Odometer over the left window (x_{-window}..x_{-1}) and the right
  // window (x_1..x_window). Only the neighbours adjacent to x_0 enter the
  // conditional; the remaining factors decide event positivity.
  std::vector<std::uint32_t> left(window, 0), right(window, 0);
  std::vector<double> cond;
  while (true) {
    double left_prob = pi[left.front()];
    for (std::uint32_t i = 0; i + 1 < window; ++i) {
      left_prob *= spec.transition(left[i], left[i + 1]);
    }
    if (left_prob > 0.0) {
      while (true) {
        double right_suffix = 1.0;
        for (std::uint32_t i = 0; i + 1 < window; ++i) {
          right_suffix *= spec.transition(right[i], right[i + 1]);
        }
        if (right_suffix > 0.0) {
          const std::uint32_t a = left.back();
          const std::uint32_t b = right.front();
          for (std::uint32_t y = 0; y < f.alphabet_size(); ++y) {
            if (label_mass[y] == 0.0 || pre[y].empty()) continue;
            cond.assign(pre[y].size(), 0.0);
            double denom = 0.0;
            for (std::size_t i = 0; i < pre[y].size(); ++i) {
              const std::uint32_t x = pre[y][i];
              cond[i] = spec.transition(a, x) * spec.transition(x, b);
              denom += cond[i];
            }
            if (denom == 0.0) continue;  // conditioning event has probability zero
            for (std::size_t i = 0; i < pre[y].size(); ++i) {
              const double base = pi[pre[y][i]] / label_mass[y];
              result.max_violation =
                  std::max(result.max_violation, std::abs(cond[i] / denom - base));
            }
          }
        }
        // advance right odometer
        std::uint32_t pos = 0;
        for (; pos < window; ++pos) {
          if (++right[pos] < n) break;
          right[pos] = 0;
        }
        if (pos == window) break;
      }
    } else {
      // skip all right configurations for a zero-probability left path
    }
    std::uint32_t pos = 0;
    for (; pos < window; ++pos) {
      if (++left[pos] < n) break;
      left[pos] = 0;
    }
    if (pos == window) break;
  }

  result.satisfied = result.max_violation <= tol;
  return result;
}

ChainRuleCheck chain_rule_identity_check(const MarkovChainSpec& spec,
                                         const RepresentationFunction& f,
                                         const RepresentationFunction& g) {
  require_lookup_domain(spec, f, "oracle.chain_rule_identity_check");
  require_lookup_domain(spec, g, "oracle.chain_rule_identity_check");
  check_enumeration_guard(spec.n_states(), 3, "oracle.chain_rule_identity_check");

  const auto pi = stationary_distribution(spec);
  const std::uint32_t n = spec.n_states();
  const std::uint64_t fy = f.alphabet_size();
  const std::uint64_t gy = g.alphabet_size();

  // Joint law of (X_{-1}, X_0, X_1) pushed through the label pairs.
  std::map<std::uint64_t, double> joint_fg;   // (y0, y-1, z-1, y1, z1)
  std::map<std::uint64_t, double> cond_fg;    // (y-1, z-1, y1, z1)
  std::map<std::uint64_t, double> joint_f;    // (y0, y-1, y1)
  std::map<std::uint64_t, double> cond_f;     // (y-1, y1)
  for (std::uint32_t a = 0; a < n; ++a) {
    if (pi[a] == 0.0) continue;
    for (std::uint32_t x = 0; x < n; ++x) {
      const double pax = pi[a] * spec.transition(a, x);
      if (pax == 0.0) continue;
      for (std::uint32_t b = 0; b < n; ++b) {
        const double p = pax * spec.transition(x, b);
        if (p == 0.0) continue;
        const std::uint64_t rest_fg = ((f(a) * gy + g(a)) * fy + f(b)) * gy + g(b);
        joint_fg[f(x) * (fy * gy * fy * gy) + rest_fg] += p;
        cond_fg[rest_fg] += p;
        const std::uint64_t rest_f = f(a) * fy + f(b);
        joint_f[f(x) * (fy * fy) + rest_f] += p;
        cond_f[rest_f] += p;
      }
    }
  }

  ChainRuleCheck out;
  out.lhs = std::max(0.0, entropy_of_map(joint_fg) - entropy_of_map(cond_fg));
  out.rhs = std::max(0.0, entropy_of_map(joint_f) - entropy_of_map(cond_f));
  out.holds = std::abs(out.lhs - out.rhs) <= 1e-9;
  return out;
}

MarkovChainSpec time_reversal(const MarkovChainSpec& spec) {
  const auto pi = stationary_distribution(spec);
  const std::uint32_t n = spec.n_states();
  for (std::uint32_t x = 0; x < n; ++x) {
    if (pi[x] <= 0.0) {
      throw ValidationError(
          "oracle.time_reversal: chain must be irreducible (state " + std::to_string(x) +
          " has zero stationary mass)");
    }
  }
  std::vector<double> reversed(static_cast<std::size_t>(n) * n, 0.0);
  for (std::uint32_t x = 0; x < n; ++x) {
    double row_sum = 0.0;
    for (std::uint32_t x2 = 0; x2 < n; ++x2) {
      reversed[static_cast<std::size_t>(x) * n + x2] = pi[x2] * spec.transition(x2, x) / pi[x];
      row_sum += reversed[static_cast<std::size_t>(x) * n + x2];
    }
    // Remove the solver's rounding drift so the row is exactly stochastic.
    for (std::uint32_t x2 = 0; x2 < n; ++x2) {
      reversed[static_cast<std::size_t>(x) * n + x2] /= row_sum;
    }
  }
  MarkovChainSpec out(n, std::move(reversed));
  return out;
}

std::vector<double> induced_label_transition(const MarkovChainSpec& spec,
                                             const RepresentationFunction& f) {
  require_lookup_domain(spec, f, "oracle.induced_label_transition");
  const auto pi = stationary_distribution(spec);
  const std::uint32_t n = spec.n_states();
  const std::uint32_t y_count = f.alphabet_size();
  std::vector<double> label_mass(y_count, 0.0);
  for (std::uint32_t x = 0; x < n; ++x) label_mass[f(x)] += pi[x];

  std::vector<double> m(static_cast<std::size_t>(y_count) * y_count, 0.0);
  for (std::uint32_t x = 0; x < n; ++x) {
    if (pi[x] == 0.0) continue;
    for (std::uint32_t x2 = 0; x2 < n; ++x2) {
      m[static_cast<std::size_t>(f(x)) * y_count + f(x2)] += pi[x] * spec.transition(x, x2);
    }
  }
  for (std::uint32_t y = 0; y < y_count; ++y) {
    if (label_mass[y] == 0.0) continue;
    for (std::uint32_t y2 = 0; y2 < y_count; ++y2) {
      m[static_cast<std::size_t>(y) * y_count + y2] /= label_mass[y];
    }
  }
  return m;
}

std::optional<std::uint32_t> first_strict_k(const MarkovChainSpec& spec,
                                            const RepresentationFunction& f,
                                            const RepresentationFunction& g, std::uint32_t k_max,
                                            double margin) {
  for (std::uint32_t k = 1; k <= k_max; ++k) {
    if (exact_ik(spec, f, k) > exact_ik(spec, g, k) + margin) return k;
  }
  return std::nullopt;
}

double block_total_variation(const BlockDistribution& exact,
                             const EmpiricalBlockDistribution& empirical) {
  if (exact.block_len != empirical.block_len || exact.alphabet_size != empirical.alphabet_size) {
    throw ValidationError(
        "oracle.block_total_variation: block distributions are not comparable");
  }
  double tv = 0.0;
  for (const auto& [code, p] : exact.prob) tv += std::abs(p - empirical.probability(code));
  // Empirical cells outside the exact support.
  for (const auto& [code, count] : empirical.counts) {
    if (exact.prob.find(code) == exact.prob.end()) {
      tv += static_cast<double>(count) / static_cast<double>(empirical.n_blocks);
    }
  }
  return tv;
}

}  // namespace tsinfo
