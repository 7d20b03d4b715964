#include "tsinfo/processes.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

namespace tsinfo {

namespace {

void validate_row_stochastic(const std::vector<double>& m, std::uint32_t n, const char* what) {
  if (m.size() != static_cast<std::size_t>(n) * n) {
    throw ValidationError(std::string(what) + ": matrix size does not match dimension " +
                          std::to_string(n));
  }
  for (std::uint32_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::uint32_t j = 0; j < n; ++j) {
      const double v = m[static_cast<std::size_t>(i) * n + j];
      if (v < 0.0) throw ValidationError(std::string(what) + ": negative entry");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      throw ValidationError(std::string(what) + ": row " + std::to_string(i) + " sums to " +
                            std::to_string(sum));
    }
  }
}

void require_irreducible_labels(const std::vector<double>& t, std::uint32_t y_count,
                                const char* what) {
  const auto scc = strongly_connected_components(MarkovChainSpec(y_count, t));
  if (scc.n_components != 1) {
    throw ValidationError(std::string(what) + ": label transition matrix is reducible");
  }
}

double second_largest_eigenvalue_modulus(const std::vector<double>& p, std::uint32_t n) {
  if (n < 2) return 0.0;
  Eigen::MatrixXd m(n, n);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < n; ++j) m(i, j) = p[static_cast<std::size_t>(i) * n + j];
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, false);
  std::vector<double> moduli(n);
  for (std::uint32_t i = 0; i < n; ++i) moduli[i] = std::abs(solver.eigenvalues()(i));
  std::sort(moduli.begin(), moduli.end(), std::greater<>());
  return moduli[1];
}

std::vector<double> normalized_weights(std::uint32_t count, double floor, CounterRng& rng) {
  std::vector<double> w(count);
  double sum = 0.0;
  for (double& v : w) {
    v = floor + rng.next_unit();
    sum += v;
  }
  for (double& v : w) v /= sum;
  return w;
}

// Label transition row with a dominant diagonal, so random instances stay
// well away from lumpability coincidences.
std::vector<double> diag_dominant_transition(std::uint32_t y_count, CounterRng& rng) {
  std::vector<double> t(static_cast<std::size_t>(y_count) * y_count, 0.0);
  for (std::uint32_t y = 0; y < y_count; ++y) {
    const double diag = y_count == 1 ? 1.0 : rng.next_range(0.55, 0.85);
    t[static_cast<std::size_t>(y) * y_count + y] = diag;
    if (y_count > 1) {
      auto off = normalized_weights(y_count - 1, 0.15, rng);
      std::uint32_t pos = 0;
      for (std::uint32_t y2 = 0; y2 < y_count; ++y2) {
        if (y2 == y) continue;
        t[static_cast<std::size_t>(y) * y_count + y2] = (1.0 - diag) * off[pos++];
      }
    }
  }
  return t;
}

}  // namespace

std::uint32_t IdealChainRecipe::n_states() const {
  std::uint32_t total = 0;
  for (std::uint32_t m : preimage_sizes) total += m;
  return total;
}

void IdealChainRecipe::validate() const {
  const std::uint32_t y_count = alphabet_size();
  if (y_count == 0) throw ValidationError("processes.IdealChainRecipe: need at least one label");
  validate_row_stochastic(label_transition, y_count, "processes.IdealChainRecipe");
  if (emission_weights.size() != y_count) {
    throw ValidationError("processes.IdealChainRecipe: one emission row per label required");
  }
  for (std::uint32_t y = 0; y < y_count; ++y) {
    if (preimage_sizes[y] == 0) {
      throw ValidationError("processes.IdealChainRecipe: every label needs a nonempty preimage");
    }
    const auto& q = emission_weights[y];
    if (q.size() != preimage_sizes[y]) {
      throw ValidationError("processes.IdealChainRecipe: emission row " + std::to_string(y) +
                            " does not match its preimage size");
    }
    double sum = 0.0;
    for (double v : q) {
      if (v <= 0.0) {
        throw ValidationError(
            "processes.IdealChainRecipe: emission weights must be strictly positive");
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      throw ValidationError("processes.IdealChainRecipe: emission row " + std::to_string(y) +
                            " sums to " + std::to_string(sum));
    }
  }
  require_irreducible_labels(label_transition, y_count, "processes.IdealChainRecipe");
}

IdealChain build_ideal_chain(const IdealChainRecipe& recipe) {
  recipe.validate();
  const std::uint32_t y_count = recipe.alphabet_size();
  const std::uint32_t n = recipe.n_states();

  // States grouped by label: label y owns a contiguous block of states.
  LookupTable table;
  table.table.resize(n);
  std::vector<double> emission(n);
  {
    std::uint32_t x = 0;
    for (std::uint32_t y = 0; y < y_count; ++y) {
      for (std::uint32_t i = 0; i < recipe.preimage_sizes[y]; ++i, ++x) {
        table.table[x] = y;
        emission[x] = recipe.emission_weights[y][i];
      }
    }
  }

  std::vector<double> p(static_cast<std::size_t>(n) * n);
  for (std::uint32_t x = 0; x < n; ++x) {
    for (std::uint32_t x2 = 0; x2 < n; ++x2) {
      const double t =
          recipe.label_transition[static_cast<std::size_t>(table.table[x]) * y_count +
                                  table.table[x2]];
      p[static_cast<std::size_t>(x) * n + x2] = t * emission[x2];
    }
    // Compensate accumulated rounding so the row is stochastic to 1e-15.
    double sum = 0.0;
    for (std::uint32_t x2 = 0; x2 < n; ++x2) sum += p[static_cast<std::size_t>(x) * n + x2];
    for (std::uint32_t x2 = 0; x2 < n; ++x2) p[static_cast<std::size_t>(x) * n + x2] /= sum;
  }

  const double slem = second_largest_eigenvalue_modulus(p, n);
  IdealChain out{MarkovChainSpec(n, std::move(p)),
                 RepresentationFunction(std::move(table), y_count),
                 MixingProfile{std::clamp(slem, 1e-12, 1.0 - 1e-12)}};

  // The stationary law has the product form pi(x) = nu(f(x)) q(x|f(x)).
  const auto nu = stationary_distribution(MarkovChainSpec(y_count, recipe.label_transition));
  std::vector<double> pi(n);
  for (std::uint32_t x = 0; x < n; ++x) {
    pi[x] = nu[out.label_map(x)] * emission[x];
  }
  out.spec.cache_stationary(std::move(pi));
  return out;
}

void IdealMdpRecipe::validate() const {
  if (label_transitions.empty()) {
    throw ValidationError("processes.IdealMdpRecipe: need at least one action");
  }
  IdealChainRecipe base{label_transitions.front(), preimage_sizes, emission_weights};
  base.validate();
  for (std::size_t a = 1; a < label_transitions.size(); ++a) {
    validate_row_stochastic(label_transitions[a], alphabet_size(), "processes.IdealMdpRecipe");
  }
}

IdealMdp build_ideal_mdp(const IdealMdpRecipe& recipe) {
  recipe.validate();
  const std::uint32_t y_count = recipe.alphabet_size();
  const std::uint32_t n_actions = recipe.n_actions();

  IdealChainRecipe base{recipe.label_transitions.front(), recipe.preimage_sizes,
                        recipe.emission_weights};
  const std::uint32_t n = base.n_states();

  LookupTable table;
  table.table.resize(n);
  std::vector<double> emission(n);
  {
    std::uint32_t x = 0;
    for (std::uint32_t y = 0; y < y_count; ++y) {
      for (std::uint32_t i = 0; i < recipe.preimage_sizes[y]; ++i, ++x) {
        table.table[x] = y;
        emission[x] = recipe.emission_weights[y][i];
      }
    }
  }

  std::vector<double> p(static_cast<std::size_t>(n) * n_actions * n);
  for (std::uint32_t x = 0; x < n; ++x) {
    for (std::uint32_t a = 0; a < n_actions; ++a) {
      double sum = 0.0;
      const std::size_t base_idx = (static_cast<std::size_t>(x) * n_actions + a) * n;
      for (std::uint32_t x2 = 0; x2 < n; ++x2) {
        const double t =
            recipe.label_transitions[a][static_cast<std::size_t>(table.table[x]) * y_count +
                                        table.table[x2]];
        p[base_idx + x2] = t * emission[x2];
        sum += p[base_idx + x2];
      }
      for (std::uint32_t x2 = 0; x2 < n; ++x2) p[base_idx + x2] /= sum;
    }
  }

  return IdealMdp{MdpSpec(n, n_actions, std::move(p)),
                  RepresentationFunction(std::move(table), y_count)};
}

ObservationSeries sample_chain(const MarkovChainSpec& spec, std::uint64_t n, std::uint64_t seed,
                               std::uint64_t burn_in) {
  if (n == 0) throw ValidationError("processes.sample_chain: trajectory length must be >= 1");
  const auto pi = stationary_distribution(spec);

  CounterRng rng(seed, 0);
  std::vector<std::uint32_t> states;
  states.reserve(n);
  std::uint32_t x = rng.next_index(pi);
  for (std::uint64_t i = 0; i < burn_in; ++i) x = rng.next_index(spec.row(x));
  for (std::uint64_t i = 0; i < n; ++i) {
    states.push_back(x);
    x = rng.next_index(spec.row(x));
  }
  return ObservationSeries::discrete(std::move(states), SeriesMeta{seed, "markov-chain"});
}

std::vector<RepresentationFunction> enumerate_family(std::uint32_t n_states,
                                                     std::uint32_t alphabet_size) {
  if (n_states == 0 || alphabet_size == 0) {
    throw ValidationError("processes.enumerate_family: need at least one state and one symbol");
  }
  const double count_log =
      static_cast<double>(n_states) * std::log10(static_cast<double>(alphabet_size));
  if (count_log > 6.0) {
    throw GuardError("processes.enumerate_family: |Y|^|X| exceeds the guard of 1e6; supply an "
                     "explicit family instead");
  }
  std::uint64_t count = 1;
  for (std::uint32_t i = 0; i < n_states; ++i) count *= alphabet_size;

  std::vector<RepresentationFunction> family;
  family.reserve(count);
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    LookupTable t;
    t.table.resize(n_states);
    std::uint64_t rem = idx;
    for (std::uint32_t x = n_states; x-- > 0;) {
      t.table[x] = static_cast<Symbol>(rem % alphabet_size);
      rem /= alphabet_size;
    }
    family.emplace_back(std::move(t), alphabet_size);
  }
  return family;
}

IdealChainRecipe random_ideal_recipe(std::uint32_t n_states, std::uint32_t alphabet_size,
                                     CounterRng& rng) {
  if (alphabet_size == 0 || n_states < alphabet_size) {
    throw ValidationError("processes.random_ideal_recipe: need |X| >= |Y| >= 1");
  }
  IdealChainRecipe recipe;
  recipe.label_transition = diag_dominant_transition(alphabet_size, rng);
  recipe.preimage_sizes.assign(alphabet_size, 1);
  for (std::uint32_t extra = n_states - alphabet_size; extra > 0; --extra) {
    recipe.preimage_sizes[rng.next_below(alphabet_size)] += 1;
  }
  recipe.emission_weights.resize(alphabet_size);
  for (std::uint32_t y = 0; y < alphabet_size; ++y) {
    recipe.emission_weights[y] = normalized_weights(recipe.preimage_sizes[y], 0.2, rng);
  }
  return recipe;
}

IdealMdpRecipe random_ideal_mdp_recipe(std::uint32_t n_states, std::uint32_t alphabet_size,
                                       std::uint32_t n_actions, CounterRng& rng) {
  auto base = random_ideal_recipe(n_states, alphabet_size, rng);
  IdealMdpRecipe recipe;
  recipe.preimage_sizes = std::move(base.preimage_sizes);
  recipe.emission_weights = std::move(base.emission_weights);
  recipe.label_transitions.push_back(std::move(base.label_transition));
  for (std::uint32_t a = 1; a < n_actions; ++a) {
    recipe.label_transitions.push_back(diag_dominant_transition(alphabet_size, rng));
  }
  return recipe;
}

MarkovChainSpec random_chain(std::uint32_t n_states, CounterRng& rng, double min_entry) {
  std::vector<double> p(static_cast<std::size_t>(n_states) * n_states);
  for (std::uint32_t x = 0; x < n_states; ++x) {
    auto row = normalized_weights(n_states, min_entry, rng);
    std::copy(row.begin(), row.end(), p.begin() + static_cast<std::size_t>(x) * n_states);
  }
  return MarkovChainSpec(n_states, std::move(p));
}

StationaryPolicy random_stochastic_policy(std::uint32_t n_states, std::uint32_t n_actions,
                                          CounterRng& rng, double min_prob) {
  std::vector<double> probs(static_cast<std::size_t>(n_states) * n_actions);
  for (std::uint32_t x = 0; x < n_states; ++x) {
    auto row = normalized_weights(n_actions, min_prob, rng);
    std::copy(row.begin(), row.end(), probs.begin() + static_cast<std::size_t>(x) * n_actions);
  }
  return StationaryPolicy(n_states, n_actions, std::move(probs));
}

}  // namespace tsinfo
