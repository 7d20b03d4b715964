#include <doctest.h>

#include <cmath>

#include "tsinfo/estimators.hpp"
#include "tsinfo/oracle.hpp"
#include "tsinfo/processes.hpp"
#include "tsinfo/rng.hpp"

using namespace tsinfo;

TEST_SUITE("processes") {

TEST_CASE("ideal chain construction from an explicit recipe") {
  IdealChainRecipe recipe;
  recipe.label_transition = {0.9, 0.1, 0.1, 0.9};
  recipe.preimage_sizes = {2, 2};
  recipe.emission_weights = {{0.5, 0.5}, {0.5, 0.5}};
  const auto chain = build_ideal_chain(recipe);

  CHECK(chain.spec.n_states() == 4);
  for (std::uint32_t x = 0; x < 4; ++x) {
    double sum = 0.0;
    for (std::uint32_t x2 = 0; x2 < 4; ++x2) sum += chain.spec.transition(x, x2);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
  }
  CHECK(ci_check_markov(chain.spec, chain.label_map, 1e-12).satisfied);
  CHECK(chain.mixing.gamma > 0.0);
  CHECK(chain.mixing.gamma < 1.0);
}

TEST_CASE("singleton preimages reproduce the label chain") {
  IdealChainRecipe recipe;
  recipe.label_transition = {0.7, 0.3, 0.2, 0.8};
  recipe.preimage_sizes = {1, 1};
  recipe.emission_weights = {{1.0}, {1.0}};
  const auto chain = build_ideal_chain(recipe);
  CHECK(chain.spec.n_states() == 2);
  CHECK(chain.spec.transition(0, 0) == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(chain.spec.transition(1, 0) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(chain.label_map(0) == 0);
  CHECK(chain.label_map(1) == 1);
}

TEST_CASE("reducible label transitions are rejected") {
  IdealChainRecipe recipe;
  recipe.label_transition = {1.0, 0.0, 0.0, 1.0};
  recipe.preimage_sizes = {1, 1};
  recipe.emission_weights = {{1.0}, {1.0}};
  CHECK_THROWS_AS(build_ideal_chain(recipe), ValidationError);
}

TEST_CASE("label process of an ideal chain has transition exactly T") {
  CounterRng rng(31, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const std::uint32_t alphabet = 2 + static_cast<std::uint32_t>(rng.next_below(2));
    const std::uint32_t n_states = alphabet + static_cast<std::uint32_t>(rng.next_below(5));
    const auto recipe = random_ideal_recipe(n_states, alphabet, rng);
    const auto chain = build_ideal_chain(recipe);
    const auto induced = induced_label_transition(chain.spec, chain.label_map);
    for (std::size_t i = 0; i < induced.size(); ++i) {
      CHECK(induced[i] == doctest::Approx(recipe.label_transition[i]).epsilon(1e-12));
    }

    // Stationary label marginal equals the stationary law of T.
    const auto pi = stationary_distribution(chain.spec);
    const auto nu = stationary_distribution(MarkovChainSpec(alphabet, recipe.label_transition));
    std::vector<double> label_mass(alphabet, 0.0);
    for (std::uint32_t x = 0; x < n_states; ++x) label_mass[chain.label_map(x)] += pi[x];
    for (std::uint32_t y = 0; y < alphabet; ++y) {
      CHECK(label_mass[y] == doctest::Approx(nu[y]).epsilon(1e-10));
    }
  }
}

TEST_CASE("random recipes satisfy the CI check") {
  CounterRng rng(32, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::uint32_t alphabet = 2 + static_cast<std::uint32_t>(rng.next_below(2));
    const std::uint32_t n_states = alphabet + static_cast<std::uint32_t>(rng.next_below(6));
    const auto chain = build_ideal_chain(random_ideal_recipe(n_states, alphabet, rng));
    CHECK(ci_check_markov(chain.spec, chain.label_map, 1e-12).satisfied);
  }
}

TEST_CASE("sampling is deterministic in the seed") {
  const auto chain = build_ideal_chain([] {
    IdealChainRecipe r;
    r.label_transition = {0.8, 0.2, 0.3, 0.7};
    r.preimage_sizes = {2, 1};
    r.emission_weights = {{0.6, 0.4}, {1.0}};
    return r;
  }());
  const auto a = sample_chain(chain.spec, 200, 42);
  const auto b = sample_chain(chain.spec, 200, 42);
  CHECK(a.discrete_states() == b.discrete_states());
  const auto c = sample_chain(chain.spec, 200, 43);
  CHECK(a.discrete_states() != c.discrete_states());
  CHECK(a.meta().seed == 42);

  const auto warmed = sample_chain(chain.spec, 200, 42, 5);
  CHECK(warmed.size() == 200);
  CHECK(warmed.discrete_states() != a.discrete_states());
}

TEST_CASE("deterministic cycles sample periodically") {
  const MarkovChainSpec cycle(3, {0, 1, 0, 0, 0, 1, 1, 0, 0});
  const auto series = sample_chain(cycle, 30, 7);
  const auto& s = series.discrete_states();
  for (std::size_t i = 0; i + 3 < s.size(); ++i) CHECK(s[i] == s[i + 3]);
}

TEST_CASE("empirical marginal concentrates at n = 1e6") {
  const MarkovChainSpec chain(2, {0.9, 0.1, 0.1, 0.9});
  const auto series = sample_chain(chain, 1000000, 2024);
  double ones = 0;
  for (auto s : series.discrete_states()) ones += s;
  const double freq = ones / 1e6;
  CHECK(std::abs(freq - 0.5) <= 0.005);
}

TEST_CASE("empirical block laws converge to the exact law") {
  // Seed-averaged total variation against the oracle, one mild and one
  // slower-mixing recipe.
  CounterRng rng(33, 0);
  for (int trial = 0; trial < 2; ++trial) {
    const auto chain = build_ideal_chain(random_ideal_recipe(4, 2, rng));
    const auto exact = exact_block_distribution(chain.spec, chain.label_map, 1);
    double mean_tv = 0.0;
    const int n_seeds = 10;
    for (int s = 0; s < n_seeds; ++s) {
      const auto series = sample_chain(chain.spec, 100000, rng.next_u64());
      const auto symbols = apply_representation(chain.label_map, series);
      mean_tv += block_total_variation(exact, collect_blocks(symbols, 1, 2));
    }
    mean_tv /= n_seeds;
    CHECK(mean_tv <= 5.0 * std::sqrt(4.0 / 100000.0));
  }
}

TEST_CASE("family enumeration") {
  const auto tiny = enumerate_family(2, 2);
  REQUIRE(tiny.size() == 4);
  CHECK(tiny[0].lookup().table == std::vector<Symbol>{0, 0});
  CHECK(tiny[1].lookup().table == std::vector<Symbol>{0, 1});
  CHECK(tiny[2].lookup().table == std::vector<Symbol>{1, 0});
  CHECK(tiny[3].lookup().table == std::vector<Symbol>{1, 1});

  const auto family = enumerate_family(4, 2);
  CHECK(family.size() == 16);
  CHECK(family.front().lookup().table == std::vector<Symbol>{0, 0, 0, 0});
  CHECK(family.back().lookup().table == std::vector<Symbol>{1, 1, 1, 1});

  CHECK_THROWS_AS(enumerate_family(40, 2), GuardError);
}

TEST_CASE("ideal MDP construction is row-stochastic and action-sensitive") {
  CounterRng rng(34, 0);
  const auto recipe = random_ideal_mdp_recipe(5, 2, 3, rng);
  const auto ideal = build_ideal_mdp(recipe);
  CHECK(ideal.spec.n_states() == 5);
  CHECK(ideal.spec.n_actions() == 3);
  bool differs = false;
  for (std::uint32_t x = 0; x < 5; ++x) {
    for (std::uint32_t a = 0; a < 3; ++a) {
      double sum = 0.0;
      for (std::uint32_t x2 = 0; x2 < 5; ++x2) sum += ideal.spec.transition(x, a, x2);
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
      if (a > 0 && std::abs(ideal.spec.transition(x, a, 0) - ideal.spec.transition(x, 0, 0)) >
                       1e-9) {
        differs = true;
      }
    }
  }
  CHECK(differs);
}

TEST_CASE("random policies are stochastic") {
  CounterRng rng(35, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto policy = random_stochastic_policy(4, 3, rng);
    CHECK(policy.stochastic());
    CHECK(policy.alpha_floor() > 0.0);
  }
}

}  // TEST_SUITE
