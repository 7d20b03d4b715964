#include <doctest.h>

#include <cmath>

#include "tsinfo/mdp.hpp"
#include "tsinfo/oracle.hpp"
#include "tsinfo/processes.hpp"
#include "tsinfo/rng.hpp"

using namespace tsinfo;

namespace {

// Two states, two actions: action 0 stays put, action 1 swaps.
MdpSpec swap_or_stay() {
  return MdpSpec(2, 2,
                 {
                     1.0, 0.0,  // x=0, a=0
                     0.0, 1.0,  // x=0, a=1
                     0.0, 1.0,  // x=1, a=0
                     1.0, 0.0,  // x=1, a=1
                 });
}

}  // namespace

TEST_SUITE("mdp") {

TEST_CASE("spec and policy validation") {
  CHECK_THROWS_AS(MdpSpec(2, 1, {0.5, 0.4, 1.0, 0.0}), ValidationError);
  CHECK_THROWS_AS(StationaryPolicy(1, 2, {0.7, 0.2}), ValidationError);
  const auto uniform = StationaryPolicy::uniform(3, 4);
  CHECK(uniform.alpha_floor() == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(uniform.stochastic());
}

TEST_CASE("induced chain composition") {
  const auto mdp = swap_or_stay();

  // Degenerate action set: the induced chain is the single kernel.
  const MdpSpec one_action(2, 1, {0.3, 0.7, 0.6, 0.4});
  const auto single = induced_chain(one_action, StationaryPolicy::uniform(2, 1));
  CHECK(single.transition(0, 1) == doctest::Approx(0.7).epsilon(1e-15));

  // Uniform mixing averages the kernels row-wise.
  const auto mixed = induced_chain(mdp, StationaryPolicy::uniform(2, 2));
  CHECK(mixed.transition(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(mixed.transition(1, 0) == doctest::Approx(0.5).epsilon(1e-15));

  // A deterministic policy selects rows.
  const StationaryPolicy deterministic(2, 2, {1.0, 0.0, 0.0, 1.0});
  const auto selected = induced_chain(mdp, deterministic);
  CHECK(selected.transition(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(selected.transition(1, 0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("policy mixtures induce chain mixtures") {
  CounterRng rng(51, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const auto ideal = build_ideal_mdp(random_ideal_mdp_recipe(4, 2, 2, rng));
    const auto p1 = random_stochastic_policy(4, 2, rng);
    const auto p2 = random_stochastic_policy(4, 2, rng);
    const double lambda = rng.next_unit();
    std::vector<double> blend(p1.prob_matrix().size());
    for (std::size_t i = 0; i < blend.size(); ++i) {
      blend[i] = lambda * p1.prob_matrix()[i] + (1 - lambda) * p2.prob_matrix()[i];
    }
    const auto mixed = induced_chain(ideal.spec, StationaryPolicy(4, 2, std::move(blend)));
    const auto c1 = induced_chain(ideal.spec, p1);
    const auto c2 = induced_chain(ideal.spec, p2);
    for (std::uint32_t x = 0; x < 4; ++x) {
      for (std::uint32_t x2 = 0; x2 < 4; ++x2) {
        CHECK(mixed.transition(x, x2) ==
              doctest::Approx(lambda * c1.transition(x, x2) + (1 - lambda) * c2.transition(x, x2))
                  .epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("weak connectivity") {
  const MdpSpec absorbing(2, 1, {1.0, 0.0, 0.0, 1.0});
  const auto split = check_weakly_connected(absorbing);
  CHECK_FALSE(split.connected);
  REQUIRE(split.witness.has_value());
  CHECK(split.witness->first != split.witness->second);

  const MdpSpec cycle(3, 2,
                      {0, 1, 0, 0, 1, 0,   //
                       0, 0, 1, 0, 0, 1,   //
                       1, 0, 0, 1, 0, 0});
  CHECK(check_weakly_connected(cycle).connected);

  CounterRng rng(52, 0);
  const auto ideal = build_ideal_mdp(random_ideal_mdp_recipe(4, 2, 2, rng));
  CHECK(check_weakly_connected(ideal.spec).connected);
}

TEST_CASE("CI under a policy holds for lifted constructions") {
  CounterRng rng(53, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const auto ideal = build_ideal_mdp(random_ideal_mdp_recipe(5, 2, 2, rng));
    const auto uniform = StationaryPolicy::uniform(5, 2);
    CHECK(ci_check_under_policy(ideal.spec, uniform, ideal.label_map, 1e-9).satisfied);
    for (int p = 0; p < 3; ++p) {
      const auto policy = random_stochastic_policy(5, 2, rng);
      CHECK(ci_check_under_policy(ideal.spec, policy, ideal.label_map, 1e-9).satisfied);
    }
    CHECK(ci_check_under_policy(ideal.spec, uniform, RepresentationFunction::identity(5), 1e-9)
              .satisfied);
  }
}

TEST_CASE("CI under a policy fails for a constant map on an action-dependent MDP") {
  CounterRng rng(54, 0);
  const auto ideal = build_ideal_mdp(random_ideal_mdp_recipe(4, 2, 2, rng));
  const auto constant = RepresentationFunction::constant(4, 0, 2);
  const auto check =
      ci_check_under_policy(ideal.spec, StationaryPolicy::uniform(4, 2), constant, 1e-9);
  CHECK_FALSE(check.satisfied);
  CHECK(check.max_violation > 0.01);
}

TEST_CASE("exact information under a policy") {
  const MdpSpec one_action(2, 1, {0.9, 0.1, 0.1, 0.9});
  const auto policy = StationaryPolicy::uniform(2, 1);
  const auto identity = RepresentationFunction::identity(2);
  CHECK(exact_i1_under_policy(one_action, policy, identity) ==
        doctest::Approx(exact_ik(MarkovChainSpec(2, {0.9, 0.1, 0.1, 0.9}), identity, 1))
            .epsilon(1e-15));

  const auto constant = RepresentationFunction::constant(2, 0, 2);
  CHECK(exact_i1_under_policy(one_action, policy, constant) ==
        doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("the label map maximizes exact information under exploration policies") {
  CounterRng rng(55, 0);
  for (int trial = 0; trial < 8; ++trial) {
    const std::uint32_t n_states = 3 + static_cast<std::uint32_t>(rng.next_below(3));
    const auto ideal = build_ideal_mdp(random_ideal_mdp_recipe(n_states, 2, 2, rng));
    const auto family = enumerate_family(n_states, 2);

    // Uniform plus label-measurable random policies; for these the induced
    // chain keeps the product structure.
    std::vector<StationaryPolicy> policies;
    policies.push_back(StationaryPolicy::uniform(n_states, 2));
    for (int p = 0; p < 2; ++p) {
      std::vector<double> label_probs(static_cast<std::size_t>(n_states) * 2);
      const double q0 = rng.next_range(0.2, 0.8);
      const double q1 = rng.next_range(0.2, 0.8);
      for (std::uint32_t x = 0; x < n_states; ++x) {
        const double q = ideal.label_map(x) == 0 ? q0 : q1;
        label_probs[x * 2] = q;
        label_probs[x * 2 + 1] = 1 - q;
      }
      policies.emplace_back(n_states, 2, std::move(label_probs));
    }

    for (const auto& policy : policies) {
      std::size_t best = 0;
      double best_value = -1.0;
      for (std::size_t i = 0; i < family.size(); ++i) {
        const double value = exact_i1_under_policy(ideal.spec, policy, family[i]);
        if (value > best_value) {
          best_value = value;
          best = i;
        }
      }
      // The argmax map is CI under held-out stochastic policies.
      for (int p = 0; p < 3; ++p) {
        const auto verification = random_stochastic_policy(n_states, 2, rng);
        CHECK(ci_check_under_policy(ideal.spec, verification, family[best], 1e-9).satisfied);
      }
    }
  }
}

TEST_CASE("policy invariance of CI verdicts on lifted MDPs") {
  CounterRng rng(56, 0);
  for (int trial = 0; trial < 5; ++trial) {
    const std::uint32_t n_states = 3 + static_cast<std::uint32_t>(rng.next_below(3));
    const auto ideal = build_ideal_mdp(random_ideal_mdp_recipe(n_states, 2, 2, rng));
    const auto family = enumerate_family(n_states, 2);
    for (int pair = 0; pair < 3; ++pair) {
      const auto p1 = random_stochastic_policy(n_states, 2, rng);
      const auto p2 = random_stochastic_policy(n_states, 2, rng);
      for (const auto& g : family) {
        CHECK(ci_check_under_policy(ideal.spec, p1, g, 1e-9).satisfied ==
              ci_check_under_policy(ideal.spec, p2, g, 1e-9).satisfied);
      }
    }
  }
}

TEST_CASE("trajectory sampling") {
  CounterRng rng(57, 0);
  const auto ideal = build_ideal_mdp(random_ideal_mdp_recipe(4, 2, 2, rng));
  const auto uniform = StationaryPolicy::uniform(4, 2);

  const auto a = sample_mdp(ideal.spec, uniform, 300, 11);
  const auto b = sample_mdp(ideal.spec, uniform, 300, 11);
  CHECK(a.discrete_states() == b.discrete_states());
  CHECK(a.actions() == b.actions());
  REQUIRE(a.has_actions());
  CHECK(a.actions().size() == 300);

  const MdpSpec one_action(2, 1, {0.5, 0.5, 0.5, 0.5});
  const auto single = sample_mdp(one_action, StationaryPolicy::uniform(2, 1), 50, 3);
  for (auto act : single.actions()) CHECK(act == 0);

  // Uniform exploration: per-state action frequencies concentrate at 1/2.
  const auto long_run = sample_mdp(ideal.spec, uniform, 100000, 17);
  std::vector<double> taken(4, 0), visits(4, 0);
  for (std::size_t i = 0; i < long_run.size(); ++i) {
    visits[long_run.discrete_states()[i]] += 1;
    taken[long_run.discrete_states()[i]] += long_run.actions()[i];
  }
  for (std::uint32_t x = 0; x < 4; ++x) {
    REQUIRE(visits[x] > 0);
    CHECK(std::abs(taken[x] / visits[x] - 0.5) <= 0.02);
  }
}

TEST_CASE("inadmissible policies are rejected") {
  const auto mdp = swap_or_stay();
  // Always staying put splits the chain into two closed classes.
  const StationaryPolicy stay(2, 2, {1.0, 0.0, 1.0, 0.0});
  CHECK_THROWS_AS(sample_mdp(mdp, stay, 10, 0), ValidationError);
  CHECK_THROWS_AS(
      ci_check_under_policy(mdp, stay, RepresentationFunction::identity(2), 1e-9),
      ValidationError);
}

}  // TEST_SUITE
