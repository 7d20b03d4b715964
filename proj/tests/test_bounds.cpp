#include <doctest.h>

#include <cmath>
#include <limits>

#include "tsinfo/bounds.hpp"
#include "tsinfo/estimators.hpp"
#include "tsinfo/oracle.hpp"
#include "tsinfo/processes.hpp"
#include "tsinfo/rng.hpp"

using namespace tsinfo;

TEST_SUITE("bounds") {

TEST_CASE("beta schedules") {
  CHECK_THROWS_AS(BetaSchedule({0.5, 0.6}), ValidationError);
  CHECK_THROWS_AS(BetaSchedule({1.5}), ValidationError);
  const auto geo = BetaSchedule::geometric(0.5, 4);
  CHECK(geo.at(1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(geo.at(4) == doctest::Approx(0.0625).epsilon(1e-15));
  CHECK_THROWS_AS(geo.at(5), ValidationError);
}

TEST_CASE("blocked deviation bound degenerates correctly for iid schedules") {
  const auto iid = BetaSchedule::iid(10);
  const double eps = 0.2;
  const std::uint64_t n = 500;
  CHECK(blocked_deviation_bound(iid, 1, eps, n, 1) ==
        doctest::Approx(8.0 * std::exp(-static_cast<double>(n) * eps * eps / 8.0))
            .epsilon(1e-12));
  CHECK_THROWS_AS(blocked_deviation_bound(iid, 1, eps, n, 0), ValidationError);
  CHECK_THROWS_AS(blocked_deviation_bound(iid, 1, eps, n, n + 1), ValidationError);
}

TEST_CASE("blocked deviation bound with a huge deviation is dominated by mixing") {
  const auto beta = BetaSchedule::geometric(0.9, 20);
  const double value = blocked_deviation_bound(beta, 1, 10.0, 100, 10);
  const double mixing_only = 100.0 * beta.at(10);
  CHECK(value >= mixing_only);
  CHECK(value - mixing_only <= 1e-40);
}

TEST_CASE("blocked deviation bound scan at a fixed block ratio") {
  // With t_n = n/10 the block length l_n stays constant, so only the mixing
  // term n beta(t_n) shrinks; the empirical-process factor t_n^(d+1) grows
  // polynomially. Past the mixing peak the bound is nonincreasing for
  // exactly as long as the mixing term dominates.
  const double gamma = 0.5;
  const auto beta = BetaSchedule::geometric(gamma, 100000);
  double prev = -1.0;
  for (std::uint64_t n = 20; n <= 2000; n += 10) {
    const std::uint64_t t_n = n / 10;
    const double mixing = static_cast<double>(n) * beta.at(t_n);
    const double value = blocked_deviation_bound(beta, 1, 3.0, n, t_n);
    const double process = value - mixing;
    if (prev >= 0.0 && mixing >= process) CHECK(value <= prev * (1 + 1e-9));
    prev = value;
  }
}

TEST_CASE("geometric mixing bound spot value") {
  const double value = mixing_deviation_bound(1, 0.1, 10000, 0.9);
  // Independent evaluation of the two terms.
  const double term1 = 1e4 * std::pow(0.9, 100.0);
  const double term2 = 8.0 * 1e4 * std::exp(-100.0 * 0.01 / 8.0);
  CHECK(value == doctest::Approx(term1 + term2).epsilon(1e-12));
  CHECK(value == doctest::Approx(7.0601e4 + 0.2656).epsilon(1e-3));
}

TEST_CASE("mixing bound limits") {
  // Vanishing gamma leaves only the empirical-process term.
  const double tiny_gamma = mixing_deviation_bound(1, 0.1, 10000, 1e-300);
  CHECK(tiny_gamma == doctest::Approx(8.0 * 1e4 * std::exp(-0.125)).epsilon(1e-12));

  // The bound eventually drops below any level as n grows.
  std::uint64_t n = 16;
  double value = mixing_deviation_bound(1, 1.0, n, 0.5);
  while (value >= 0.05 && n < (1ull << 40)) {
    n *= 2;
    value = mixing_deviation_bound(1, 1.0, n, 0.5);
  }
  CHECK(value < 0.05);
}

TEST_CASE("composite bound decomposes as documented") {
  const BoundParams params{1, 0.1, 10000, 0.9, 1, 2};
  const double eff = std::min(0.1 / 48.0, binary_entropy_inverse(0.1 / 24.0));
  CHECK(ik_deviation_bound(params) ==
        doctest::Approx(2.0 * 4.0 * mixing_deviation_bound(7, eff, 9999, 0.9)).epsilon(1e-12));
  CHECK_THROWS_AS(ik_deviation_bound(BoundParams{1, 0.1, 1, 0.9, 1, 2}), ValidationError);
}

TEST_CASE("composite bound monotonicities") {
  const BoundParams base{1, 0.5, 10000, 0.9, 1, 2};
  BoundParams p = base;
  p.epsilon = 1.0;
  CHECK(ik_deviation_bound(p) <= ik_deviation_bound(base) * (1 + 1e-12));
  p = base;
  p.alphabet_size = 3;
  CHECK(ik_deviation_bound(p) >= ik_deviation_bound(base) * (1 - 1e-12));
  p = base;
  p.alphabet_size = 4;
  const BoundParams mid{1, 0.5, 10000, 0.9, 1, 3};
  CHECK(ik_deviation_bound(p) >= ik_deviation_bound(mid) * (1 - 1e-12));
}

TEST_CASE("composite bound is nonincreasing past its crossover") {
  CounterRng rng(41, 0);
  for (int trial = 0; trial < 20; ++trial) {
    BoundParams p;
    p.d = 1 + static_cast<std::uint32_t>(rng.next_below(3));
    p.epsilon = rng.next_range(0.5, 6.0);
    p.gamma = rng.next_range(0.3, 0.99);
    p.k = 1 + static_cast<std::uint32_t>(rng.next_below(2));
    p.alphabet_size = 2 + static_cast<std::uint32_t>(rng.next_below(2));
    const std::uint64_t crossover = ik_deviation_crossover_n(p);
    if (crossover >= (1ull << 50)) continue;
    p.n = crossover;
    double prev = ik_deviation_bound(p);
    for (int step = 0; step < 4; ++step) {
      p.n *= 2;
      const double cur = ik_deviation_bound(p);
      CHECK(cur <= prev * (1 + 1e-12) + 1e-300);
      prev = cur;
    }
  }
}

TEST_CASE("information/total-variation bound") {
  CHECK(info_tv_bound(1, 2, 0.0).bits == doctest::Approx(0.0).epsilon(1e-15));
  const auto spot = info_tv_bound(1, 2, 0.1);
  CHECK_FALSE(spot.saturated);
  CHECK(spot.bits == doctest::Approx(2.006988).epsilon(1e-6));
  const auto capped = info_tv_bound(1, 2, 1.5);
  CHECK(capped.saturated);
  CHECK(capped.bits == doctest::Approx(4.0).epsilon(1e-12));
  CHECK_THROWS_AS(info_tv_bound(1, 2, -0.1), ValidationError);
  CHECK_THROWS_AS(info_tv_bound(1, 2, 2.5), ValidationError);
}

TEST_CASE("required sample size postconditions") {
  const BoundParams wide{1, 6.0, 0, 0.9, 1, 2};
  const auto needed = required_sample_size(wide, 0.5);
  REQUIRE(needed.has_value());
  CHECK(*needed <= kRequiredSampleSizeCap);
  BoundParams at = wide;
  at.n = *needed;
  CHECK(ik_deviation_bound(at) <= 0.5);
  if (*needed > ik_deviation_crossover_n(wide) && *needed > wide.k + 1) {
    at.n = *needed - 1;
    CHECK(ik_deviation_bound(at) > 0.5);
  }

  // A looser epsilon never needs more samples.
  BoundParams looser = wide;
  looser.epsilon = 7.0;
  const auto fewer = required_sample_size(looser, 0.5);
  REQUIRE(fewer.has_value());
  CHECK(*fewer <= *needed);

  // Slower mixing never needs fewer samples.
  BoundParams slower = wide;
  slower.gamma = 0.95;
  const auto more = required_sample_size(slower, 0.5);
  REQUIRE(more.has_value());
  CHECK(*more >= *needed);
}

TEST_CASE("tight deviation targets exceed the search cap") {
  const BoundParams narrow{1, 0.5, 0, 0.5, 1, 2};
  CHECK_FALSE(required_sample_size(narrow, 0.5).has_value());
  CHECK_THROWS_AS(required_sample_size(narrow, 1.5), ValidationError);
}

TEST_CASE("deviation frequencies never exceed a nonvacuous reading of the bound") {
  // Monte-Carlo sup-deviation of the plug-in estimate over a small family,
  // compared against the bound whenever the bound is informative. At this
  // scale the bound is vacuous, so the comparison must hold with room.
  const auto chain = build_ideal_chain([] {
    IdealChainRecipe r;
    r.label_transition = {0.9, 0.1, 0.1, 0.9};
    r.preimage_sizes = {1, 1};
    r.emission_weights = {{1.0}, {1.0}};
    return r;
  }());
  const auto family = enumerate_family(2, 2);
  const double exact[] = {exact_ik(chain.spec, family[0], 1), exact_ik(chain.spec, family[1], 1),
                          exact_ik(chain.spec, family[2], 1), exact_ik(chain.spec, family[3], 1)};

  const double epsilon = 0.15;
  const std::uint64_t n = 1000;
  const int runs = 200;
  int exceed = 0;
  CounterRng rng(42, 0);
  for (int run = 0; run < runs; ++run) {
    const auto series = sample_chain(chain.spec, n, rng.next_u64());
    double sup_dev = 0.0;
    for (std::size_t i = 0; i < family.size(); ++i) {
      const double est = ik_hat(family[i], series, 1).value;
      sup_dev = std::max(sup_dev, std::abs(est - exact[i]));
    }
    if (sup_dev > epsilon) ++exceed;
  }
  const double freq = static_cast<double>(exceed) / runs;
  const double se = std::sqrt(freq * (1 - freq) / runs + 1e-12);
  const BoundParams params{2, epsilon, n, chain.mixing.gamma, 1, 2};
  const double bound = ik_deviation_bound(params);
  CHECK(freq <= std::min(1.0, bound) + 3 * se + 1e-12);

  // The bound does become informative at astronomically large n.
  BoundParams large = params;
  large.epsilon = 6.0;
  large.n = 1000000000000ull;
  CHECK(ik_deviation_bound(large) < 1.0);
}

TEST_CASE("all bound values are nonnegative") {
  CounterRng rng(43, 0);
  for (int trial = 0; trial < 50; ++trial) {
    BoundParams p;
    p.d = 1 + static_cast<std::uint32_t>(rng.next_below(4));
    p.epsilon = rng.next_range(0.01, 4.0);
    p.n = 2 + rng.next_below(1000000);
    p.gamma = rng.next_range(0.01, 0.99);
    p.k = 1 + static_cast<std::uint32_t>(rng.next_below(3));
    p.alphabet_size = 2 + static_cast<std::uint32_t>(rng.next_below(3));
    if (p.n <= p.k) continue;
    CHECK(ik_deviation_bound(p) >= 0.0);
    CHECK(mixing_deviation_bound(p.d, p.epsilon, p.n, p.gamma) >= 0.0);
  }
}

}  // TEST_SUITE
