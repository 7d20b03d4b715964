#include <doctest.h>

#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "tsinfo/estimators.hpp"
#include "tsinfo/oracle.hpp"
#include "tsinfo/processes.hpp"
#include "tsinfo/rng.hpp"

using namespace tsinfo;

namespace {

// Independent route for mutual information: direct summation of
// p log2(p / (p_first p_last)) over the empirical (k+1)-block table.
double brute_force_mi(const SymbolSequence& s, std::uint32_t alphabet, std::uint32_t k) {
  std::map<std::pair<std::uint64_t, Symbol>, double> joint;
  std::map<std::uint64_t, double> first;
  std::map<Symbol, double> last;
  const double n = static_cast<double>(s.size() - k);
  for (std::size_t i = 0; i + k < s.size(); ++i) {
    std::uint64_t prefix = 0;
    for (std::size_t j = i; j < i + k; ++j) prefix = prefix * alphabet + s[j];
    joint[{prefix, s[i + k]}] += 1.0 / n;
    first[prefix] += 1.0 / n;
    last[s[i + k]] += 1.0 / n;
  }
  double mi = 0.0;
  for (const auto& [key, p] : joint) {
    mi += p * std::log2(p / (first[key.first] * last[key.second]));
  }
  return mi;
}

SymbolSequence random_symbols(std::size_t len, std::uint32_t alphabet, CounterRng& rng) {
  SymbolSequence s(len);
  for (auto& v : s) v = static_cast<Symbol>(rng.next_below(alphabet));
  return s;
}

}  // namespace

TEST_SUITE("estimators") {

TEST_CASE("entropy of explicit distributions") {
  CHECK(entropy(std::vector<double>{0.5, 0.5}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(entropy(std::vector<double>{1.0, 0.0}) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(entropy(std::vector<double>{0.9, 0.1}) == doctest::Approx(0.4689956).epsilon(1e-6));
  CHECK_THROWS_AS(entropy(std::vector<double>{-0.1, 1.1}), ValidationError);
  CHECK_THROWS_AS(entropy(std::vector<double>{0.5, 0.6}), ValidationError);
}

TEST_CASE("entropy is concave on mixtures") {
  CounterRng rng(11, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = 2 + rng.next_below(6);
    std::vector<double> p(m), q(m);
    double sp = 0, sq = 0;
    for (std::size_t i = 0; i < m; ++i) {
      p[i] = rng.next_unit() + 1e-3;
      q[i] = rng.next_unit() + 1e-3;
      sp += p[i];
      sq += q[i];
    }
    for (std::size_t i = 0; i < m; ++i) {
      p[i] /= sp;
      q[i] /= sq;
    }
    const double lambda = rng.next_unit();
    std::vector<double> mix(m);
    for (std::size_t i = 0; i < m; ++i) mix[i] = lambda * p[i] + (1 - lambda) * q[i];
    CHECK(entropy(mix) >= lambda * entropy(p) + (1 - lambda) * entropy(q) - 1e-12);
  }
}

TEST_CASE("h0_hat examples") {
  const auto identity = RepresentationFunction::identity(2);
  CHECK(h0_hat(identity, ObservationSeries::discrete({0, 1, 0, 1})) ==
        doctest::Approx(1.0).epsilon(1e-12));
  const auto constant = RepresentationFunction::constant(2, 0, 2);
  CHECK(h0_hat(constant, ObservationSeries::discrete({0, 1, 1, 0})) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(h0_hat(identity, ObservationSeries::discrete({0, 0, 0, 1})) ==
        doctest::Approx(0.811278).epsilon(1e-6));
}

TEST_CASE("ik_hat examples and brute-force agreement") {
  // Deterministic alternation with balanced marginals.
  SymbolSequence alternating(101);
  for (std::size_t i = 0; i < alternating.size(); ++i) alternating[i] = i % 2;
  CHECK(ik_hat_symbols(alternating, 2, 1).value == doctest::Approx(1.0).epsilon(1e-12));
  // At even lengths the pair marginals are off by one block; still ~1 bit.
  alternating.pop_back();
  CHECK(ik_hat_symbols(alternating, 2, 1).value == doctest::Approx(1.0).epsilon(1e-3));

  const SymbolSequence s{0, 0, 1, 1};
  const auto est = ik_hat_symbols(s, 2, 1);
  CHECK(est.value == doctest::Approx(0.251629).epsilon(1e-6));
  CHECK(est.value == doctest::Approx(brute_force_mi(s, 2, 1)).epsilon(1e-12));
  CHECK(est.k_used == 1);
  CHECK(est.n_effective == 3);

  const auto constant = RepresentationFunction::constant(2, 0, 2);
  CHECK(ik_hat(constant, ObservationSeries::discrete({0, 1, 0, 1, 1}), 1).value ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("ik_hat matches the direct mutual-information route on random data") {
  CounterRng rng(12, 0);
  for (int trial = 0; trial < 40; ++trial) {
    const std::uint32_t alphabet = 2 + static_cast<std::uint32_t>(rng.next_below(2));
    const auto s = random_symbols(30 + rng.next_below(200), alphabet, rng);
    const auto k = 1 + static_cast<std::uint32_t>(rng.next_below(2));
    if (s.size() <= k) continue;
    CHECK(ik_hat_symbols(s, alphabet, k).value ==
          doctest::Approx(brute_force_mi(s, alphabet, k)).epsilon(1e-10));
  }
}

TEST_CASE("hk_hat examples") {
  CHECK(hk_hat_symbols(SymbolSequence{0, 0, 1, 1}, 2, 1) ==
        doctest::Approx(std::log2(3.0) - entropy(std::vector<double>{2.0 / 3, 1.0 / 3}))
            .epsilon(1e-12));
  CHECK(hk_hat_symbols(SymbolSequence{0, 0, 1, 1}, 2, 1) == doctest::Approx(0.666667).epsilon(1e-6));

  SymbolSequence cycle(50);
  for (std::size_t i = 0; i < cycle.size(); ++i) cycle[i] = i % 2;
  CHECK(hk_hat_symbols(cycle, 2, 1) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("plug-in conditional entropy approaches the iid oracle value") {
  const MarkovChainSpec iid(2, {0.5, 0.5, 0.5, 0.5});
  const auto identity = RepresentationFunction::identity(2);
  CHECK(exact_hk(iid, identity, 1) == doctest::Approx(1.0).epsilon(1e-12));
  const auto series = sample_chain(iid, 100000, 321);
  CHECK(hk_hat(identity, series, 1) == doctest::Approx(1.0).epsilon(5e-3));
}

TEST_CASE("schedule_k examples and monotonicity") {
  CHECK(schedule_k(100, 2) == 2);
  CHECK(schedule_k(1000000, 2) == 4);
  CHECK(schedule_k(2, 2) == 1);
  CHECK(schedule_k(2, 17) == 1);
  CHECK_THROWS_AS(schedule_k(1, 2), ValidationError);

  std::uint32_t prev = 1;
  for (std::uint64_t n = 2; n <= 3000000; n = n * 3 / 2 + 1) {
    const auto k = schedule_k(n, 2);
    CHECK(k >= prev);
    prev = k;
  }
}

TEST_CASE("iinf_hat behavior") {
  const MarkovChainSpec iid(2, {0.5, 0.5, 0.5, 0.5});
  const auto identity = RepresentationFunction::identity(2);
  const auto series = sample_chain(iid, 100000, 5150);
  const auto est = iinf_hat(identity, series);
  CHECK(est.value < 0.01);
  CHECK(est.k_used == schedule_k(100000, 2));

  const auto constant = RepresentationFunction::constant(2, 1, 2);
  CHECK(iinf_hat(constant, series).value == doctest::Approx(0.0).epsilon(1e-12));

  const MarkovChainSpec cycle(2, {0.0, 1.0, 1.0, 0.0});
  const auto periodic = sample_chain(cycle, 4096, 99);
  CHECK(iinf_hat(identity, periodic).value == doctest::Approx(1.0).epsilon(5e-3));
}

TEST_CASE("binary entropy inverse") {
  CHECK(binary_entropy_inverse(1.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(binary_entropy_inverse(0.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(binary_entropy_inverse(0.468996) == doctest::Approx(0.1).epsilon(1e-5));
  CHECK_THROWS_AS(binary_entropy_inverse(1.5), ValidationError);
  CHECK_THROWS_AS(binary_entropy(-0.1), ValidationError);

  CounterRng rng(13, 0);
  double prev_x = -1.0;
  double prev_t = -1.0;
  std::vector<double> targets(50);
  for (auto& t : targets) t = rng.next_unit();
  std::sort(targets.begin(), targets.end());
  for (double t : targets) {
    const double x = binary_entropy_inverse(t);
    CHECK(binary_entropy(x) == doctest::Approx(t).epsilon(1e-10));
    if (prev_t >= 0.0) CHECK(x >= prev_x - 1e-15);  // monotone nondecreasing
    prev_x = x;
    prev_t = t;
  }
}

TEST_CASE("information estimates are nonnegative and capped by log2|Y|") {
  CounterRng rng(14, 0);
  for (int trial = 0; trial < 60; ++trial) {
    const std::uint32_t alphabet = 2 + static_cast<std::uint32_t>(rng.next_below(3));
    const auto s = random_symbols(20 + rng.next_below(300), alphabet, rng);
    const auto k = 1 + static_cast<std::uint32_t>(rng.next_below(3));
    if (s.size() <= k) continue;
    const auto est = ik_hat_symbols(s, alphabet, k);
    CHECK(est.value >= 0.0);
    CHECK(est.value <= std::log2(static_cast<double>(alphabet)) + 1e-12);
  }
}

TEST_CASE("pair information is reversal-invariant") {
  CounterRng rng(15, 0);
  for (int trial = 0; trial < 40; ++trial) {
    const std::uint32_t alphabet = 2 + static_cast<std::uint32_t>(rng.next_below(2));
    auto s = random_symbols(10 + rng.next_below(150), alphabet, rng);
    auto reversed = s;
    std::reverse(reversed.begin(), reversed.end());
    CHECK(ik_hat_symbols(s, alphabet, 1).value ==
          doctest::Approx(ik_hat_symbols(reversed, alphabet, 1).value).epsilon(1e-12));
  }
}

TEST_CASE("sparse-support warning") {
  // 19 blocks against 4^4 = 256 cells trips the support diagnostic.
  CounterRng rng(16, 0);
  const auto s = random_symbols(22, 4, rng);
  CHECK(ik_hat_symbols(s, 4, 3).support_warning);
  const auto dense = random_symbols(5000, 2, rng);
  CHECK_FALSE(ik_hat_symbols(dense, 2, 1).support_warning);
}

}  // TEST_SUITE
