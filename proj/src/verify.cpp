#include "tsinfo/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "tsinfo/bounds.hpp"
#include "tsinfo/estimators.hpp"
#include "tsinfo/io.hpp"
#include "tsinfo/mdp.hpp"
#include "tsinfo/oracle.hpp"
#include "tsinfo/processes.hpp"
#include "tsinfo/selection.hpp"

namespace tsinfo::verify {

namespace {

std::string flag(bool ok) { return ok ? "1" : "0"; }

// Each suite draws from its own stream block so adding cases to one suite
// never perturbs another.
constexpr std::uint64_t kStreamIdealCi = 1000;
constexpr std::uint64_t kStreamMaximality = 2000;
constexpr std::uint64_t kStreamEstimator = 4000;
constexpr std::uint64_t kStreamInfoTv = 5000;
constexpr std::uint64_t kStreamRecovery = 6000;
constexpr std::uint64_t kStreamPolicy = 7000;
constexpr std::uint64_t kStreamActive = 8000;

SuiteResult suite_ideal_ci(std::uint64_t seed) {
  SuiteResult result{"ideal-ci", true, "", ""};
  CsvBuilder csv({"instance", "n_states", "alphabet_size", "gamma", "max_violation", "ok"});
  double worst = 0.0;
  int failures = 0;
  for (int i = 0; i < 500; ++i) {
    CounterRng rng(seed, kStreamIdealCi + i);
    const std::uint32_t alphabet = 2 + (i % 2);
    const std::uint32_t n_states =
        alphabet + static_cast<std::uint32_t>(rng.next_below(10 - alphabet));
    const auto recipe = random_ideal_recipe(n_states, alphabet, rng);
    const auto chain = build_ideal_chain(recipe);
    const auto check = ci_check_markov(chain.spec, chain.label_map, 1e-12);
    worst = std::max(worst, check.max_violation);
    if (!check.satisfied) ++failures;
    csv.add_row({format_count(i), format_count(n_states), format_count(alphabet),
                 format_number(chain.mixing.gamma), format_number(check.max_violation),
                 flag(check.satisfied)});
  }
  result.passed = failures == 0;
  result.detail = std::to_string(500 - failures) +
                  "/500 constructions pass the CI check at 1e-12; max violation " +
                  format_number(worst);
  result.artifact_csv = csv.text();
  return result;
}

struct MaximalityInstance {
  IdealChain chain;
  std::vector<RepresentationFunction> family;
};

MaximalityInstance maximality_instance(std::uint64_t seed, int i) {
  CounterRng rng(seed, kStreamMaximality + i);
  const std::uint32_t n_states = 2 + static_cast<std::uint32_t>(rng.next_below(5));
  const auto recipe = random_ideal_recipe(n_states, 2, rng);
  auto chain = build_ideal_chain(recipe);
  auto family = enumerate_family(n_states, 2);
  return {std::move(chain), std::move(family)};
}

SuiteResult suite_maximality(std::uint64_t seed) {
  SuiteResult result{"maximality", true, "", ""};
  CsvBuilder csv({"instance", "n_states", "n_candidates", "n_ci", "min_margin_non_ci",
                  "max_gap_ci", "ok"});
  int failures = 0;
  double global_min_margin = 1e300;
  for (int i = 0; i < 100; ++i) {
    auto inst = maximality_instance(seed, i);
    const Bits i1_f = exact_ik(inst.chain.spec, inst.chain.label_map, 1);
    bool ok = true;
    int n_ci = 0;
    double min_margin = 1e300, max_gap_ci = 0.0;
    for (const auto& g : inst.family) {
      const Bits i1_g = exact_ik(inst.chain.spec, g, 1);
      const bool ci = ci_check_markov(inst.chain.spec, g, 1e-9).satisfied;
      const bool close = std::abs(i1_f - i1_g) <= 1e-9;
      if (i1_g > i1_f + 1e-12) ok = false;   // maximality
      if (close != ci) ok = false;           // equality exactly on CI maps
      if (ci) {
        ++n_ci;
        max_gap_ci = std::max(max_gap_ci, std::abs(i1_f - i1_g));
      } else {
        min_margin = std::min(min_margin, i1_f - i1_g);
      }
    }
    global_min_margin = std::min(global_min_margin, min_margin);
    if (!ok) ++failures;
    csv.add_row({format_count(i), format_count(inst.chain.spec.n_states()),
                 format_count(inst.family.size()), format_count(n_ci),
                 format_number(min_margin), format_number(max_gap_ci), flag(ok)});
  }
  result.passed = failures == 0;
  result.detail = std::to_string(100 - failures) +
                  "/100 instances: CI maps attain the exact I_1 maximum, equality holds exactly "
                  "on CI maps; smallest non-CI margin " +
                  format_number(global_min_margin);
  result.artifact_csv = csv.text();
  return result;
}

SuiteResult suite_markov_collapse(std::uint64_t seed) {
  SuiteResult result{"markov-collapse", true, "", ""};
  CsvBuilder csv({"instance", "max_collapse_dev", "worst_ik_step", "worst_hk_step", "ok"});
  int failures = 0;
  double worst_dev = 0.0;
  for (int i = 0; i < 100; ++i) {
    auto inst = maximality_instance(seed, i);  // same instances as the maximality suite
    bool ok = true;
    const Bits i1_f = exact_ik(inst.chain.spec, inst.chain.label_map, 1);
    double collapse_dev = 0.0;
    for (std::uint32_t k = 1; k <= 5; ++k) {
      collapse_dev = std::max(collapse_dev,
                              std::abs(exact_ik(inst.chain.spec, inst.chain.label_map, k) - i1_f));
    }
    if (collapse_dev > 1e-9) ok = false;
    worst_dev = std::max(worst_dev, collapse_dev);

    // For every candidate map: exact I_k nondecreasing, exact h_k
    // nonincreasing in k.
    double worst_ik_step = 0.0, worst_hk_step = 0.0;
    for (const auto& g : inst.family) {
      Bits prev_ik = exact_ik(inst.chain.spec, g, 1);
      Bits prev_hk = exact_hk(inst.chain.spec, g, 1);
      for (std::uint32_t k = 2; k <= 5; ++k) {
        const Bits cur_ik = exact_ik(inst.chain.spec, g, k);
        const Bits cur_hk = exact_hk(inst.chain.spec, g, k);
        worst_ik_step = std::max(worst_ik_step, prev_ik - cur_ik);
        worst_hk_step = std::max(worst_hk_step, cur_hk - prev_hk);
        prev_ik = cur_ik;
        prev_hk = cur_hk;
      }
    }
    if (worst_ik_step > 1e-12 || worst_hk_step > 1e-12) ok = false;
    if (!ok) ++failures;
    csv.add_row({format_count(i), format_number(collapse_dev), format_number(worst_ik_step),
                 format_number(worst_hk_step), flag(ok)});
  }
  result.passed = failures == 0;
  result.detail = std::to_string(100 - failures) +
                  "/100 instances: I_k collapses to I_1 within 1e-9 for CI maps (worst " +
                  format_number(worst_dev) + "); I_k/h_k monotone in k for every candidate";
  result.artifact_csv = csv.text();
  return result;
}

SuiteResult suite_estimator_consistency(std::uint64_t seed) {
  SuiteResult result{"estimator-consistency", true, "", ""};
  const MarkovChainSpec chain(2, {0.9, 0.1, 0.1, 0.9});
  const auto identity = RepresentationFunction::identity(2);
  const Bits exact = exact_ik(chain, identity, 1);
  const Bits reference = 1.0 - binary_entropy(0.1);
  const bool exact_ok = std::abs(exact - reference) <= 1e-12;

  CsvBuilder csv({"n", "seed_index", "estimate", "abs_error", "within"});
  bool passed = exact_ok;
  std::string counts;
  const struct {
    std::uint64_t n;
    double tol;
  } stages[] = {{100000, 0.02}, {1000000, 0.005}};
  for (const auto& stage : stages) {
    int within = 0;
    for (int s = 0; s < 10; ++s) {
      const std::uint64_t sample_seed = CounterRng(seed, kStreamEstimator + s).next_u64();
      const auto series = sample_chain(chain, stage.n, sample_seed);
      const auto est = ik_hat(identity, series, 1);
      const double err = std::abs(est.value - exact);
      const bool ok = err <= stage.tol;
      if (ok) ++within;
      csv.add_row({format_count(stage.n), format_count(s), format_number(est.value),
                   format_number(err), flag(ok)});
    }
    if (within < 9) passed = false;
    counts += (counts.empty() ? "" : ", ") + std::to_string(within) + "/10 within " +
              format_number(stage.tol) + " at n=" + format_count(stage.n);
  }
  result.passed = passed;
  result.detail = "exact I_1 = " + format_number(exact) + " (matches 1 - h(0.1)); " + counts;
  result.artifact_csv = csv.text();
  return result;
}

SuiteResult suite_info_tv_bound(std::uint64_t seed) {
  SuiteResult result{"info-tv-bound", true, "", ""};
  CsvBuilder csv({"case", "k", "alpha", "abs_error", "bound", "ok"});
  int violations = 0, cases = 0;
  double min_slack = 1e300;
  for (int r = 0; r < 12; ++r) {
    CounterRng rng(seed, kStreamInfoTv + r);
    const std::uint32_t n_states = 3 + static_cast<std::uint32_t>(rng.next_below(4));
    const auto chain = build_ideal_chain(random_ideal_recipe(n_states, 2, rng));

    // A second, generally non-CI candidate map alongside the label map.
    LookupTable other;
    other.table.resize(n_states);
    for (std::uint32_t x = 0; x < n_states; ++x) {
      other.table[x] = static_cast<Symbol>(rng.next_below(2));
    }
    const RepresentationFunction g(std::move(other), 2);

    for (std::uint32_t k = 1; k <= 3; ++k) {
      for (int rep = 0; rep < 3; ++rep) {
        const std::uint64_t sample_seed = rng.next_u64();
        const auto series = sample_chain(chain.spec, 20000, sample_seed);
        for (const RepresentationFunction* f : {&chain.label_map, &g}) {
          const auto symbols = apply_representation(*f, series);
          const auto empirical = collect_blocks(symbols, k, 2);
          const auto exact = exact_block_distribution(chain.spec, *f, k);
          const double alpha = block_total_variation(exact, empirical);
          const double err =
              std::abs(exact_ik(chain.spec, *f, k) - ik_hat_symbols(symbols, 2, k).value);
          const auto bound = info_tv_bound(k, 2, alpha);
          const bool ok = err <= bound.bits;
          if (!ok) ++violations;
          min_slack = std::min(min_slack, bound.bits - err);
          csv.add_row({format_count(cases++), format_count(k), format_number(alpha),
                       format_number(err), format_number(bound.bits), flag(ok)});
        }
      }
    }
  }
  result.passed = violations == 0;
  result.detail = std::to_string(cases - violations) + "/" + std::to_string(cases) +
                  " sampled estimates inside the information/total-variation bound; min slack " +
                  format_number(min_slack);
  result.artifact_csv = csv.text();
  return result;
}

IdealChainRecipe recovery_recipe() {
  IdealChainRecipe recipe;
  recipe.label_transition = {0.9, 0.1, 0.1, 0.9};
  recipe.preimage_sizes = {2, 2};
  recipe.emission_weights = {{0.5, 0.5}, {0.5, 0.5}};
  return recipe;
}

SuiteResult suite_recovery(std::uint64_t seed) {
  SuiteResult result{"recovery", true, "", ""};
  const auto chain = build_ideal_chain(recovery_recipe());
  const auto family = enumerate_family(4, 2);

  CsvBuilder csv({"seed_index", "best_index", "best_score", "ci_ok"});
  int successes = 0;
  for (int s = 0; s < 20; ++s) {
    const std::uint64_t sample_seed = CounterRng(seed, kStreamRecovery + s).next_u64();
    const auto series = sample_chain(chain.spec, 100000, sample_seed);
    const auto report = select_passive(family, series, FixedK{1}, 1e-3);
    const bool ci_ok =
        ci_check_markov(chain.spec, family[report.best_index], 1e-9).satisfied;
    if (ci_ok) ++successes;
    csv.add_row({format_count(s), format_count(report.best_index),
                 format_number(report.scores[report.best_index].value), flag(ci_ok)});
  }
  result.passed = successes >= 19;
  result.detail = std::to_string(successes) +
                  "/20 seeds select a CI-satisfying map from the full 16-map family at n=1e5";
  result.artifact_csv = csv.text();
  return result;
}

SuiteResult suite_policy_invariance(std::uint64_t seed) {
  SuiteResult result{"policy-invariance", true, "", ""};
  CsvBuilder csv({"mdp", "n_states", "n_pairs", "n_candidates", "disagreements"});
  int total_disagreements = 0;
  for (int i = 0; i < 50; ++i) {
    CounterRng rng(seed, kStreamPolicy + i);
    const std::uint32_t n_states = 2 + static_cast<std::uint32_t>(rng.next_below(5));
    const auto ideal = build_ideal_mdp(random_ideal_mdp_recipe(n_states, 2, 2, rng));
    const auto family = enumerate_family(n_states, 2);

    int disagreements = 0;
    for (int pair = 0; pair < 20; ++pair) {
      const auto pi1 = random_stochastic_policy(n_states, 2, rng);
      const auto pi2 = random_stochastic_policy(n_states, 2, rng);
      for (const auto& g : family) {
        const bool v1 = ci_check_under_policy(ideal.spec, pi1, g, 1e-9).satisfied;
        const bool v2 = ci_check_under_policy(ideal.spec, pi2, g, 1e-9).satisfied;
        if (v1 != v2) ++disagreements;
      }
    }
    total_disagreements += disagreements;
    csv.add_row({format_count(i), format_count(n_states), format_count(20),
                 format_count(family.size()), format_count(disagreements)});
  }
  result.passed = total_disagreements == 0;
  result.detail = std::to_string(total_disagreements) +
                  " verdict disagreements across 50 MDPs x 20 stochastic policy pairs x full "
                  "candidate families";
  result.artifact_csv = csv.text();
  return result;
}

IdealMdpRecipe active_recipe() {
  IdealMdpRecipe recipe;
  recipe.label_transitions = {{0.95, 0.05, 0.1, 0.9}, {0.85, 0.15, 0.3, 0.7}};
  recipe.preimage_sizes = {2, 2};
  recipe.emission_weights = {{0.5, 0.5}, {0.5, 0.5}};
  return recipe;
}

SuiteResult suite_active_selection(std::uint64_t seed) {
  SuiteResult result{"active-selection", true, "", ""};
  const auto ideal = build_ideal_mdp(active_recipe());
  const auto family = enumerate_family(4, 2);

  CsvBuilder csv({"seed_index", "best_index", "ci_ok_heldout"});
  int successes = 0;
  for (int s = 0; s < 20; ++s) {
    CounterRng rng(seed, kStreamActive + s);
    const std::uint64_t sample_seed = rng.next_u64();
    const auto report = select_active(ideal.spec, family, 100000, sample_seed, 1e-3);
    const auto heldout = random_stochastic_policy(4, 2, rng);
    const bool ci_ok =
        ci_check_under_policy(ideal.spec, heldout, family[report.best_index], 1e-9).satisfied;
    if (ci_ok) ++successes;
    csv.add_row({format_count(s), format_count(report.best_index), flag(ci_ok)});
  }
  result.passed = successes >= 19;
  result.detail = std::to_string(successes) +
                  "/20 seeds: the map selected under the uniform exploration policy is "
                  "CI-satisfying under a held-out stochastic policy";
  result.artifact_csv = csv.text();
  return result;
}

SuiteResult suite_bound_arithmetic(std::uint64_t seed) {
  (void)seed;  // purely arithmetic checks
  SuiteResult result{"bound-arithmetic", true, "", ""};
  CsvBuilder csv({"check", "value", "reference", "ok"});
  bool passed = true;

  // Spot value of the geometric-mixing bound.
  {
    const double value = mixing_deviation_bound(1, 0.1, 10000, 0.9);
    const double reference = 7.0601e4 + 0.2656;
    const bool ok = std::abs(value - reference) <= 0.001 * reference;
    passed = passed && ok;
    csv.add_row({"mixing_bound_spot", format_number(value), format_number(reference), flag(ok)});
  }

  // Direction scans of the composite bound over a parameter grid. The
  // in-n direction applies on the monotone tail only.
  const std::vector<std::uint32_t> ds = {1, 2};
  const std::vector<double> epsilons = {0.5, 1.0, 2.0};
  const std::vector<std::uint32_t> ks = {1, 2, 3};
  const std::vector<std::uint32_t> alphabets = {2, 3, 4};
  const std::vector<double> gammas = {0.5, 0.9, 0.99};
  const std::vector<std::uint64_t> ns = {1000, 10000, 100000, 1000000};

  std::uint64_t comparisons = 0, violations = 0;
  auto check_direction = [&](double lo, double hi, bool nondecreasing) {
    ++comparisons;
    const bool ok = nondecreasing ? hi >= lo - 1e-12 * std::max(1.0, std::abs(lo))
                                  : hi <= lo + 1e-12 * std::max(1.0, std::abs(lo));
    if (!ok) ++violations;
  };
  for (std::uint32_t d : ds) {
    for (double eps : epsilons) {
      for (std::uint32_t k : ks) {
        for (std::uint32_t a : alphabets) {
          for (double gamma : gammas) {
            BoundParams base{d, eps, 0, gamma, k, a};
            for (std::uint64_t n : ns) {
              base.n = n;
              const double v = ik_deviation_bound(base);
              if (!(v >= 0.0)) ++violations;
              BoundParams p = base;
              p.epsilon = eps * 2.0;
              check_direction(v, ik_deviation_bound(p), false);
              p = base;
              p.d = d + 1;
              check_direction(v, ik_deviation_bound(p), true);
              p = base;
              p.k = k + 1;
              check_direction(v, ik_deviation_bound(p), true);
              p = base;
              p.alphabet_size = a + 1;
              check_direction(v, ik_deviation_bound(p), true);
              p = base;
              p.gamma = gamma + 0.5 * (1.0 - gamma);
              check_direction(v, ik_deviation_bound(p), true);
            }
            // In-n direction past the reported crossover; doubling must
            // stay within the u64 range.
            const std::uint64_t crossover = ik_deviation_crossover_n(base);
            if (crossover < (std::uint64_t{1} << 59)) {
              BoundParams p = base;
              p.n = crossover;
              double prev = ik_deviation_bound(p);
              for (int step = 0; step < 3; ++step) {
                p.n *= 2;
                const double cur = ik_deviation_bound(p);
                check_direction(prev, cur, false);
                prev = cur;
              }
            }
          }
        }
      }
    }
  }
  {
    const bool ok = violations == 0;
    passed = passed && ok;
    csv.add_row({"direction_scans", format_count(comparisons - violations),
                 format_count(comparisons), flag(ok)});
  }

  // A configuration whose bound actually reaches below 1 within the search
  // cap, plus the search postcondition around the returned n.
  {
    BoundParams wide{1, 6.0, 0, 0.9, 1, 2};
    const auto needed = required_sample_size(wide, 0.5);
    bool ok = needed.has_value();
    if (ok) {
      BoundParams at = wide;
      at.n = *needed;
      const double v = ik_deviation_bound(at);
      ok = v <= 0.5 && v < 1.0;
      if (*needed > ik_deviation_crossover_n(wide)) {
        at.n = *needed - 1;
        ok = ok && ik_deviation_bound(at) > 0.5;
      }
      csv.add_row({"required_n_attainable", format_count(*needed), format_number(v), flag(ok)});
    } else {
      csv.add_row({"required_n_attainable", "none", "0.5", "0"});
    }
    passed = passed && ok;
  }

  // With tighter deviation targets the threshold lies beyond the cap and
  // the search reports that honestly.
  {
    BoundParams narrow{1, 0.5, 0, 0.5, 1, 2};
    const auto needed = required_sample_size(narrow, 0.5);
    const bool ok = !needed.has_value();
    passed = passed && ok;
    csv.add_row({"required_n_capped", needed ? format_count(*needed) : "none", "none", flag(ok)});
  }

  result.passed = passed;
  result.detail = "mixing-bound spot value within 0.1%; " + format_count(comparisons) +
                  " direction comparisons with " + format_count(violations) + " violations";
  result.artifact_csv = csv.text();
  return result;
}

using SuiteFn = SuiteResult (*)(std::uint64_t);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> suites = {
      {"ideal-ci", suite_ideal_ci},
      {"maximality", suite_maximality},
      {"markov-collapse", suite_markov_collapse},
      {"estimator-consistency", suite_estimator_consistency},
      {"info-tv-bound", suite_info_tv_bound},
      {"recovery", suite_recovery},
      {"policy-invariance", suite_policy_invariance},
      {"active-selection", suite_active_selection},
      {"bound-arithmetic", suite_bound_arithmetic},
  };
  return suites;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : registry()) out.push_back(name);
    return out;
  }();
  return names;
}

SuiteResult run_suite(const std::string& name, std::uint64_t seed) {
  for (const auto& [suite_name, fn] : registry()) {
    if (suite_name == name) return fn(seed);
  }
  throw ValidationError("verify: unknown suite '" + name + "'");
}

std::vector<SuiteResult> run_all(std::uint64_t seed) {
  std::vector<SuiteResult> results;
  results.reserve(registry().size());
  for (const auto& [name, fn] : registry()) results.push_back(fn(seed));
  return results;
}

}  // namespace tsinfo::verify
