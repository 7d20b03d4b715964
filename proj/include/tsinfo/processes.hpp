#pragma once

#include <cstdint>
#include <vector>

#include "tsinfo/core.hpp"
#include "tsinfo/mdp.hpp"
#include "tsinfo/oracle.hpp"
#include "tsinfo/rng.hpp"

namespace tsinfo {

/// Recipe for a chain that is conditionally independent given its labels:
/// a label-level transition matrix T, the preimage size of every label, and
/// strictly positive emission weights q(.|y) over each preimage. The full
/// chain is P(x'|x) = T(f(x), f(x')) * q(x'|f(x')).
struct IdealChainRecipe {
  std::vector<double> label_transition;  // |Y| x |Y|, row-major
  std::vector<std::uint32_t> preimage_sizes;
  std::vector<std::vector<double>> emission_weights;

  std::uint32_t alphabet_size() const {
    return static_cast<std::uint32_t>(preimage_sizes.size());
  }
  std::uint32_t n_states() const;
  void validate() const;
};

/// Certified geometric mixing rate of a generated chain. Reported as the
/// second-largest eigenvalue modulus of the transition matrix, clamped into
/// (0, 1); a surrogate, not a proof.
struct MixingProfile {
  double gamma = 0.0;
};

struct IdealChain {
  MarkovChainSpec spec;
  RepresentationFunction label_map;
  MixingProfile mixing;
};

/// Builds the chain of an IdealChainRecipe. The result passes
/// ci_check_markov with the returned label map, and the induced label
/// process has transition exactly T.
IdealChain build_ideal_chain(const IdealChainRecipe& recipe);

/// Per-action variant: each action carries its own label transition T_a
/// over a shared emission, P(x'|x,a) = T_a(f(x), f(x')) * q(x'|f(x')).
struct IdealMdpRecipe {
  std::vector<std::vector<double>> label_transitions;  // one |Y|^2 matrix per action
  std::vector<std::uint32_t> preimage_sizes;
  std::vector<std::vector<double>> emission_weights;

  std::uint32_t alphabet_size() const {
    return static_cast<std::uint32_t>(preimage_sizes.size());
  }
  std::uint32_t n_actions() const {
    return static_cast<std::uint32_t>(label_transitions.size());
  }
  void validate() const;
};

struct IdealMdp {
  MdpSpec spec;
  RepresentationFunction label_map;
};

IdealMdp build_ideal_mdp(const IdealMdpRecipe& recipe);

/// Stationary-start trajectory of the chain; deterministic in the seed.
ObservationSeries sample_chain(const MarkovChainSpec& spec, std::uint64_t n, std::uint64_t seed,
                               std::uint64_t burn_in = 0);

/// All |Y|^|X| lookup tables over a finite state space, in lexicographic
/// order (index 0 is the all-zero map). Guarded at 1e6 candidates.
std::vector<RepresentationFunction> enumerate_family(std::uint32_t n_states,
                                                     std::uint32_t alphabet_size);

/// Random generators used by experiments and the verification suites. All
/// draws come from the caller's stream; entries are bounded away from zero
/// so the generated objects are irreducible and aperiodic.
IdealChainRecipe random_ideal_recipe(std::uint32_t n_states, std::uint32_t alphabet_size,
                                     CounterRng& rng);
IdealMdpRecipe random_ideal_mdp_recipe(std::uint32_t n_states, std::uint32_t alphabet_size,
                                       std::uint32_t n_actions, CounterRng& rng);
MarkovChainSpec random_chain(std::uint32_t n_states, CounterRng& rng, double min_entry = 0.02);
StationaryPolicy random_stochastic_policy(std::uint32_t n_states, std::uint32_t n_actions,
                                          CounterRng& rng, double min_prob = 0.05);

}  // namespace tsinfo
