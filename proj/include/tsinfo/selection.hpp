#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "tsinfo/core.hpp"
#include "tsinfo/estimators.hpp"
#include "tsinfo/mdp.hpp"

namespace tsinfo {

/// Estimate at a fixed block memory.
struct FixedK {
  std::uint32_t k = 1;
};
/// Estimate at the sample-size-driven memory schedule.
struct ScheduleK {};

using EstimationMode = std::variant<FixedK, ScheduleK>;

/// Scores for every candidate, the maximizing index (smallest on ties), and
/// the indices whose score is within tau of the maximum.
struct SelectionReport {
  std::vector<InfoEstimate> scores;
  std::size_t best_index = 0;
  std::vector<std::size_t> equivalence_class;
  std::uint32_t k_used = 0;
  std::uint64_t n = 0;
  double tau = 0.0;
  std::uint64_t seed = 0;
};

/// Scores every candidate on the series and returns the maximizer of the
/// plug-in information estimate. Deterministic; ties break to the smallest
/// candidate index.
SelectionReport select_passive(const std::vector<RepresentationFunction>& family,
                               const ObservationSeries& series, const EstimationMode& mode,
                               double tau);

/// Samples a trajectory from the MDP under the uniform exploration policy,
/// then runs select_passive with k = 1 on the observation column. The MDP
/// must be weakly connected.
SelectionReport select_active(const MdpSpec& mdp,
                              const std::vector<RepresentationFunction>& family, std::uint64_t n,
                              std::uint64_t seed, double tau);

}  // namespace tsinfo
