#include "tsinfo/selection.hpp"

#include <string>

namespace tsinfo {

SelectionReport select_passive(const std::vector<RepresentationFunction>& family,
                               const ObservationSeries& series, const EstimationMode& mode,
                               double tau) {
  if (family.empty()) {
    throw ValidationError("selection.select_passive: candidate family must not be empty");
  }
  if (tau < 0.0) {
    throw ValidationError("selection.select_passive: tolerance tau must be nonnegative");
  }

  SelectionReport report;
  report.n = series.size();
  report.tau = tau;
  report.seed = series.meta().seed;
  report.scores.reserve(family.size());

  for (const auto& candidate : family) {
    const auto symbols = apply_representation(candidate, series);
    if (std::holds_alternative<FixedK>(mode)) {
      report.scores.push_back(
          ik_hat_symbols(symbols, candidate.alphabet_size(), std::get<FixedK>(mode).k));
    } else {
      report.scores.push_back(iinf_hat_symbols(symbols, candidate.alphabet_size()));
    }
  }

  report.best_index = 0;
  for (std::size_t i = 1; i < report.scores.size(); ++i) {
    if (report.scores[i].value > report.scores[report.best_index].value) report.best_index = i;
  }
  report.k_used = report.scores[report.best_index].k_used;

  const double threshold = report.scores[report.best_index].value - tau;
  for (std::size_t i = 0; i < report.scores.size(); ++i) {
    if (report.scores[i].value >= threshold) report.equivalence_class.push_back(i);
  }
  return report;
}

SelectionReport select_active(const MdpSpec& mdp,
                              const std::vector<RepresentationFunction>& family, std::uint64_t n,
                              std::uint64_t seed, double tau) {
  const auto connectivity = check_weakly_connected(mdp);
  if (!connectivity.connected) {
    std::string detail;
    if (connectivity.witness) {
      detail = " (state " + std::to_string(connectivity.witness->second) +
               " is unreachable from state " + std::to_string(connectivity.witness->first) + ")";
    }
    throw ValidationError("selection.select_active: MDP is not weakly connected" + detail);
  }
  const auto policy = StationaryPolicy::uniform(mdp.n_states(), mdp.n_actions());
  const auto trajectory = sample_mdp(mdp, policy, n, seed);
  auto report = select_passive(family, trajectory, FixedK{1}, tau);
  report.seed = seed;
  return report;
}

}  // namespace tsinfo
