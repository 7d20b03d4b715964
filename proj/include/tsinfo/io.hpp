#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "tsinfo/bounds.hpp"
#include "tsinfo/core.hpp"
#include "tsinfo/mdp.hpp"
#include "tsinfo/oracle.hpp"
#include "tsinfo/processes.hpp"
#include "tsinfo/selection.hpp"

namespace tsinfo {

/// Formats one numeric cell with 6 significant decimal digits (the
/// underlying conversion rounds ties to even). Exact integers are written
/// without a decimal point.
std::string format_number(double value);
std::string format_count(std::uint64_t value);

/// Minimal CSV assembly: a header plus rows of preformatted cells, one
/// trailing newline, '\n' line endings.
class CsvBuilder {
 public:
  explicit CsvBuilder(std::vector<std::string> header);
  void add_row(std::vector<std::string> cells);
  const std::string& text() const { return text_; }

 private:
  std::size_t n_columns_;
  std::string text_;
};

// Series files: one observation per line; a single integer for discrete
// observations or comma-separated decimals for continuous ones; an optional
// tab-separated action index.
std::string series_to_text(const ObservationSeries& series);
ObservationSeries series_from_text(const std::string& text);
void write_series(const std::filesystem::path& path, const ObservationSeries& series);
ObservationSeries read_series(const std::filesystem::path& path);

// JSON serialization of the structured records.
nlohmann::json to_json(const RepresentationFunction& f);
nlohmann::json to_json(const MarkovChainSpec& spec);
nlohmann::json to_json(const MdpSpec& mdp);
nlohmann::json to_json(const StationaryPolicy& policy);
nlohmann::json to_json(const IdealChainRecipe& recipe);
nlohmann::json to_json(const IdealMdpRecipe& recipe);
nlohmann::json to_json(const SelectionReport& report);

RepresentationFunction representation_from_json(const nlohmann::json& j);
MarkovChainSpec chain_from_json(const nlohmann::json& j);
MdpSpec mdp_from_json(const nlohmann::json& j);
StationaryPolicy policy_from_json(const nlohmann::json& j);
IdealChainRecipe ideal_chain_recipe_from_json(const nlohmann::json& j);
IdealMdpRecipe ideal_mdp_recipe_from_json(const nlohmann::json& j);

/// Selection report as CSV rows (index, score, k_used, in_equivalence_class).
std::string selection_report_csv(const SelectionReport& report);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace tsinfo
