#include "tsinfo/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace tsinfo {

namespace {

using nlohmann::json;

std::vector<double> probability_array(const json& j, const char* field, std::size_t expected) {
  if (!j.contains(field) || !j[field].is_array()) {
    throw ValidationError(std::string("io: missing or non-array field '") + field + "'");
  }
  std::vector<double> values;
  values.reserve(j[field].size());
  for (const auto& v : j[field]) {
    if (!v.is_number()) {
      throw ValidationError(std::string("io: field '") + field + "' must contain numbers");
    }
    values.push_back(v.get<double>());
  }
  if (expected != 0 && values.size() != expected) {
    throw ValidationError(std::string("io: field '") + field + "' has length " +
                          std::to_string(values.size()) + ", expected " +
                          std::to_string(expected));
  }
  return values;
}

std::uint32_t uint_field(const json& j, const char* field) {
  if (!j.contains(field) || !j[field].is_number_unsigned()) {
    throw ValidationError(std::string("io: missing or non-integer field '") + field + "'");
  }
  return j[field].get<std::uint32_t>();
}

bool looks_continuous(const std::string& token) {
  return token.find_first_of(".eE,") != std::string::npos;
}

}  // namespace

std::string format_number(double value) {
  if (value == 0.0) return "0";  // normalizes -0
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", value);
  return buf;
}

std::string format_count(std::uint64_t value) { return std::to_string(value); }

CsvBuilder::CsvBuilder(std::vector<std::string> header) : n_columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i > 0) text_ += ',';
    text_ += header[i];
  }
  text_ += '\n';
}

void CsvBuilder::add_row(std::vector<std::string> cells) {
  if (cells.size() != n_columns_) {
    throw ValidationError("io.CsvBuilder: row width does not match header");
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) text_ += ',';
    text_ += cells[i];
  }
  text_ += '\n';
}

std::string series_to_text(const ObservationSeries& series) {
  std::string out;
  const auto append_action = [&](std::size_t i) {
    if (series.has_actions()) {
      out += '\t';
      out += std::to_string(series.actions()[i]);
    }
    out += '\n';
  };
  if (series.is_discrete()) {
    const auto& states = series.discrete_states();
    for (std::size_t i = 0; i < states.size(); ++i) {
      out += std::to_string(states[i]);
      append_action(i);
    }
  } else {
    char buf[64];
    const auto& points = series.continuous_points();
    for (std::size_t i = 0; i < points.size(); ++i) {
      for (std::size_t d = 0; d < points[i].size(); ++d) {
        if (d > 0) out += ',';
        if (!std::isfinite(points[i][d])) {
          throw ValidationError("io.series_to_text: observations must be finite");
        }
        std::snprintf(buf, sizeof(buf), "%.17g", points[i][d]);
        std::string cell = buf;
        // Keep the cell recognizably continuous on re-read.
        if (cell.find_first_of(".eE") == std::string::npos) cell += ".0";
        out += cell;
      }
      append_action(i);
    }
  }
  return out;
}

ObservationSeries series_from_text(const std::string& text) {
  std::vector<std::uint32_t> states;
  std::vector<std::vector<double>> points;
  std::vector<std::uint32_t> actions;
  bool any_continuous = false, any_discrete = false;

  std::istringstream lines(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::string obs = line, action;
    if (const auto tab = line.find('\t'); tab != std::string::npos) {
      obs = line.substr(0, tab);
      action = line.substr(tab + 1);
    }
    try {
      if (looks_continuous(obs)) {
        any_continuous = true;
        std::vector<double> row;
        std::istringstream fields(obs);
        std::string field;
        while (std::getline(fields, field, ',')) row.push_back(std::stod(field));
        points.push_back(std::move(row));
      } else {
        any_discrete = true;
        if (obs.empty() || obs.find_first_not_of("0123456789") != std::string::npos) {
          throw std::invalid_argument("not an index");
        }
        states.push_back(static_cast<std::uint32_t>(std::stoul(obs)));
      }
      if (!action.empty()) {
        if (action.find_first_not_of("0123456789") != std::string::npos) {
          throw std::invalid_argument("not an action index");
        }
        actions.push_back(static_cast<std::uint32_t>(std::stoul(action)));
      }
    } catch (const ValidationError&) {
      throw;
    } catch (const std::exception&) {
      throw ValidationError("io.series_from_text: malformed line " + std::to_string(line_no) +
                            ": '" + line + "'");
    }
    if (!actions.empty() && actions.size() != states.size() + points.size()) {
      throw ValidationError("io.series_from_text: action column must cover every line");
    }
  }
  if (any_continuous && any_discrete) {
    throw ValidationError("io.series_from_text: mixed discrete and continuous observations");
  }
  auto series = any_continuous ? ObservationSeries::continuous(std::move(points))
                               : ObservationSeries::discrete(std::move(states));
  series.set_actions(std::move(actions));
  return series;
}

void write_series(const std::filesystem::path& path, const ObservationSeries& series) {
  write_text_file(path, series_to_text(series));
}

ObservationSeries read_series(const std::filesystem::path& path) {
  return series_from_text(read_text_file(path));
}

json to_json(const RepresentationFunction& f) {
  json j;
  j["alphabet_size"] = f.alphabet_size();
  if (f.is_lookup()) {
    j["type"] = "lookup_table";
    j["table"] = f.lookup().table;
  } else {
    j["type"] = "grid_quantizer";
    j["thresholds"] = f.quantizer().thresholds;
    j["cells"] = f.quantizer().cells;
  }
  return j;
}

RepresentationFunction representation_from_json(const json& j) {
  const std::uint32_t alphabet = uint_field(j, "alphabet_size");
  if (!j.contains("type") || !j["type"].is_string()) {
    throw ValidationError("io: representation function needs a 'type' tag");
  }
  const std::string type = j["type"].get<std::string>();
  if (type == "lookup_table") {
    LookupTable t;
    for (const auto& v : j.at("table")) t.table.push_back(v.get<Symbol>());
    return RepresentationFunction(std::move(t), alphabet);
  }
  if (type == "grid_quantizer") {
    GridQuantizer q;
    for (const auto& axis : j.at("thresholds")) {
      q.thresholds.push_back(axis.get<std::vector<double>>());
    }
    for (const auto& v : j.at("cells")) q.cells.push_back(v.get<Symbol>());
    return RepresentationFunction(std::move(q), alphabet);
  }
  throw ValidationError("io: unknown representation type '" + type + "'");
}

json to_json(const MarkovChainSpec& spec) {
  json j;
  j["n_states"] = spec.n_states();
  j["transition"] = spec.transition_matrix();
  return j;
}

MarkovChainSpec chain_from_json(const json& j) {
  const std::uint32_t n = uint_field(j, "n_states");
  return MarkovChainSpec(n, probability_array(j, "transition",
                                              static_cast<std::size_t>(n) * n));
}

json to_json(const MdpSpec& mdp) {
  json j;
  j["n_states"] = mdp.n_states();
  j["n_actions"] = mdp.n_actions();
  j["transition"] = mdp.transition_tensor();
  return j;
}

MdpSpec mdp_from_json(const json& j) {
  const std::uint32_t n = uint_field(j, "n_states");
  const std::uint32_t a = uint_field(j, "n_actions");
  return MdpSpec(n, a, probability_array(j, "transition",
                                         static_cast<std::size_t>(n) * a * n));
}

json to_json(const StationaryPolicy& policy) {
  json j;
  j["n_states"] = policy.n_states();
  j["n_actions"] = policy.n_actions();
  j["probs"] = policy.prob_matrix();
  return j;
}

StationaryPolicy policy_from_json(const json& j) {
  const std::uint32_t n = uint_field(j, "n_states");
  const std::uint32_t a = uint_field(j, "n_actions");
  return StationaryPolicy(n, a, probability_array(j, "probs",
                                                  static_cast<std::size_t>(n) * a));
}

json to_json(const IdealChainRecipe& recipe) {
  json j;
  j["label_transition"] = recipe.label_transition;
  j["preimage_sizes"] = recipe.preimage_sizes;
  j["emission_weights"] = recipe.emission_weights;
  return j;
}

IdealChainRecipe ideal_chain_recipe_from_json(const json& j) {
  IdealChainRecipe recipe;
  recipe.label_transition = probability_array(j, "label_transition", 0);
  for (const auto& v : j.at("preimage_sizes")) {
    recipe.preimage_sizes.push_back(v.get<std::uint32_t>());
  }
  for (const auto& row : j.at("emission_weights")) {
    recipe.emission_weights.push_back(row.get<std::vector<double>>());
  }
  recipe.validate();
  return recipe;
}

json to_json(const IdealMdpRecipe& recipe) {
  json j;
  j["label_transitions"] = recipe.label_transitions;
  j["preimage_sizes"] = recipe.preimage_sizes;
  j["emission_weights"] = recipe.emission_weights;
  return j;
}

IdealMdpRecipe ideal_mdp_recipe_from_json(const json& j) {
  IdealMdpRecipe recipe;
  for (const auto& t : j.at("label_transitions")) {
    recipe.label_transitions.push_back(t.get<std::vector<double>>());
  }
  for (const auto& v : j.at("preimage_sizes")) {
    recipe.preimage_sizes.push_back(v.get<std::uint32_t>());
  }
  for (const auto& row : j.at("emission_weights")) {
    recipe.emission_weights.push_back(row.get<std::vector<double>>());
  }
  recipe.validate();
  return recipe;
}

json to_json(const SelectionReport& report) {
  json j;
  j["best_index"] = report.best_index;
  j["k_used"] = report.k_used;
  j["n"] = report.n;
  j["tau"] = report.tau;
  j["seed"] = report.seed;
  j["best_score"] = report.scores[report.best_index].value;
  j["equivalence_class"] = report.equivalence_class;
  return j;
}

std::string selection_report_csv(const SelectionReport& report) {
  CsvBuilder csv({"index", "score", "k_used", "in_equivalence_class"});
  std::vector<bool> in_class(report.scores.size(), false);
  for (std::size_t i : report.equivalence_class) in_class[i] = true;
  for (std::size_t i = 0; i < report.scores.size(); ++i) {
    csv.add_row({format_count(i), format_number(report.scores[i].value),
                 format_count(report.scores[i].k_used), in_class[i] ? "1" : "0"});
  }
  return csv.text();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ValidationError("io: cannot open '" + path.string() + "' for writing");
  }
  out << text;
  if (!out.good()) {
    throw ValidationError("io: failed writing '" + path.string() + "'");
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ValidationError("io: cannot open '" + path.string() + "' for reading");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

json read_json_file(const std::filesystem::path& path) {
  try {
    return json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw ValidationError("io: '" + path.string() + "' is not valid JSON: " + e.what());
  }
}

}  // namespace tsinfo
