#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "tsinfo/bounds.hpp"
#include "tsinfo/estimators.hpp"
#include "tsinfo/io.hpp"
#include "tsinfo/mdp.hpp"
#include "tsinfo/oracle.hpp"
#include "tsinfo/processes.hpp"
#include "tsinfo/rng.hpp"
#include "tsinfo/selection.hpp"
#include "tsinfo/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace tsinfo;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::vector<std::uint64_t> seeds;
  std::optional<std::uint32_t> k;
  bool schedule = false;
  std::optional<double> tau;
  std::vector<std::string> suites;
};

json load_config(const CommonArgs& args) {
  if (args.config_path.empty()) {
    throw ValidationError("cli: --config is required for this subcommand");
  }
  return read_json_file(args.config_path);
}

fs::path ensure_out_dir(const CommonArgs& args) {
  if (args.out_dir.empty()) {
    throw ValidationError("cli: --out is required for this subcommand");
  }
  fs::path dir(args.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw ValidationError("cli: cannot create output directory '" + args.out_dir + "'");
  }
  return dir;
}

std::uint64_t config_u64(const json& j, const char* field, std::uint64_t fallback) {
  if (!j.contains(field)) return fallback;
  if (!j[field].is_number_unsigned()) {
    throw ValidationError(std::string("cli: field '") + field + "' must be a nonnegative integer");
  }
  return j[field].get<std::uint64_t>();
}

double config_double(const json& j, const char* field, double fallback) {
  if (!j.contains(field)) return fallback;
  if (!j[field].is_number()) {
    throw ValidationError(std::string("cli: field '") + field + "' must be a number");
  }
  return j[field].get<double>();
}

std::string config_string(const json& j, const char* field) {
  if (!j.contains(field) || !j[field].is_string()) {
    throw ValidationError(std::string("cli: missing string field '") + field + "'");
  }
  return j[field].get<std::string>();
}

std::vector<std::uint64_t> gather_seeds(const CommonArgs& args, const json& config) {
  std::vector<std::uint64_t> seeds = args.seeds;
  if (seeds.empty() && config.contains("seeds")) {
    for (const auto& s : config["seeds"]) {
      if (!s.is_number_unsigned()) {
        throw ValidationError("cli: 'seeds' must hold nonnegative integers");
      }
      seeds.push_back(s.get<std::uint64_t>());
    }
  }
  if (seeds.empty()) {
    throw ValidationError("cli: at least one seed is required (--seed or config 'seeds')");
  }
  return seeds;
}

std::vector<RepresentationFunction> load_family(const json& config) {
  if (!config.contains("family")) {
    throw ValidationError("cli: config needs a 'family' object");
  }
  const json& fam = config["family"];
  const std::string type = config_string(fam, "type");
  std::vector<RepresentationFunction> family;
  if (type == "enumerate") {
    return enumerate_family(static_cast<std::uint32_t>(config_u64(fam, "n_states", 0)),
                            static_cast<std::uint32_t>(config_u64(fam, "alphabet_size", 0)));
  }
  if (type == "explicit") {
    if (!fam.contains("functions") || !fam["functions"].is_array()) {
      throw ValidationError("cli: explicit family needs a 'functions' array");
    }
    for (const auto& j : fam["functions"]) family.push_back(representation_from_json(j));
    return family;
  }
  if (type == "files") {
    if (!fam.contains("paths") || !fam["paths"].is_array()) {
      throw ValidationError("cli: file-based family needs a 'paths' array");
    }
    for (const auto& p : fam["paths"]) {
      family.push_back(representation_from_json(read_json_file(p.get<std::string>())));
    }
    return family;
  }
  throw ValidationError("cli: unknown family type '" + type + "'");
}

EstimationMode resolve_mode(const CommonArgs& args, const json& config) {
  if (args.schedule) return ScheduleK{};
  if (args.k) return FixedK{*args.k};
  if (config.contains("schedule") && config["schedule"].is_boolean() &&
      config["schedule"].get<bool>()) {
    return ScheduleK{};
  }
  if (config.contains("k")) {
    return FixedK{static_cast<std::uint32_t>(config_u64(config, "k", 1))};
  }
  return FixedK{1};
}

int cmd_gen(const CommonArgs& args) {
  const json config = load_config(args);
  const fs::path out = ensure_out_dir(args);
  const std::string kind = config_string(config, "kind");
  const std::uint64_t seed =
      args.seeds.empty() ? config_u64(config, "seed", 0) : args.seeds.front();

  if (kind == "ideal-chain") {
    const auto recipe = ideal_chain_recipe_from_json(config.at("recipe"));
    const auto chain = build_ideal_chain(recipe);
    write_json_file(out / "chain.json", to_json(chain.spec));
    write_json_file(out / "f.json", to_json(chain.label_map));
    write_json_file(out / "mixing.json", json{{"gamma", chain.mixing.gamma}});
    return 0;
  }
  if (kind == "random-ideal-chain") {
    CounterRng rng(seed, 0);
    const auto recipe = random_ideal_recipe(
        static_cast<std::uint32_t>(config_u64(config, "n_states", 4)),
        static_cast<std::uint32_t>(config_u64(config, "alphabet_size", 2)), rng);
    const auto chain = build_ideal_chain(recipe);
    write_json_file(out / "recipe.json", to_json(recipe));
    write_json_file(out / "chain.json", to_json(chain.spec));
    write_json_file(out / "f.json", to_json(chain.label_map));
    write_json_file(out / "mixing.json", json{{"gamma", chain.mixing.gamma}});
    return 0;
  }
  if (kind == "ideal-mdp") {
    const auto recipe = ideal_mdp_recipe_from_json(config.at("recipe"));
    const auto ideal = build_ideal_mdp(recipe);
    write_json_file(out / "mdp.json", to_json(ideal.spec));
    write_json_file(out / "f.json", to_json(ideal.label_map));
    return 0;
  }
  if (kind == "random-chain") {
    CounterRng rng(seed, 0);
    const auto chain = random_chain(
        static_cast<std::uint32_t>(config_u64(config, "n_states", 4)), rng,
        config_double(config, "min_entry", 0.02));
    write_json_file(out / "chain.json", to_json(chain));
    return 0;
  }
  throw ValidationError("cli: unknown gen kind '" + kind + "'");
}

int cmd_sample(const CommonArgs& args) {
  const json config = load_config(args);
  const fs::path out = ensure_out_dir(args);
  const auto seeds = gather_seeds(args, config);
  const std::uint64_t n = config_u64(config, "n", 0);
  const std::uint64_t burn_in = config_u64(config, "burn_in", 0);
  if (n == 0) throw ValidationError("cli: sample needs n >= 1");

  if (config.contains("mdp")) {
    const auto mdp = mdp_from_json(read_json_file(config_string(config, "mdp")));
    const auto policy = config.contains("policy")
                            ? policy_from_json(read_json_file(config_string(config, "policy")))
                            : StationaryPolicy::uniform(mdp.n_states(), mdp.n_actions());
    for (std::uint64_t seed : seeds) {
      write_series(out / ("series_" + std::to_string(seed) + ".tsv"),
                   sample_mdp(mdp, policy, n, seed, burn_in));
    }
    return 0;
  }
  const auto chain = chain_from_json(read_json_file(config_string(config, "chain")));
  for (std::uint64_t seed : seeds) {
    write_series(out / ("series_" + std::to_string(seed) + ".tsv"),
                 sample_chain(chain, n, seed, burn_in));
  }
  return 0;
}

int cmd_estimate(const CommonArgs& args) {
  const json config = load_config(args);
  const fs::path out = ensure_out_dir(args);
  const auto series = read_series(config_string(config, "series"));
  const auto family = load_family(config);
  const auto mode = resolve_mode(args, config);

  CsvBuilder csv({"index", "score", "k_used", "n_effective", "support_warning"});
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto symbols = apply_representation(family[i], series);
    const InfoEstimate est =
        std::holds_alternative<FixedK>(mode)
            ? ik_hat_symbols(symbols, family[i].alphabet_size(), std::get<FixedK>(mode).k)
            : iinf_hat_symbols(symbols, family[i].alphabet_size());
    csv.add_row({format_count(i), format_number(est.value), format_count(est.k_used),
                 format_count(est.n_effective), est.support_warning ? "1" : "0"});
  }
  write_text_file(out / "scores.csv", csv.text());
  return 0;
}

int cmd_select(const CommonArgs& args) {
  const json config = load_config(args);
  const fs::path out = ensure_out_dir(args);
  const auto series = read_series(config_string(config, "series"));
  const auto family = load_family(config);
  const auto mode = resolve_mode(args, config);
  const double tau = args.tau ? *args.tau : config_double(config, "tau", 1e-3);

  const auto report = select_passive(family, series, mode, tau);
  write_text_file(out / "report.csv", selection_report_csv(report));
  write_json_file(out / "report.json", to_json(report));
  return 0;
}

int cmd_select_active(const CommonArgs& args) {
  const json config = load_config(args);
  const fs::path out = ensure_out_dir(args);
  const auto mdp = mdp_from_json(read_json_file(config_string(config, "mdp")));
  const auto family = load_family(config);
  const std::uint64_t n = config_u64(config, "n", 0);
  if (n == 0) throw ValidationError("cli: select-active needs n >= 1");
  const double tau = args.tau ? *args.tau : config_double(config, "tau", 1e-3);
  const auto seeds = gather_seeds(args, config);

  for (std::uint64_t seed : seeds) {
    const auto report = select_active(mdp, family, n, seed, tau);
    write_text_file(out / ("report_" + std::to_string(seed) + ".csv"),
                    selection_report_csv(report));
    write_json_file(out / ("report_" + std::to_string(seed) + ".json"), to_json(report));
  }
  return 0;
}

int cmd_oracle(const CommonArgs& args) {
  const json config = load_config(args);
  const fs::path out = ensure_out_dir(args);
  const auto chain = chain_from_json(read_json_file(config_string(config, "chain")));
  const auto f = representation_from_json(read_json_file(config_string(config, "f")));
  const auto k_max = static_cast<std::uint32_t>(config_u64(config, "k_max", 5));
  const double tol = config_double(config, "tol", 1e-9);
  const auto window = static_cast<std::uint32_t>(config_u64(config, "window", 1));
  if (k_max == 0) throw ValidationError("cli: oracle needs k_max >= 1");

  CsvBuilder csv({"k", "exact_ik", "exact_hk", "sandwich_lower", "sandwich_upper"});
  for (std::uint32_t k = 1; k <= k_max; ++k) {
    const auto sandwich = entropy_rate_sandwich(chain, f, k);
    csv.add_row({format_count(k), format_number(exact_ik(chain, f, k)),
                 format_number(exact_hk(chain, f, k)), format_number(sandwich.lower),
                 format_number(sandwich.upper)});
  }
  write_text_file(out / "oracle.csv", csv.text());

  const auto pi = stationary_distribution(chain);
  const auto ci = ci_check_markov(chain, f, tol, window);
  json summary;
  summary["stationary"] = pi;
  summary["exact_h0"] = exact_h0(chain, f);
  summary["ci_satisfied"] = ci.satisfied;
  summary["ci_max_violation"] = ci.max_violation;
  summary["tol"] = tol;
  summary["window"] = window;
  write_json_file(out / "oracle.json", summary);
  return 0;
}

int cmd_bound(const CommonArgs& args) {
  const json config = load_config(args);
  const fs::path out = ensure_out_dir(args);
  if (!config.contains("grid")) throw ValidationError("cli: bound needs a 'grid' object");
  const json& grid = config["grid"];

  auto axis_u32 = [&](const char* field) {
    std::vector<std::uint32_t> v;
    for (const auto& x : grid.at(field)) v.push_back(x.get<std::uint32_t>());
    if (v.empty()) throw ValidationError(std::string("cli: empty grid axis '") + field + "'");
    return v;
  };
  auto axis_u64 = [&](const char* field) {
    std::vector<std::uint64_t> v;
    for (const auto& x : grid.at(field)) v.push_back(x.get<std::uint64_t>());
    if (v.empty()) throw ValidationError(std::string("cli: empty grid axis '") + field + "'");
    return v;
  };
  auto axis_double = [&](const char* field) {
    std::vector<double> v;
    for (const auto& x : grid.at(field)) v.push_back(x.get<double>());
    if (v.empty()) throw ValidationError(std::string("cli: empty grid axis '") + field + "'");
    return v;
  };

  const auto ds = axis_u32("d");
  const auto epsilons = axis_double("epsilon");
  const auto ns = axis_u64("n");
  const auto gammas = axis_double("gamma");
  const auto ks = axis_u32("k");
  const auto alphabets = axis_u32("alphabet_size");
  const bool with_required = config.contains("required_target");
  const double target = config_double(config, "required_target", 0.05);

  std::vector<std::string> header = {"d",     "epsilon", "n",        "gamma",
                                     "k",     "alphabet_size", "mixing_bound", "ik_bound",
                                     "vacuous"};
  if (with_required) header.push_back("required_n");
  CsvBuilder csv(header);
  for (std::uint32_t d : ds) {
    for (double eps : epsilons) {
      for (std::uint64_t n : ns) {
        for (double gamma : gammas) {
          for (std::uint32_t k : ks) {
            for (std::uint32_t a : alphabets) {
              const BoundParams params{d, eps, n, gamma, k, a};
              const double mixing = mixing_deviation_bound(d, eps, n, gamma);
              const double ik = ik_deviation_bound(params);
              std::vector<std::string> row = {
                  format_count(d), format_number(eps),   format_count(n),
                  format_number(gamma), format_count(k), format_count(a),
                  format_number(mixing), format_number(ik), ik > 1.0 ? "1" : "0"};
              if (with_required) {
                const auto needed = required_sample_size(params, target);
                row.push_back(needed ? format_count(*needed) : "unattainable-at-cap");
              }
              csv.add_row(std::move(row));
            }
          }
        }
      }
    }
  }
  write_text_file(out / "bounds.csv", csv.text());
  return 0;
}

int cmd_verify(const CommonArgs& args) {
  const std::uint64_t seed = args.seeds.empty() ? 0 : args.seeds.front();
  std::vector<std::string> suites = args.suites;
  if (suites.empty()) suites = tsinfo::verify::suite_names();

  bool all_passed = true;
  CsvBuilder summary({"suite", "passed", "detail"});
  std::vector<std::pair<std::string, std::string>> artifacts;
  for (const auto& name : suites) {
    const auto result = tsinfo::verify::run_suite(name, seed);
    all_passed = all_passed && result.passed;
    std::cout << (result.passed ? "[PASS] " : "[FAIL] ") << result.name << ": " << result.detail
              << "\n";
    summary.add_row({result.name, result.passed ? "1" : "0", "\"" + result.detail + "\""});
    artifacts.emplace_back(result.name + ".csv", result.artifact_csv);
  }
  if (!args.out_dir.empty()) {
    const fs::path out = ensure_out_dir(args);
    for (const auto& [name, text] : artifacts) write_text_file(out / name, text);
    write_text_file(out / "summary.csv", summary.text());
  }
  return all_passed ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Representation selection by time-series information: generators, estimators, "
               "exact oracles, concentration bounds and verification suites"};
  app.require_subcommand(1);

  CommonArgs args;
  const auto add_common = [&](CLI::App* sub, bool with_mode) {
    sub->add_option("--config", args.config_path, "JSON experiment configuration");
    sub->add_option("--out", args.out_dir, "output directory");
    sub->add_option("--seed", args.seeds, "64-bit seed (repeatable)");
    if (with_mode) {
      auto* k_opt = sub->add_option("--k", args.k, "fixed block memory");
      sub->add_flag("--schedule", args.schedule, "use the sample-size schedule k_n")
          ->excludes(k_opt);
      sub->add_option("--tau", args.tau, "equivalence tolerance in bits");
    }
  };

  auto* gen = app.add_subcommand("gen", "generate process specifications");
  add_common(gen, false);
  auto* sample = app.add_subcommand("sample", "sample trajectories from a specification");
  add_common(sample, false);
  auto* estimate = app.add_subcommand("estimate", "score a candidate family on a series");
  add_common(estimate, true);
  auto* select = app.add_subcommand("select", "select the information-maximizing candidate");
  add_common(select, true);
  auto* select_active =
      app.add_subcommand("select-active", "sample an MDP under the uniform policy and select");
  add_common(select_active, true);
  auto* oracle = app.add_subcommand("oracle", "exact values for a finite chain and map");
  add_common(oracle, false);
  auto* bound = app.add_subcommand("bound", "concentration bound tables over parameter grids");
  add_common(bound, false);
  auto* verify_cmd = app.add_subcommand("verify", "run the verification suites");
  add_common(verify_cmd, false);
  verify_cmd->add_option("--suite", args.suites, "suite name (repeatable; default: all)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) return cmd_gen(args);
    if (sample->parsed()) return cmd_sample(args);
    if (estimate->parsed()) return cmd_estimate(args);
    if (select->parsed()) return cmd_select(args);
    if (select_active->parsed()) return cmd_select_active(args);
    if (oracle->parsed()) return cmd_oracle(args);
    if (bound->parsed()) return cmd_bound(args);
    if (verify_cmd->parsed()) return cmd_verify(args);
  } catch (const GuardError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: invalid configuration: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
