#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nmb/config_io.hpp"
#include "nmb/errors.hpp"
#include "nmb/harness.hpp"
#include "nmb/presets.hpp"
#include "nmb/studies.hpp"

namespace fs = std::filesystem;
using nmb::json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct Options {
  std::string config_path;
  std::string preset;
  std::vector<std::string> sets;
  std::optional<int> seeds;
  int parallelism = 1;
  std::optional<std::string> out;
  bool stdout_summary = false;
};

void add_common(CLI::App& cmd, Options& opt) {
  cmd.add_option("--config", opt.config_path, "experiment config (JSON)");
  cmd.add_option("--preset", opt.preset, "built-in experiment: fig2, gridD or appendixF");
  cmd.add_option("--set", opt.sets, "override, e.g. --set environment.k=3 (repeatable)")
      ->allow_extra_args(false);
  cmd.add_option("--seeds", opt.seeds, "number of seeds")->check(CLI::PositiveNumber);
  cmd.add_option("--parallelism", opt.parallelism, "worker threads")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--out", opt.out, "output directory");
  cmd.add_flag("--stdout-summary", opt.stdout_summary, "print summary.json to stdout");
}

// File or preset -> NM_BANDITS_SEED -> --set -> --seeds / --out.
nmb::ExperimentConfig resolve(const Options& opt) {
  if (opt.config_path.empty() == opt.preset.empty())
    throw nmb::ConfigError("config", "give exactly one of --config or --preset");
  const nmb::ExperimentConfig base =
      opt.preset.empty() ? nmb::load_config(opt.config_path) : nmb::preset(opt.preset);

  std::vector<std::string> overrides;
  if (const char* seed = std::getenv("NM_BANDITS_SEED")) {
    const std::string s = seed;
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
      throw nmb::ConfigError("NM_BANDITS_SEED", "expected a non-negative integer, got '" + s + "'");
    overrides.push_back("base_seed=" + s);
  }
  overrides.insert(overrides.end(), opt.sets.begin(), opt.sets.end());
  if (opt.seeds) overrides.push_back("n_seeds=" + std::to_string(*opt.seeds));
  if (opt.out) overrides.push_back("output_path=" + json(*opt.out).dump());
  return nmb::resolve_config(nmb::config_to_json(base), overrides);
}

void write_json(const fs::path& path, const json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << doc.dump(2) << '\n';
}

fs::path prepare_output(const nmb::ExperimentConfig& cfg) {
  const fs::path dir = cfg.output_path;
  fs::create_directories(dir);
  write_json(dir / "resolved_config.json", nmb::config_to_json(cfg));
  return dir;
}

std::string log_name(const nmb::TrajectoryLog& log) {
  return log.agent + "_seed" + std::to_string(log.seed) + ".csv";
}

nmb::LogSink csv_sink(const fs::path& dir, int parallelism) {
  return [dir, parallelism](const nmb::AgentSpec& agent,
                            std::span<const nmb::TrajectoryLog> logs) {
    nmb::parallel_for(logs.size(), parallelism, [&](std::size_t i) {
      nmb::write_trajectory_csv(dir / "logs" / log_name(logs[i]), logs[i]);
    });
    std::cerr << "  " << agent.name << ": " << logs.size() << " runs\n";
  };
}

json summary_header(const nmb::ExperimentConfig& cfg, const std::string& command) {
  json j;
  j["schema_version"] = nmb::kSchemaVersion;
  j["experiment"] = cfg.name;
  j["command"] = command;
  j["n_seeds"] = cfg.n_seeds;
  j["base_seed"] = cfg.base_seed;
  return j;
}

void finish(const fs::path& dir, const json& summary, const Options& opt) {
  write_json(dir / "summary.json", summary);
  std::cerr << "wrote " << (dir / "summary.json").string() << '\n';
  if (opt.stdout_summary) std::cout << summary.dump(2) << '\n';
}

void cmd_run(const Options& opt) {
  const auto cfg = resolve(opt);
  if (cfg.agents.empty()) throw nmb::ConfigError("agents", "run needs at least one agent");
  const auto dir = prepare_output(cfg);
  std::cerr << "run " << cfg.name << ": " << cfg.agents.size() << " agents x " << cfg.n_seeds
            << " seeds, " << cfg.total_steps() << " steps\n";
  const auto result = nmb::run_comparison(cfg, opt.parallelism, csv_sink(dir, opt.parallelism));

  json summary = summary_header(cfg, "run");
  summary["agents"] = json::array();
  for (const auto& s : result.summaries) summary["agents"].push_back(nmb::to_json(s));
  if (cfg.agents.size() >= 2) {
    summary["anova"] = {
        {"final_cumulative_regret", nmb::to_json(result.final_cumulative_regret_anova)},
        {"final_avg_regret", nmb::to_json(result.final_avg_regret_anova)}};
  }
  finish(dir, summary, opt);
}

void cmd_grid(const Options& opt) {
  const auto cfg = resolve(opt);
  if (!cfg.grid || (!cfg.grid->boltzmann && !cfg.grid->ducb))
    throw nmb::ConfigError("grid", "grid-search needs a grid section");
  const auto dir = prepare_output(cfg);

  json summary = summary_header(cfg, "grid-search");
  summary["grids"] = json::array();
  auto search = [&](nmb::AgentKind kind) {
    std::cerr << "grid-search " << nmb::to_string(kind) << " (" << cfg.n_seeds << " seeds, "
              << cfg.total_steps() << " steps)\n";
    const auto result = nmb::grid_search(kind, *cfg.grid, cfg, opt.parallelism);
    summary["grids"].push_back(nmb::to_json(result));
  };
  if (cfg.grid->boltzmann) search(nmb::AgentKind::kBoltzmann);
  if (cfg.grid->ducb) search(nmb::AgentKind::kDiscountedUcb);
  finish(dir, summary, opt);
}

void cmd_stimulate(const Options& opt) {
  const auto cfg = resolve(opt);
  if (!cfg.stimulation) throw nmb::ConfigError("stimulation", "stimulate needs a schedule");
  if (cfg.agents.empty()) throw nmb::ConfigError("agents", "stimulate needs an agent");
  const auto dir = prepare_output(cfg);
  std::cerr << "stimulate " << cfg.name << ": " << cfg.agents.front().name << " x "
            << cfg.n_seeds << " paired seeds\n";
  const auto result =
      nmb::stimulation_experiment(cfg, opt.parallelism, csv_sink(dir, opt.parallelism));

  json summary = summary_header(cfg, "stimulate");
  summary["stimulation"] = nmb::to_json(result);
  finish(dir, summary, opt);
}

void cmd_presets(const std::string& name) {
  if (name.empty()) {
    for (const auto& n : nmb::preset_names()) std::cout << n << '\n';
    return;
  }
  std::cout << nmb::config_to_json(nmb::preset(name)).dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Doya-DaYu bandit experiments"};
  app.require_subcommand(1);

  Options opt;
  auto* run = app.add_subcommand("run", "compare the configured agents");
  add_common(*run, opt);
  auto* grid = app.add_subcommand("grid-search", "grid-search the baseline hyper-parameters");
  add_common(*grid, opt);
  auto* stim = app.add_subcommand("stimulate", "temperature stimulation vs paired control");
  add_common(*stim, opt);
  std::string preset_name;
  auto* presets = app.add_subcommand("presets", "list presets, or print one as JSON");
  presets->add_option("name", preset_name, "preset to print");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) cmd_run(opt);
    else if (*grid) cmd_grid(opt);
    else if (*stim) cmd_stimulate(opt);
    else cmd_presets(preset_name);
  } catch (const nmb::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
