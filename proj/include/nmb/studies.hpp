#pragma once

// Multi-run studies built on the runner: agent comparison with ANOVA/Tukey,
// baseline grid search and the temperature stimulation experiment.

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "nmb/experiment.hpp"
#include "nmb/metrics.hpp"
#include "nmb/stats.hpp"

namespace nmb {

struct ComparisonResult {
  std::vector<MetricSummary> summaries;  // in cfg.agents order
  stats::AnovaResult final_cumulative_regret_anova;
  stats::AnovaResult final_avg_regret_anova;
};

// Called with the logs of each agent as soon as they are complete (e.g. to
// write CSV files); the logs are released afterwards.
using LogSink = std::function<void(const AgentSpec&, std::span<const TrajectoryLog>)>;

ComparisonResult run_comparison(const ExperimentConfig& cfg, int parallelism,
                                const LogSink& sink = {});

struct GridRow {
  std::vector<double> params;
  double mean_final_regret = 0.0;
  double sem = 0.0;
};

struct GridResult {
  AgentKind kind = AgentKind::kBoltzmann;
  std::vector<std::string> param_names;
  std::vector<GridRow> rows;  // lexicographic parameter order
  std::size_t best = 0;

  const GridRow& best_row() const { return rows.at(best); }
  AgentSpec best_spec() const;
};

// Every grid point is scored by the mean final cumulative regret over
// eval_cfg.n_seeds paired seeds; the lowest score wins, ties going to the
// lexicographically smallest parameter tuple. Throws ConfigError on an empty
// grid.
GridResult grid_search(AgentKind kind, const GridSpec& grid, const ExperimentConfig& eval_cfg,
                       int parallelism);

struct StimulationPair {
  std::uint64_t seed = 0;
  double greedy_stim_inside = 0.0;
  double greedy_control_inside = 0.0;
  double accuracy_stim_inside = 0.0;
  double accuracy_control_inside = 0.0;
  double accuracy_stim_outside = 0.0;
  double accuracy_control_outside = 0.0;
};

struct StimulationResult {
  std::vector<StimulationPair> pairs;
  // Means over pairs.
  double greedy_stim_inside = 0.0;
  double greedy_control_inside = 0.0;
  double accuracy_stim_inside = 0.0;
  double accuracy_control_inside = 0.0;
  double accuracy_stim_outside = 0.0;
  double accuracy_control_outside = 0.0;
  MetricSummary stimulated;
  MetricSummary control;
};

// Runs cfg.agents.front() with and without cfg.stimulation on paired seeds.
// Requires a stimulation schedule.
StimulationResult stimulation_experiment(const ExperimentConfig& cfg, int parallelism,
                                         const LogSink& sink = {});

}  // namespace nmb
