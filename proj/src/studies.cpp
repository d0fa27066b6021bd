#include "nmb/studies.hpp"

#include <algorithm>
#include <cmath>

#include "nmb/errors.hpp"

namespace nmb {

ComparisonResult run_comparison(const ExperimentConfig& cfg, int parallelism,
                                const LogSink& sink) {
  ComparisonResult result;
  std::map<std::string, std::vector<double>> cumulative;
  std::map<std::string, std::vector<double>> final_avg;
  const StimulationSchedule* schedule = cfg.stimulation ? &*cfg.stimulation : nullptr;
  for (const auto& agent : cfg.agents) {
    const auto logs = run_agent(cfg, agent, parallelism);
    if (sink) sink(agent, logs);
    MetricSummary summary = summarize(logs, cfg.min_block_length(), schedule);
    cumulative[agent.name] = summary.final_cumulative_regrets;
    final_avg[agent.name] = summary.final_avg_regrets;
    result.summaries.push_back(std::move(summary));
  }
  if (cfg.agents.size() >= 2 && cfg.n_seeds >= 2) {
    result.final_cumulative_regret_anova = stats::anova_tukey(cumulative);
    result.final_avg_regret_anova = stats::anova_tukey(final_avg);
  }
  return result;
}

AgentSpec GridResult::best_spec() const {
  AgentSpec spec;
  spec.kind = kind;
  const auto& p = best_row().params;
  if (kind == AgentKind::kBoltzmann) {
    spec.name = "boltzmann";
    spec.learning_rate = p[0];
    spec.inverse_temperature = p[1];
  } else {
    spec.name = "ducb";
    spec.gamma = p[0];
    spec.xi = p[1];
    spec.learning_rate = p[2];
  }
  return spec;
}

GridResult grid_search(AgentKind kind, const GridSpec& grid, const ExperimentConfig& eval_cfg,
                       int parallelism) {
  GridResult result;
  result.kind = kind;
  std::vector<std::vector<double>> points;
  auto sorted = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  if (kind == AgentKind::kBoltzmann) {
    if (!grid.boltzmann) throw ConfigError("grid.boltzmann", "no Boltzmann grid given");
    result.param_names = {"learning_rate", "inverse_temperature"};
    for (double lr : sorted(grid.boltzmann->learning_rates))
      for (double beta : sorted(grid.boltzmann->inverse_temperatures)) points.push_back({lr, beta});
  } else if (kind == AgentKind::kDiscountedUcb) {
    if (!grid.ducb) throw ConfigError("grid.ducb", "no D-UCB grid given");
    result.param_names = {"gamma", "xi", "learning_rate"};
    for (double g : sorted(grid.ducb->gammas))
      for (double xi : sorted(grid.ducb->xis))
        for (double lr : sorted(grid.ducb->learning_rates)) points.push_back({g, xi, lr});
  } else {
    throw ConfigError("kind", "grid search covers the Boltzmann and D-UCB baselines only");
  }
  if (points.empty()) throw ConfigError("grid", "empty grid");

  const auto n_seeds = static_cast<std::size_t>(eval_cfg.n_seeds);
  std::vector<double> scores(points.size() * n_seeds);
  parallel_for(scores.size(), parallelism, [&](std::size_t job) {
    const std::size_t point = job / n_seeds;
    const std::size_t seed_index = job % n_seeds;
    AgentSpec spec;
    spec.kind = kind;
    spec.name = "grid";
    const auto& p = points[point];
    if (kind == AgentKind::kBoltzmann) {
      spec.learning_rate = p[0];
      spec.inverse_temperature = p[1];
    } else {
      spec.gamma = p[0];
      spec.xi = p[1];
      spec.learning_rate = p[2];
    }
    scores[job] =
        run_cumulative_regret(eval_cfg, spec, eval_cfg.run_seed(static_cast<int>(seed_index)));
  });

  for (std::size_t i = 0; i < points.size(); ++i) {
    GridRow row;
    row.params = points[i];
    const auto first = scores.begin() + static_cast<std::ptrdiff_t>(i * n_seeds);
    double mean = 0.0;
    for (auto it = first; it != first + static_cast<std::ptrdiff_t>(n_seeds); ++it) mean += *it;
    mean /= static_cast<double>(n_seeds);
    double ss = 0.0;
    for (auto it = first; it != first + static_cast<std::ptrdiff_t>(n_seeds); ++it)
      ss += (*it - mean) * (*it - mean);
    row.mean_final_regret = mean;
    row.sem = n_seeds > 1 ? std::sqrt(ss / static_cast<double>(n_seeds - 1) /
                                      static_cast<double>(n_seeds))
                          : 0.0;
    result.rows.push_back(std::move(row));
  }
  // Rows are in lexicographic order, so strict < keeps the smallest tuple on ties.
  for (std::size_t i = 1; i < result.rows.size(); ++i) {
    if (result.rows[i].mean_final_regret < result.rows[result.best].mean_final_regret)
      result.best = i;
  }
  return result;
}

StimulationResult stimulation_experiment(const ExperimentConfig& cfg, int parallelism,
                                         const LogSink& sink) {
  if (!cfg.stimulation) throw ConfigError("stimulation", "stimulation schedule required");
  if (cfg.agents.empty()) throw ConfigError("agents", "at least one agent required");
  const StimulationSchedule& schedule = *cfg.stimulation;
  const StimulationSchedule no_stimulation{schedule.epochs, 0.0};

  AgentSpec stim_agent = cfg.agents.front();
  AgentSpec control_agent = stim_agent;
  stim_agent.name += "_stimulated";
  control_agent.name += "_control";

  const auto stim_logs = run_agent(cfg, stim_agent, parallelism, &schedule);
  const auto control_logs = run_agent(cfg, control_agent, parallelism, &no_stimulation);
  if (sink) {
    sink(stim_agent, stim_logs);
    sink(control_agent, control_logs);
  }

  StimulationResult r;
  const EpochSplit split = split_epochs(schedule, static_cast<std::size_t>(cfg.total_steps()));
  const auto n = static_cast<double>(stim_logs.size());
  for (std::size_t i = 0; i < stim_logs.size(); ++i) {
    StimulationPair p;
    p.seed = stim_logs[i].seed;
    p.greedy_stim_inside = window_fraction(stim_logs[i], split.inside, true);
    p.greedy_control_inside = window_fraction(control_logs[i], split.inside, true);
    p.accuracy_stim_inside = window_fraction(stim_logs[i], split.inside, false);
    p.accuracy_control_inside = window_fraction(control_logs[i], split.inside, false);
    p.accuracy_stim_outside = window_fraction(stim_logs[i], split.outside, false);
    p.accuracy_control_outside = window_fraction(control_logs[i], split.outside, false);
    r.greedy_stim_inside += p.greedy_stim_inside / n;
    r.greedy_control_inside += p.greedy_control_inside / n;
    r.accuracy_stim_inside += p.accuracy_stim_inside / n;
    r.accuracy_control_inside += p.accuracy_control_inside / n;
    r.accuracy_stim_outside += p.accuracy_stim_outside / n;
    r.accuracy_control_outside += p.accuracy_control_outside / n;
    r.pairs.push_back(p);
  }
  r.stimulated = summarize(stim_logs, cfg.min_block_length(), &schedule);
  r.control = summarize(control_logs, cfg.min_block_length(), &schedule);
  return r;
}

}  // namespace nmb
