#pragma once

// Seeded experiment runner and per-step trajectory logs.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "nmb/bandit_env.hpp"
#include "nmb/experiment.hpp"

namespace nmb {

// Column-oriented per-step record of one (agent, seed) run.
struct TrajectoryLog {
  std::string agent;
  std::uint64_t seed = 0;
  std::size_t k = 0;

  std::vector<int> context_id;
  std::vector<std::uint8_t> switched;
  std::vector<int> arm;
  std::vector<double> reward;
  std::vector<int> optimal_arm;
  std::vector<double> regret;
  std::vector<double> alpha;  // size() * k, row-major by step
  std::vector<double> temperature;
  std::vector<std::uint8_t> stimulated;
  // argmax of the policy values just before acting (lowest index on ties).
  std::vector<int> greedy_arm;
  // Policy values after the step's update; size() * k.
  std::vector<double> values;
  // Every context seen, indexed by context_id.
  std::vector<ContextSpec> contexts;

  std::size_t size() const { return arm.size(); }
  double alpha_at(std::size_t step, std::size_t a) const { return alpha[step * k + a]; }
  double value_at(std::size_t step, std::size_t a) const { return values[step * k + a]; }
  const ContextSpec& truth_at(std::size_t step) const {
    return contexts[static_cast<std::size_t>(context_id[step])];
  }
};

// act (with the stimulation offset when the step lies in an epoch) ->
// env step -> observe -> maybe_switch, for every step. Deterministic in
// (cfg, agent, seed). `stimulation` overrides cfg.stimulation when given.
TrajectoryLog run_single(const ExperimentConfig& cfg, const AgentSpec& agent, std::uint64_t seed,
                         const StimulationSchedule* stimulation = nullptr);

// Same loop without logging; returns the final cumulative regret.
double run_cumulative_regret(const ExperimentConfig& cfg, const AgentSpec& agent,
                             std::uint64_t seed);

// Runs fn(0..n-1) on `parallelism` worker threads. Each index runs exactly
// once; the first exception is rethrown after all workers finish.
void parallel_for(std::size_t n, int parallelism, const std::function<void(std::size_t)>& fn);

// All seeds of one agent, in seed order.
std::vector<TrajectoryLog> run_agent(const ExperimentConfig& cfg, const AgentSpec& agent,
                                     int parallelism,
                                     const StimulationSchedule* stimulation = nullptr);

}  // namespace nmb
