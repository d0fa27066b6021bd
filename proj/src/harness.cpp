#include "nmb/harness.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace nmb {

namespace {

int argmax(const std::vector<double>& v) {
  return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

TrajectoryLog run_single(const ExperimentConfig& cfg, const AgentSpec& spec, std::uint64_t seed,
                         const StimulationSchedule* stimulation) {
  if (stimulation == nullptr && cfg.stimulation) stimulation = &*cfg.stimulation;
  auto env = make_environment(cfg.environment, seed);
  auto agent = make_agent(spec, cfg.environment, seed);
  const bool oracle = agent->wants_truth();
  const std::size_t k = env->k();
  const auto total = static_cast<std::size_t>(env->total_steps());

  TrajectoryLog log;
  log.agent = spec.name;
  log.seed = seed;
  log.k = k;
  log.context_id.reserve(total);
  log.switched.reserve(total);
  log.arm.reserve(total);
  log.reward.reserve(total);
  log.optimal_arm.reserve(total);
  log.regret.reserve(total);
  log.alpha.reserve(total * k);
  log.temperature.reserve(total);
  log.stimulated.reserve(total);
  log.greedy_arm.reserve(total);
  log.values.reserve(total * k);
  log.contexts.push_back(env->context());

  for (std::size_t t = 0; t < total; ++t) {
    const auto step = static_cast<std::int64_t>(t);
    if (oracle) agent->reveal(env->context());
    const bool stim = stimulation != nullptr && stimulation->offset != 0.0 &&
                      stimulation->contains(step);
    const double offset = stim ? stimulation->offset : 0.0;

    log.greedy_arm.push_back(argmax(agent->values()));
    const ActDiagnostics act = agent->act(step + 1, offset);
    const StepResult res = env->step(act.arm);
    agent->observe(act.arm, res.reward, oracle ? &env->context() : nullptr);

    log.context_id.push_back(res.info.context_id);
    log.switched.push_back(res.info.switched ? 1 : 0);
    log.arm.push_back(static_cast<int>(act.arm));
    log.reward.push_back(res.reward);
    log.optimal_arm.push_back(static_cast<int>(res.info.optimal_arm));
    log.regret.push_back(res.info.regret());
    log.alpha.insert(log.alpha.end(), act.alpha.begin(), act.alpha.end());
    log.temperature.push_back(act.temperature);
    log.stimulated.push_back(stim ? 1 : 0);
    const auto values = agent->values();
    log.values.insert(log.values.end(), values.begin(), values.end());

    if (env->maybe_switch()) log.contexts.push_back(env->context());
  }
  return log;
}

double run_cumulative_regret(const ExperimentConfig& cfg, const AgentSpec& spec,
                             std::uint64_t seed) {
  const StimulationSchedule* stimulation = cfg.stimulation ? &*cfg.stimulation : nullptr;
  auto env = make_environment(cfg.environment, seed);
  auto agent = make_agent(spec, cfg.environment, seed);
  const bool oracle = agent->wants_truth();
  const auto total = env->total_steps();
  double regret = 0.0;
  for (std::int64_t t = 0; t < total; ++t) {
    if (oracle) agent->reveal(env->context());
    const double offset =
        stimulation != nullptr && stimulation->contains(t) ? stimulation->offset : 0.0;
    const ActDiagnostics act = agent->act(t + 1, offset);
    const StepResult res = env->step(act.arm);
    agent->observe(act.arm, res.reward, oracle ? &env->context() : nullptr);
    regret += res.info.regret();
    env->maybe_switch();
  }
  return regret;
}

void parallel_for(std::size_t n, int parallelism, const std::function<void(std::size_t)>& fn) {
  const auto workers =
      static_cast<std::size_t>(std::clamp<long>(parallelism, 1, static_cast<long>(std::max<std::size_t>(n, 1))));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

std::vector<TrajectoryLog> run_agent(const ExperimentConfig& cfg, const AgentSpec& agent,
                                     int parallelism, const StimulationSchedule* stimulation) {
  std::vector<TrajectoryLog> logs(static_cast<std::size_t>(cfg.n_seeds));
  parallel_for(logs.size(), parallelism, [&](std::size_t i) {
    logs[i] = run_single(cfg, agent, cfg.run_seed(static_cast<int>(i)), stimulation);
  });
  return logs;
}

}  // namespace nmb
