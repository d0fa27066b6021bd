#include "nmb/experiment.hpp"

#include <set>

#include "nmb/errors.hpp"

namespace nmb {

std::string_view to_string(AgentKind kind) {
  switch (kind) {
    case AgentKind::kDoyaDayu:
      return "doya_dayu";
    case AgentKind::kBoltzmann:
      return "boltzmann";
    case AgentKind::kDiscountedUcb:
      return "ducb";
  }
  return "doya_dayu";
}

AgentKind agent_kind_from_string(std::string_view name) {
  if (name == "doya_dayu") return AgentKind::kDoyaDayu;
  if (name == "boltzmann") return AgentKind::kBoltzmann;
  if (name == "ducb") return AgentKind::kDiscountedUcb;
  throw ConfigError("kind", "unknown agent kind '" + std::string(name) + "'");
}

bool StimulationSchedule::contains(std::int64_t step) const {
  for (const auto& [start, end] : epochs) {
    if (step >= start && step < end) return true;
  }
  return false;
}

void StimulationSchedule::validate(std::int64_t total_steps) const {
  if (!(offset >= 0.0)) throw ConfigError("stimulation.offset", "must be >= 0");
  std::int64_t previous_end = 0;
  for (const auto& [start, end] : epochs) {
    if (start < previous_end || end <= start || end > total_steps)
      throw ConfigError("stimulation.epochs",
                        "epochs must be sorted, non-overlapping and within [0, total_steps)");
    previous_end = end;
  }
}

StimulationSchedule alternate_reversal_schedule(std::int64_t reversal_period,
                                                std::int64_t total_steps,
                                                std::int64_t half_width, double offset) {
  StimulationSchedule schedule;
  schedule.offset = offset;
  for (std::int64_t r = reversal_period; r < total_steps; r += 2 * reversal_period) {
    const std::int64_t start = std::max<std::int64_t>(0, r - half_width);
    const std::int64_t end = std::min(total_steps, r + half_width);
    schedule.epochs.emplace_back(start, end);
  }
  return schedule;
}

std::vector<double> grid_range(int first_numerator, int last_numerator, int denominator) {
  std::vector<double> out;
  for (int i = first_numerator; i <= last_numerator; ++i)
    out.push_back(static_cast<double>(i) / static_cast<double>(denominator));
  return out;
}

std::int64_t ExperimentConfig::total_steps() const {
  return std::visit([](const auto& env) { return env.total_steps; }, environment);
}

std::int64_t ExperimentConfig::min_block_length() const {
  if (const auto* g = std::get_if<GaussianBanditConfig>(&environment)) return g->block_length;
  return std::get<BernoulliReversalConfig>(environment).reversal_period;
}

std::size_t ExperimentConfig::k() const {
  if (const auto* g = std::get_if<GaussianBanditConfig>(&environment))
    return static_cast<std::size_t>(g->k);
  return 2;
}

void ExperimentConfig::validate() const {
  try {
    std::visit([](const auto& env) { env.validate(); }, environment);
  } catch (const ConfigError& e) {
    throw ConfigError("environment." + e.field(), e.detail());
  }
  if (n_seeds < 1) throw ConfigError("n_seeds", "must be >= 1");
  std::set<std::string> names;
  for (const auto& agent : agents) {
    if (agent.name.empty()) throw ConfigError("agents.name", "agent name must not be empty");
    if (!names.insert(agent.name).second)
      throw ConfigError("agents.name", "duplicate agent name '" + agent.name + "'");
    // Constructing once checks every hyper-parameter range.
    try {
      make_agent(agent, environment, 0);
    } catch (const ConfigError& e) {
      throw ConfigError("agents." + agent.name + "." + e.field(), e.detail());
    }
  }
  if (stimulation) stimulation->validate(total_steps());
  if (grid) {
    if (grid->boltzmann && (grid->boltzmann->learning_rates.empty() ||
                            grid->boltzmann->inverse_temperatures.empty()))
      throw ConfigError("grid.boltzmann", "empty grid axis");
    if (grid->ducb && (grid->ducb->gammas.empty() || grid->ducb->xis.empty() ||
                       grid->ducb->learning_rates.empty()))
      throw ConfigError("grid.ducb", "empty grid axis");
  }
}

std::unique_ptr<Environment> make_environment(const EnvironmentConfig& env, std::uint64_t seed) {
  if (const auto* g = std::get_if<GaussianBanditConfig>(&env)) {
    auto cfg = *g;
    cfg.seed = seed;
    return std::make_unique<GaussianBandit>(cfg);
  }
  auto cfg = std::get<BernoulliReversalConfig>(env);
  cfg.seed = seed;
  return std::make_unique<BernoulliReversalBandit>(cfg);
}

std::unique_ptr<Agent> make_agent(const AgentSpec& spec, const EnvironmentConfig& env,
                                  std::uint64_t seed) {
  std::size_t k = 2;
  double init_lo = 0.0;
  double init_hi = 1.0;
  double var_init = 1.0;
  if (const auto* g = std::get_if<GaussianBanditConfig>(&env)) {
    k = static_cast<std::size_t>(g->k);
    init_lo = g->mu_min;
    init_hi = g->mu_max;
    const double mid_std = 0.5 * (g->sigma_min + g->sigma_max);
    var_init = mid_std * mid_std;
  } else {
    const auto& b = std::get<BernoulliReversalConfig>(env);
    const double q = b.success_probabilities[0];
    init_hi = b.reward_magnitude;
    var_init = b.reward_magnitude * b.reward_magnitude * q * (1.0 - q);
  }

  switch (spec.kind) {
    case AgentKind::kDoyaDayu:
      return std::make_unique<DoyaDayuAgent>(spec.doya_dayu, k, init_lo, init_hi, var_init, seed);
    case AgentKind::kBoltzmann:
      return std::make_unique<BoltzmannAgent>(k, spec.learning_rate, spec.inverse_temperature,
                                              seed);
    case AgentKind::kDiscountedUcb:
      return std::make_unique<DiscountedUcbAgent>(k, spec.gamma, spec.xi, spec.learning_rate);
  }
  throw ConfigError("kind", "unknown agent kind");
}

}  // namespace nmb
