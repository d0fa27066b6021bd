#pragma once

// Declarative description of an experiment: environment, agents, seeds,
// optional stimulation schedule and optional baseline grids.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "nmb/agents.hpp"
#include "nmb/bandit_env.hpp"

namespace nmb {

inline constexpr int kSchemaVersion = 1;

using EnvironmentConfig = std::variant<GaussianBanditConfig, BernoulliReversalConfig>;

enum class AgentKind { kDoyaDayu, kBoltzmann, kDiscountedUcb };

std::string_view to_string(AgentKind kind);
AgentKind agent_kind_from_string(std::string_view name);

struct AgentSpec {
  std::string name;
  AgentKind kind = AgentKind::kDoyaDayu;
  DoyaDayuParams doya_dayu;
  // Boltzmann and D-UCB.
  double learning_rate = 0.25;
  double inverse_temperature = 0.25;
  double gamma = 0.9999;
  double xi = 1.0;

  bool operator==(const AgentSpec&) const = default;
};

struct StimulationSchedule {
  // Half-open [start, end) step intervals.
  std::vector<std::pair<std::int64_t, std::int64_t>> epochs;
  double offset = 0.1;

  bool contains(std::int64_t step) const;
  void validate(std::int64_t total_steps) const;
  bool operator==(const StimulationSchedule&) const = default;
};

// Epochs [r - half_width, r + half_width) around every other reversal r,
// starting with the first.
StimulationSchedule alternate_reversal_schedule(std::int64_t reversal_period,
                                                std::int64_t total_steps,
                                                std::int64_t half_width, double offset);

struct BoltzmannGrid {
  std::vector<double> learning_rates;
  std::vector<double> inverse_temperatures;
  bool operator==(const BoltzmannGrid&) const = default;
};

struct DucbGrid {
  std::vector<double> gammas;
  std::vector<double> xis;
  std::vector<double> learning_rates;
  bool operator==(const DucbGrid&) const = default;
};

struct GridSpec {
  std::optional<BoltzmannGrid> boltzmann;
  std::optional<DucbGrid> ducb;
  bool operator==(const GridSpec&) const = default;
};

// {first/denominator, (first+1)/denominator, ..., last/denominator}; each
// value is computed directly so no rounding accumulates.
std::vector<double> grid_range(int first_numerator, int last_numerator, int denominator);

struct ExperimentConfig {
  std::string name = "experiment";
  EnvironmentConfig environment = GaussianBanditConfig{};
  std::vector<AgentSpec> agents;
  int n_seeds = 50;
  std::uint64_t base_seed = 0;
  std::optional<StimulationSchedule> stimulation;
  std::optional<GridSpec> grid;
  std::string output_path = "out";

  std::int64_t total_steps() const;
  std::int64_t min_block_length() const;
  std::size_t k() const;
  // Seed of the i-th run; shared by every agent so comparisons are paired.
  std::uint64_t run_seed(int index) const { return base_seed + static_cast<std::uint64_t>(index); }

  void validate() const;
  bool operator==(const ExperimentConfig&) const = default;
};

std::unique_ptr<Environment> make_environment(const EnvironmentConfig& env, std::uint64_t seed);

// Doya-DaYu members are initialized uniformly over the environment's payout
// range with return variance at the squared mid-range standard deviation.
std::unique_ptr<Agent> make_agent(const AgentSpec& spec, const EnvironmentConfig& env,
                                  std::uint64_t seed);

}  // namespace nmb
