#include "nmb/presets.hpp"

#include "nmb/errors.hpp"

namespace nmb {

namespace {

AgentSpec doya_dayu(std::string name, DoyaDayuMode mode) {
  AgentSpec spec;
  spec.name = std::move(name);
  spec.kind = AgentKind::kDoyaDayu;
  spec.doya_dayu.mode = mode;
  return spec;
}

ExperimentConfig fig2() {
  ExperimentConfig cfg;
  cfg.name = "fig2";
  GaussianBanditConfig env;
  env.total_steps = 20 * env.block_length;
  cfg.environment = env;

  cfg.agents.push_back(doya_dayu("doya_dayu", DoyaDayuMode::kLearned));
  cfg.agents.push_back(doya_dayu("aleatoric_oracle", DoyaDayuMode::kAleatoricOracle));
  cfg.agents.push_back(doya_dayu("full_oracle", DoyaDayuMode::kFullOracle));

  AgentSpec boltzmann;
  boltzmann.name = "boltzmann";
  boltzmann.kind = AgentKind::kBoltzmann;
  boltzmann.learning_rate = 0.25;
  boltzmann.inverse_temperature = 0.25;
  cfg.agents.push_back(boltzmann);

  AgentSpec ducb;
  ducb.name = "ducb";
  ducb.kind = AgentKind::kDiscountedUcb;
  ducb.gamma = 0.9999;
  ducb.xi = 1.0;
  ducb.learning_rate = 0.25;
  cfg.agents.push_back(ducb);

  cfg.n_seeds = 50;
  cfg.output_path = "out/fig2";
  return cfg;
}

ExperimentConfig grid_d() {
  ExperimentConfig cfg;
  cfg.name = "gridD";
  GaussianBanditConfig env;
  env.total_steps = 4 * env.block_length;
  cfg.environment = env;
  GridSpec grid;
  grid.boltzmann = BoltzmannGrid{grid_range(1, 20, 20), grid_range(1, 20, 20)};
  grid.ducb = DucbGrid{{0.9, 0.99, 0.999, 0.9999}, grid_range(5, 15, 10), grid_range(2, 20, 20)};
  cfg.grid = grid;
  cfg.n_seeds = 50;
  cfg.output_path = "out/gridD";
  return cfg;
}

ExperimentConfig appendix_f() {
  ExperimentConfig cfg;
  cfg.name = "appendixF";
  BernoulliReversalConfig env;
  env.reward_magnitude = 0.4;
  cfg.environment = env;
  cfg.agents.push_back(doya_dayu("full_oracle", DoyaDayuMode::kFullOracle));
  cfg.stimulation =
      alternate_reversal_schedule(env.reversal_period, env.total_steps, 200, 0.1);
  cfg.n_seeds = 50;
  cfg.output_path = "out/appendixF";
  return cfg;
}

}  // namespace

ExperimentConfig preset(std::string_view name) {
  if (name == "fig2") return fig2();
  if (name == "gridD") return grid_d();
  if (name == "appendixF") return appendix_f();
  throw ConfigError("preset", "unknown preset '" + std::string(name) + "'");
}

std::vector<std::string> preset_names() { return {"fig2", "gridD", "appendixF"}; }

}  // namespace nmb
