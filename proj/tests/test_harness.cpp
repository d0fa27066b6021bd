#include <doctest.h>

#include <cmath>
#include <vector>

#include "nmb/errors.hpp"
#include "nmb/experiment.hpp"
#include "nmb/harness.hpp"
#include "nmb/metrics.hpp"
#include "nmb/presets.hpp"
#include "nmb/studies.hpp"

using namespace nmb;

namespace {

// One context of `n` steps with two arms and the given per-step choices.
TrajectoryLog manual_log(const std::vector<int>& arms, std::vector<double> means,
                         double value = 0.0) {
  TrajectoryLog log;
  log.agent = "manual";
  log.k = means.size();
  ContextSpec ctx;
  for (double m : means) ctx.arms.push_back({m, 1.0});
  log.contexts.push_back(ctx);
  const auto best = static_cast<int>(ctx.optimal_arm());
  for (int a : arms) {
    log.context_id.push_back(0);
    log.switched.push_back(0);
    log.arm.push_back(a);
    log.reward.push_back(means[static_cast<std::size_t>(a)]);
    log.optimal_arm.push_back(best);
    log.regret.push_back(ctx.optimal_mean() - means[static_cast<std::size_t>(a)]);
    log.alpha.insert(log.alpha.end(), means.size(), 0.0);
    log.temperature.push_back(0.0);
    log.stimulated.push_back(0);
    log.greedy_arm.push_back(best);
    log.values.insert(log.values.end(), means.size(), value);
  }
  return log;
}

AgentSpec uniform_agent() {
  AgentSpec spec;
  spec.name = "uniform";
  spec.kind = AgentKind::kBoltzmann;
  spec.inverse_temperature = 0.0;
  return spec;
}

AgentSpec oracle_agent() {
  AgentSpec spec;
  spec.name = "oracle";
  spec.doya_dayu.mode = DoyaDayuMode::kFullOracle;
  return spec;
}

ExperimentConfig gaussian(int k, std::int64_t steps, int block = 100) {
  ExperimentConfig cfg;
  GaussianBanditConfig env;
  env.k = k;
  env.total_steps = steps;
  env.block_length = block;
  cfg.environment = env;
  return cfg;
}

bool same_log(const TrajectoryLog& a, const TrajectoryLog& b) {
  return a.arm == b.arm && a.reward == b.reward && a.regret == b.regret &&
         a.alpha == b.alpha && a.temperature == b.temperature && a.values == b.values &&
         a.context_id == b.context_id && a.switched == b.switched;
}

}  // namespace

TEST_SUITE("closed_form") {

TEST_CASE("zero steps give an empty log") {
  auto cfg = gaussian(5, 0);
  CHECK(run_single(cfg, uniform_agent(), 1).size() == 0);
}

TEST_CASE("same inputs give identical logs") {
  auto cfg = gaussian(5, 1000);
  AgentSpec spec;
  spec.name = "dd";
  CHECK(same_log(run_single(cfg, spec, 4), run_single(cfg, spec, 4)));
}

TEST_CASE("single-arm bandit has no regret") {
  auto cfg = gaussian(1, 500);
  CHECK(cumulative_regret(run_single(cfg, oracle_agent(), 2)) == 0.0);
}

TEST_CASE("log has one record per step and schedule marks stimulated steps") {
  auto cfg = gaussian(3, 300);
  StimulationSchedule sched;
  sched.epochs = {{10, 20}};
  sched.offset = 0.5;
  const auto log = run_single(cfg, AgentSpec{"dd"}, 3, &sched);
  REQUIRE(log.size() == 300);
  CHECK(log.alpha.size() == 900);
  for (std::size_t t = 0; t < log.size(); ++t) CHECK(log.stimulated[t] == (t >= 10 && t < 20));
}

TEST_CASE("constant regret gives a flat curve") {
  std::vector<int> arms(40, 1);
  const std::vector<TrajectoryLog> logs{manual_log(arms, {2.0, 0.5})};
  const auto curve = per_context_regret(logs, 40);
  REQUIRE(curve.mean.size() == 40);
  for (double r : curve.mean) CHECK(r == 1.5);
}

TEST_CASE("best-arm player has zero regret and full optimal fraction") {
  std::vector<int> arms(30, 0);
  const std::vector<TrajectoryLog> logs{manual_log(arms, {2.0, 0.5})};
  for (double r : per_context_regret(logs, 30).mean) CHECK(r == 0.0);
  for (double f : optimal_fraction(logs, 30).mean) CHECK(f == 1.0);
}

TEST_CASE("no complete context is an empty result") {
  std::vector<int> arms(10, 0);
  const std::vector<TrajectoryLog> logs{manual_log(arms, {1.0, 0.0})};
  CHECK_THROWS_AS(per_context_regret(logs, 20), EmptyResultError);
  CHECK_THROWS_AS(optimal_fraction(logs, 20), EmptyResultError);
}

TEST_CASE("value MSE") {
  const std::vector<int> arms(5, 0);
  for (double e : value_mse(manual_log(arms, {2.0, 2.0}, 2.0))) CHECK(e == 0.0);
  for (double e : value_mse(manual_log(arms, {2.0, 2.0}, 0.0))) CHECK(e == 4.0);
  const std::vector<std::vector<double>> truth(5, std::vector<double>{1.0, 3.0});
  for (double e : value_mse(manual_log(arms, {2.0, 2.0}, 0.0), truth)) CHECK(e == 5.0);
}

TEST_CASE("choice entropy and epoch split") {
  const auto log = manual_log({0, 1, 0, 1, 0, 0, 0, 0}, {1.0, 0.0});
  CHECK(choice_entropy(log, 0, 4) == doctest::Approx(std::log(2.0)));
  CHECK(choice_entropy(log, 4, 8) == 0.0);
  StimulationSchedule sched;
  sched.epochs = {{2, 4}, {6, 7}};
  const auto split = split_epochs(sched, 8);
  using P = std::pair<std::size_t, std::size_t>;
  CHECK(split.inside == std::vector<P>{{2, 4}, {6, 7}});
  CHECK(split.outside == std::vector<P>{{0, 2}, {4, 6}, {7, 8}});
}

TEST_CASE("offset 0 stimulation equals control") {
  ExperimentConfig cfg;
  cfg.environment = BernoulliReversalConfig{};
  StimulationSchedule zero = alternate_reversal_schedule(500, 4000, 200, 0.0);
  const auto a = run_single(cfg, oracle_agent(), 5, &zero);
  const auto b = run_single(cfg, oracle_agent(), 5);
  CHECK(same_log(a, b));
}

TEST_CASE("alternate reversal schedule") {
  const auto s = alternate_reversal_schedule(500, 4000, 200, 0.1);
  using E = std::pair<std::int64_t, std::int64_t>;
  CHECK(s.epochs == std::vector<E>{{300, 700}, {1300, 1700}, {2300, 2700}, {3300, 3700}});
  CHECK(s.offset == 0.1);
}

TEST_CASE("schedule validation") {
  StimulationSchedule s;
  s.epochs = {{5, 10}, {8, 12}};
  CHECK_THROWS_AS(s.validate(100), ConfigError);
  s.epochs = {{5, 200}};
  CHECK_THROWS_AS(s.validate(100), ConfigError);
  s.epochs = {{5, 10}};
  s.offset = -1.0;
  CHECK_THROWS_AS(s.validate(100), ConfigError);
}

TEST_CASE("one-point grid returns that point") {
  auto cfg = gaussian(3, 300);
  cfg.n_seeds = 2;
  GridSpec grid;
  grid.boltzmann = BoltzmannGrid{{0.3}, {0.7}};
  const auto r = grid_search(AgentKind::kBoltzmann, grid, cfg, 1);
  REQUIRE(r.rows.size() == 1);
  CHECK(r.best_spec().learning_rate == 0.3);
  CHECK(r.best_spec().inverse_temperature == 0.7);
}

TEST_CASE("grid ties go to the smallest parameter tuple") {
  auto cfg = gaussian(3, 300);
  cfg.n_seeds = 3;
  GridSpec grid;
  // At beta 0 the learning rate cannot matter.
  grid.boltzmann = BoltzmannGrid{{0.5, 0.2, 0.9}, {0.0}};
  const auto r = grid_search(AgentKind::kBoltzmann, grid, cfg, 2);
  CHECK(r.rows[0].mean_final_regret == r.rows[2].mean_final_regret);
  CHECK(r.best_row().params[0] == 0.2);
}

TEST_CASE("empty grid is an error") {
  auto cfg = gaussian(3, 300);
  GridSpec grid;
  grid.ducb = DucbGrid{{}, {1.0}, {0.25}};
  CHECK_THROWS_AS(grid_search(AgentKind::kDiscountedUcb, grid, cfg, 1), ConfigError);
  CHECK_THROWS_AS(grid_search(AgentKind::kBoltzmann, grid, cfg, 1), ConfigError);
}

TEST_CASE("grid_range computes each value directly") {
  const auto r = grid_range(1, 20, 20);
  REQUIRE(r.size() == 20);
  CHECK(r[4] == 0.25);
  CHECK(r[19] == 1.0);
}

}  // TEST_SUITE

TEST_CASE("uniform agent on means (1, 0) has regret 0.5") {
  ExperimentConfig cfg;
  BernoulliReversalConfig env;
  env.success_probabilities = {1.0, 0.0};
  env.total_steps = 2000;
  cfg.environment = env;
  cfg.n_seeds = 50;
  const auto logs = run_agent(cfg, uniform_agent(), 1);
  const auto curve = per_context_regret(logs, env.reversal_period);
  double mean = 0.0;
  for (double r : curve.mean) mean += r / static_cast<double>(curve.mean.size());
  // 50 seeds x 4 contexts x 500 steps of a fair coin.
  CHECK(std::abs(mean - 0.5) < 4.0 * 0.5 / std::sqrt(50.0 * 2000.0));
  CHECK(curve.mean.size() == 500);
}

TEST_CASE("uniform agent picks the optimal arm a fifth of the time on k=5") {
  auto cfg = gaussian(5, 2000);
  cfg.n_seeds = 50;
  const auto logs = run_agent(cfg, uniform_agent(), 1);
  const auto curve = optimal_fraction(logs, 100);
  double mean = 0.0;
  for (double f : curve.mean) mean += f / static_cast<double>(curve.mean.size());
  CHECK(std::abs(mean - 0.2) < 0.01);
}

TEST_CASE("first step after a switch is at chance for every agent") {
  auto cfg = preset("fig2");
  cfg.n_seeds = 50;
  for (const auto& agent : cfg.agents) {
    const auto logs = run_agent(cfg, agent, 1);
    const auto curve = optimal_fraction(logs, 500);
    // Binomial standard error over the aligned segments, 4 sigma.
    const double n = static_cast<double>(curve.n_segments);
    CHECK_MESSAGE(std::abs(curve.mean[0] - 0.2) < 4.0 * std::sqrt(0.16 / n), agent.name);
  }
}

TEST_CASE("value MSE of a converging agent trends down") {
  auto cfg = gaussian(5, 3000);
  std::get<GaussianBanditConfig>(cfg.environment).p = 0.0;
  AgentSpec spec;
  spec.name = "dd";
  spec.doya_dayu.mode = DoyaDayuMode::kAleatoricOracle;
  const auto mse = value_mse(run_single(cfg, spec, 9));
  auto window = [&](std::size_t start) {
    double s = 0.0;
    for (std::size_t t = start; t < start + 10; ++t) s += mse[t] / 10.0;
    return s;
  };
  CHECK(window(0) > window(500));
  CHECK(window(500) > window(2990));
}

TEST_CASE("regret is nonnegative and curves have length M") {
  auto cfg = preset("fig2");
  cfg.n_seeds = 3;
  for (const auto& agent : cfg.agents) {
    const auto logs = run_agent(cfg, agent, 1);
    for (const auto& log : logs) {
      CHECK(log.size() == 10000);
      for (double r : log.regret) REQUIRE(r >= 0.0);
    }
    const auto s = summarize(logs, 500);
    CHECK(s.per_context_regret_curve.mean.size() == 500);
    CHECK(s.optimal_fraction_curve.mean.size() == 500);
    for (double f : s.optimal_fraction_curve.mean) {
      CHECK(f >= 0.0);
      CHECK(f <= 1.0);
    }
  }
}

TEST_CASE("choice entropy lies in [0, log k]") {
  auto cfg = preset("appendixF");
  cfg.n_seeds = 5;
  const auto logs = run_agent(cfg, cfg.agents.front(), 1);
  for (const auto& log : logs) {
    const auto e = choice_entropy_by_epoch(log, *cfg.stimulation);
    CHECK(e.stimulated >= 0.0);
    CHECK(e.stimulated <= std::log(2.0) + 1e-12);
    CHECK(e.non_stimulated >= 0.0);
    CHECK(e.non_stimulated <= std::log(2.0) + 1e-12);
  }
}

TEST_CASE("parallel and serial runs agree") {
  auto cfg = preset("fig2");
  cfg.n_seeds = 4;
  const auto serial = run_comparison(cfg, 1);
  const auto parallel = run_comparison(cfg, 3);
  for (std::size_t i = 0; i < serial.summaries.size(); ++i) {
    CHECK(serial.summaries[i].final_cumulative_regrets ==
          parallel.summaries[i].final_cumulative_regrets);
    CHECK(serial.summaries[i].per_context_regret_curve.mean ==
          parallel.summaries[i].per_context_regret_curve.mean);
  }
}

TEST_CASE("fast regret path matches the logged run") {
  auto cfg = preset("fig2");
  for (const auto& agent : cfg.agents)
    CHECK(run_cumulative_regret(cfg, agent, 3) == cumulative_regret(run_single(cfg, agent, 3)));
}

TEST_CASE("grid search is deterministic") {
  auto cfg = gaussian(5, 1000);
  cfg.n_seeds = 4;
  GridSpec grid;
  grid.ducb = DucbGrid{{0.99, 0.9999}, {0.5, 1.0}, {0.25, 0.5}};
  const auto a = grid_search(AgentKind::kDiscountedUcb, grid, cfg, 1);
  const auto b = grid_search(AgentKind::kDiscountedUcb, grid, cfg, 2);
  CHECK(a.best == b.best);
  for (std::size_t i = 0; i < a.rows.size(); ++i)
    CHECK(a.rows[i].mean_final_regret == b.rows[i].mean_final_regret);
}

TEST_CASE("every agent sees the same contexts for a seed") {
  auto cfg = preset("fig2");
  const auto a = run_single(cfg, cfg.agents[0], 6);
  const auto b = run_single(cfg, cfg.agents[4], 6);
  REQUIRE(a.contexts.size() == b.contexts.size());
  for (std::size_t c = 0; c < a.contexts.size(); ++c)
    CHECK(a.contexts[c].means() == b.contexts[c].means());
  CHECK(a.optimal_arm == b.optimal_arm);
}
