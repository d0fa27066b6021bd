// Acceptance checks: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria. Usage: nmb_acceptance <path to nmb_tests>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nmb/config_io.hpp"
#include "nmb/harness.hpp"
#include "nmb/metrics.hpp"
#include "nmb/presets.hpp"
#include "nmb/stats.hpp"
#include "nmb/studies.hpp"

using namespace nmb;

namespace {

constexpr int kSeeds = 50;
constexpr double kTukeyAlpha = 0.1;

int failures = 0;

void report(const std::string& name, bool pass, const std::string& detail) {
  std::printf("%s  %-28s %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

const MetricSummary& summary_of(const ComparisonResult& r, const std::string& agent) {
  for (const auto& s : r.summaries)
    if (s.agent == agent) return s;
  throw std::runtime_error("no agent " + agent);
}

double tukey_p(const stats::AnovaResult& r, const std::string& a, const std::string& b) {
  for (const auto& p : r.pairs)
    if ((p.first == a && p.second == b) || (p.first == b && p.second == a)) return p.p_value;
  throw std::runtime_error("no pair " + a + "/" + b);
}

void closed_form_suite(const char* unit_binary) {
  if (unit_binary == nullptr) {
    report("closed_form_suite", false, "path to nmb_tests not given");
    return;
  }
  const auto start = std::chrono::steady_clock::now();
  const std::string cmd = std::string("\"") + unit_binary + "\" -ts=closed_form >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  const double elapsed = seconds_since(start);
  report("closed_form_suite", status == 0 && elapsed < 1.0,
         fmt("exit=%d runtime=%.3fs (limit 1s)", status, elapsed));
}

struct TraceWindows {
  double alpha_pre = 0, alpha_post = 0, alpha_late = 0;
  double temp_pre = 0, temp_post = 0, temp_late = 0;

  bool spikes_and_decays() const {
    return alpha_post > alpha_pre && temp_post > temp_pre && alpha_post > alpha_late &&
           temp_post > temp_late;
  }
};

TraceWindows trace_windows(const std::vector<TrajectoryLog>& logs) {
  TraceWindows w;
  int n = 0;
  for (const auto& log : logs) {
    const auto alpha = mean_alpha_series(log);
    const auto a0 = switch_window_mean(log, alpha, -50, 0);
    const auto a1 = switch_window_mean(log, alpha, 0, 50);
    const auto a2 = switch_window_mean(log, alpha, 200, 250);
    const auto t0 = switch_window_mean(log, log.temperature, -50, 0);
    const auto t1 = switch_window_mean(log, log.temperature, 0, 50);
    const auto t2 = switch_window_mean(log, log.temperature, 200, 250);
    if (!a0 || !a1 || !a2) continue;
    w.alpha_pre += *a0;
    w.alpha_post += *a1;
    w.alpha_late += *a2;
    w.temp_pre += *t0;
    w.temp_post += *t1;
    w.temp_late += *t2;
    ++n;
  }
  if (n > 0) {
    for (double* x : {&w.alpha_pre, &w.alpha_post, &w.alpha_late, &w.temp_pre, &w.temp_post,
                      &w.temp_late})
      *x /= n;
  }
  return w;
}

void fig2_criteria() {
  auto cfg = preset("fig2");
  cfg.n_seeds = kSeeds;
  const auto start = std::chrono::steady_clock::now();
  const auto r = run_comparison(cfg, 1);
  const double elapsed = seconds_since(start);

  const double learned = summary_of(r, "doya_dayu").cumulative_regret;
  const double aleatoric = summary_of(r, "aleatoric_oracle").cumulative_regret;
  const double full = summary_of(r, "full_oracle").cumulative_regret;
  const double p_fa = tukey_p(r.final_cumulative_regret_anova, "full_oracle", "aleatoric_oracle");
  const double p_al = tukey_p(r.final_cumulative_regret_anova, "aleatoric_oracle", "doya_dayu");
  report("oracle_ordering",
         full <= aleatoric && aleatoric <= learned && p_fa < kTukeyAlpha &&
             p_al < kTukeyAlpha && elapsed <= 300.0,
         fmt("full %.0f <= aleatoric %.0f (p=%.2g) <= learned %.0f (p=%.2g); %d seeds, %.1fs",
             full, aleatoric, p_fa, learned, p_al, kSeeds, elapsed));

  const double boltzmann = summary_of(r, "boltzmann").cumulative_regret;
  const double ducb = summary_of(r, "ducb").cumulative_regret;
  report("baseline_comparison", full < boltzmann && full < ducb,
         fmt("full %.0f < boltzmann %.0f and < ducb %.0f", full, boltzmann, ducb));

  // Adaptive traces are judged on the oracle variants; the learned variant is
  // printed alongside.
  bool pass = true;
  std::string detail;
  for (const auto& agent : cfg.agents) {
    if (agent.kind != AgentKind::kDoyaDayu) continue;
    const auto w = trace_windows(run_agent(cfg, agent, 1));
    const bool judged = agent.doya_dayu.mode != DoyaDayuMode::kLearned;
    if (judged) pass = pass && w.spikes_and_decays();
    detail += fmt("%s%s alpha %.3f/%.3f/%.3f temp %.3f/%.3f/%.3f%s; ", agent.name.c_str(),
                  judged ? "" : " (not judged)", w.alpha_pre, w.alpha_post, w.alpha_late,
                  w.temp_pre, w.temp_post, w.temp_late, w.spikes_and_decays() ? "" : " flat");
  }
  report("adaptive_traces", pass, "pre/post/+200 " + detail);
}

void grid_criteria() {
  auto cfg = preset("gridD");
  cfg.n_seeds = kSeeds;
  const auto start = std::chrono::steady_clock::now();
  const auto b = grid_search(AgentKind::kBoltzmann, *cfg.grid, cfg, 1);
  const auto d = grid_search(AgentKind::kDiscountedUcb, *cfg.grid, cfg, 1);
  const double elapsed = seconds_since(start);
  const auto bs = b.best_spec();
  const auto ds = d.best_spec();
  const bool boltzmann_ok = std::abs(bs.learning_rate - 0.25) <= 0.10 + 1e-12 &&
                            std::abs(bs.inverse_temperature - 0.25) <= 0.10 + 1e-12;
  report("grid_search", boltzmann_ok && ds.gamma == 0.9999,
         fmt("boltzmann best (lr %.2f, beta %.2f) want (0.25, 0.25) +-0.10; ducb best gamma "
             "%.4f xi %.1f lr %.2f want gamma 0.9999; %d seeds, %.1fs",
             bs.learning_rate, bs.inverse_temperature, ds.gamma, ds.xi, ds.learning_rate,
             kSeeds, elapsed));
}

void stimulation_criteria() {
  auto cfg = preset("appendixF");
  cfg.n_seeds = kSeeds;
  const auto r = stimulation_experiment(cfg, 1);
  const double greedy_gap = 100.0 * (r.greedy_control_inside - r.greedy_stim_inside);
  const double acc_gap = 100.0 * (r.accuracy_control_inside - r.accuracy_stim_inside);
  const double outside_gap = 100.0 * std::abs(r.accuracy_control_outside - r.accuracy_stim_outside);
  report("stimulation_orderings", greedy_gap > 5.0 && acc_gap > 5.0 && outside_gap <= 3.0,
         fmt("greedy in-epoch %.1f%% vs control %.1f%% (gap %.1f > 5); accuracy in-epoch %.1f%% "
             "vs %.1f%% (gap %.1f > 5); outside %.1f%% vs %.1f%% (gap %.1f <= 3)",
             100 * r.greedy_stim_inside, 100 * r.greedy_control_inside, greedy_gap,
             100 * r.accuracy_stim_inside, 100 * r.accuracy_control_inside, acc_gap,
             100 * r.accuracy_stim_outside, 100 * r.accuracy_control_outside, outside_gap));
}

void stats_oracle() {
  std::ifstream in(NMB_SOURCE_DIR "/tests/fixtures/stats_reference.json");
  const auto ref = nlohmann::json::parse(in);
  double worst = 0.0;
  std::size_t n = 0;
  for (const auto& f : ref["anova_tukey"]) {
    std::map<std::string, std::vector<double>> groups;
    for (const auto& [name, values] : f["groups"].items())
      groups[name] = values.get<std::vector<double>>();
    const auto r = stats::anova_tukey(groups);
    worst = std::max(worst, std::abs(r.p_value - f["p_value"].get<double>()));
    for (std::size_t i = 0; i < r.pairs.size(); ++i)
      worst = std::max(worst, std::abs(r.pairs[i].p_value - f["pairs"][i]["p_value"].get<double>()));
    ++n;
  }
  report("stats_oracle_equivalence", n == 10 && worst < 1e-6,
         fmt("%zu fixtures, max |dp| = %.2g vs scipy %s", n, worst,
             ref["scipy_version"].get<std::string>().c_str()));
}

std::string csv_of(const TrajectoryLog& log) {
  std::ostringstream out;
  write_trajectory_csv(out, log);
  return out.str();
}

void determinism() {
  bool same = true;
  std::size_t files = 0;
  for (const std::string name : {"fig2", "appendixF"}) {
    auto cfg = preset(name);
    cfg.n_seeds = 3;
    for (const auto& agent : cfg.agents) {
      const auto a = run_agent(cfg, agent, 1);
      const auto b = run_agent(cfg, agent, 2);
      for (std::size_t i = 0; i < a.size(); ++i, ++files) same = same && csv_of(a[i]) == csv_of(b[i]);
    }
  }
  auto grid = preset("gridD");
  grid.n_seeds = 2;
  const auto g1 = to_json(grid_search(AgentKind::kDiscountedUcb, *grid.grid, grid, 1)).dump();
  const auto g2 = to_json(grid_search(AgentKind::kDiscountedUcb, *grid.grid, grid, 2)).dump();
  report("determinism", same && g1 == g2,
         fmt("%zu CSV pairs byte-identical: %s; gridD tables identical: %s", files,
             same ? "yes" : "no", g1 == g2 ? "yes" : "no"));
}

}  // namespace

int main(int argc, char** argv) {
  try {
    closed_form_suite(argc > 1 ? argv[1] : nullptr);
    fig2_criteria();
    grid_criteria();
    stimulation_criteria();
    stats_oracle();
    determinism();
  } catch (const std::exception& e) {
    std::printf("FAIL  acceptance aborted: %s\n", e.what());
    return 100;
  }
  std::printf("%d criteria failed\n", failures);
  return failures;
}
