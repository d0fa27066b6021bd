#include "nmb/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "nmb/errors.hpp"

namespace nmb {

std::vector<std::pair<std::size_t, std::size_t>> context_segments(const TrajectoryLog& log) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const std::size_t n = log.size();
  if (n == 0) return out;
  std::size_t start = 0;
  for (std::size_t t = 1; t < n; ++t) {
    if (log.switched[t]) {
      out.emplace_back(start, t);
      start = t;
    }
  }
  out.emplace_back(start, n);
  return out;
}

namespace {

AlignedCurve aligned_curve(std::span<const TrajectoryLog> logs, std::int64_t block_length,
                           const std::function<double(const TrajectoryLog&, std::size_t)>& value) {
  if (block_length < 1) throw std::invalid_argument("block_length must be >= 1");
  const auto m = static_cast<std::size_t>(block_length);
  AlignedCurve curve;
  curve.mean.assign(m, 0.0);
  std::vector<std::vector<double>> per_seed;

  for (const auto& log : logs) {
    std::vector<double> seed_sum(m, 0.0);
    std::size_t seed_segments = 0;
    for (const auto& [start, end] : context_segments(log)) {
      if (end - start < m) continue;
      for (std::size_t i = 0; i < m; ++i) seed_sum[i] += value(log, start + i);
      ++seed_segments;
    }
    if (seed_segments == 0) continue;
    for (std::size_t i = 0; i < m; ++i) curve.mean[i] += seed_sum[i];
    curve.n_segments += seed_segments;
    for (double& x : seed_sum) x /= static_cast<double>(seed_segments);
    per_seed.push_back(std::move(seed_sum));
  }
  if (curve.n_segments == 0) throw EmptyResultError("no complete context block in the logs");

  for (double& x : curve.mean) x /= static_cast<double>(curve.n_segments);
  curve.n_seeds = per_seed.size();
  curve.dispersion.assign(m, 0.0);
  if (per_seed.size() > 1) {
    for (std::size_t i = 0; i < m; ++i) {
      double mu = 0.0;
      for (const auto& s : per_seed) mu += s[i];
      mu /= static_cast<double>(per_seed.size());
      double ss = 0.0;
      for (const auto& s : per_seed) ss += (s[i] - mu) * (s[i] - mu);
      curve.dispersion[i] = std::sqrt(ss / static_cast<double>(per_seed.size() - 1));
    }
  }
  return curve;
}

}  // namespace

AlignedCurve per_context_regret(std::span<const TrajectoryLog> logs, std::int64_t block_length) {
  return aligned_curve(logs, block_length,
                       [](const TrajectoryLog& log, std::size_t t) { return log.regret[t]; });
}

AlignedCurve optimal_fraction(std::span<const TrajectoryLog> logs, std::int64_t block_length) {
  return aligned_curve(logs, block_length, [](const TrajectoryLog& log, std::size_t t) {
    return log.arm[t] == log.optimal_arm[t] ? 1.0 : 0.0;
  });
}

std::vector<double> value_mse(const TrajectoryLog& log,
                              std::span<const std::vector<double>> truth_sequence) {
  std::vector<double> out(log.size(), 0.0);
  for (std::size_t t = 0; t < log.size(); ++t) {
    const auto& truth = truth_sequence[t];
    double total = 0.0;
    for (std::size_t a = 0; a < log.k; ++a) {
      const double err = log.value_at(t, a) - truth[a];
      total += err * err;
    }
    out[t] = total / static_cast<double>(log.k);
  }
  return out;
}

std::vector<double> value_mse(const TrajectoryLog& log) {
  std::vector<std::vector<double>> means_by_context;
  means_by_context.reserve(log.contexts.size());
  for (const auto& ctx : log.contexts) means_by_context.push_back(ctx.means());
  std::vector<double> out(log.size(), 0.0);
  for (std::size_t t = 0; t < log.size(); ++t) {
    const auto& truth = means_by_context[static_cast<std::size_t>(log.context_id[t])];
    double total = 0.0;
    for (std::size_t a = 0; a < log.k; ++a) {
      const double err = log.value_at(t, a) - truth[a];
      total += err * err;
    }
    out[t] = total / static_cast<double>(log.k);
  }
  return out;
}

double cumulative_regret(const TrajectoryLog& log) {
  double total = 0.0;
  for (double r : log.regret) total += r;
  return total;
}

double final_average_regret(const TrajectoryLog& log, std::int64_t block_length,
                            std::int64_t tail) {
  const auto m = static_cast<std::size_t>(block_length);
  const auto w = static_cast<std::size_t>(std::clamp<std::int64_t>(tail, 1, block_length));
  double total = 0.0;
  std::size_t segments = 0;
  for (const auto& [start, end] : context_segments(log)) {
    if (end - start < m) continue;
    double s = 0.0;
    for (std::size_t t = start + m - w; t < start + m; ++t) s += log.regret[t];
    total += s / static_cast<double>(w);
    ++segments;
  }
  if (segments == 0) throw EmptyResultError("no complete context block in the log");
  return total / static_cast<double>(segments);
}

double choice_entropy(const TrajectoryLog& log, std::size_t start, std::size_t end) {
  end = std::min(end, log.size());
  if (end <= start) return 0.0;
  std::vector<double> counts(log.k, 0.0);
  for (std::size_t t = start; t < end; ++t) counts[static_cast<std::size_t>(log.arm[t])] += 1.0;
  const double n = static_cast<double>(end - start);
  double h = 0.0;
  for (double c : counts) {
    if (c > 0.0) h -= (c / n) * std::log(c / n);
  }
  return h;
}

EpochSplit split_epochs(const StimulationSchedule& schedule, std::size_t total_steps) {
  EpochSplit split;
  std::size_t cursor = 0;
  for (const auto& [s, e] : schedule.epochs) {
    const auto start = std::min(static_cast<std::size_t>(s), total_steps);
    const auto end = std::min(static_cast<std::size_t>(e), total_steps);
    if (start > cursor) split.outside.emplace_back(cursor, start);
    if (end > start) split.inside.emplace_back(start, end);
    cursor = std::max(cursor, end);
  }
  if (cursor < total_steps) split.outside.emplace_back(cursor, total_steps);
  return split;
}

EpochEntropy choice_entropy_by_epoch(const TrajectoryLog& log,
                                     const StimulationSchedule& schedule) {
  const EpochSplit split = split_epochs(schedule, log.size());
  auto mean_entropy = [&](const auto& windows) {
    if (windows.empty()) return 0.0;
    double total = 0.0;
    for (const auto& [s, e] : windows) total += choice_entropy(log, s, e);
    return total / static_cast<double>(windows.size());
  };
  return {mean_entropy(split.inside), mean_entropy(split.outside)};
}

double window_fraction(const TrajectoryLog& log,
                       std::span<const std::pair<std::size_t, std::size_t>> windows,
                       bool greedy) {
  double hits = 0.0;
  double n = 0.0;
  for (const auto& [s, e] : windows) {
    for (std::size_t t = s; t < std::min(e, log.size()); ++t) {
      const int target = greedy ? log.greedy_arm[t] : log.optimal_arm[t];
      hits += log.arm[t] == target ? 1.0 : 0.0;
      n += 1.0;
    }
  }
  return n > 0.0 ? hits / n : 0.0;
}

std::optional<double> switch_window_mean(const TrajectoryLog& log,
                                         std::span<const double> series, std::int64_t from,
                                         std::int64_t to) {
  const auto n = static_cast<std::int64_t>(log.size());
  double total = 0.0;
  std::size_t windows = 0;
  for (std::int64_t s = 1; s < n; ++s) {
    if (!log.switched[static_cast<std::size_t>(s)]) continue;
    const std::int64_t lo = s + from;
    const std::int64_t hi = s + to;
    if (lo < 0 || hi > n || hi <= lo) continue;
    double w = 0.0;
    for (std::int64_t t = lo; t < hi; ++t) w += series[static_cast<std::size_t>(t)];
    total += w / static_cast<double>(hi - lo);
    ++windows;
  }
  if (windows == 0) return std::nullopt;
  return total / static_cast<double>(windows);
}

std::vector<double> mean_alpha_series(const TrajectoryLog& log) {
  std::vector<double> out(log.size(), 0.0);
  for (std::size_t t = 0; t < log.size(); ++t) {
    double s = 0.0;
    for (std::size_t a = 0; a < log.k; ++a) s += log.alpha_at(t, a);
    out[t] = s / static_cast<double>(log.k);
  }
  return out;
}

MetricSummary summarize(std::span<const TrajectoryLog> logs, std::int64_t block_length,
                        const StimulationSchedule* schedule) {
  if (logs.empty()) throw EmptyResultError("no logs to summarize");
  MetricSummary s;
  s.agent = logs.front().agent;
  for (const auto& log : logs) {
    s.final_cumulative_regrets.push_back(cumulative_regret(log));
    s.final_avg_regrets.push_back(final_average_regret(log, block_length, kFinalRegretTail));
  }
  const auto n = static_cast<double>(logs.size());
  for (double x : s.final_cumulative_regrets) s.cumulative_regret += x / n;
  for (double x : s.final_avg_regrets) s.final_avg_regret += x / n;
  s.per_context_regret_curve = per_context_regret(logs, block_length);
  s.optimal_fraction_curve = optimal_fraction(logs, block_length);

  s.value_mse_curve.assign(logs.front().size(), 0.0);
  for (const auto& log : logs) {
    const auto mse = value_mse(log);
    for (std::size_t t = 0; t < std::min(mse.size(), s.value_mse_curve.size()); ++t)
      s.value_mse_curve[t] += mse[t] / n;
  }
  if (schedule != nullptr) {
    EpochEntropy e;
    for (const auto& log : logs) {
      const auto h = choice_entropy_by_epoch(log, *schedule);
      e.stimulated += h.stimulated / n;
      e.non_stimulated += h.non_stimulated / n;
    }
    s.choice_entropy_by_epoch = e;
  }
  return s;
}

}  // namespace nmb
