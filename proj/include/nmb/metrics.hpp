#pragma once

// Metrics over trajectory logs. Per-context curves cut each log at its
// switch steps, keep only complete contexts and truncate them to the minimum
// block length so every curve has exactly that many points.

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "nmb/experiment.hpp"
#include "nmb/harness.hpp"

namespace nmb {

struct AlignedCurve {
  std::vector<double> mean;
  // Pointwise standard deviation of the per-seed mean curves.
  std::vector<double> dispersion;
  std::size_t n_segments = 0;
  std::size_t n_seeds = 0;
};

// [start, end) of each context in the log.
std::vector<std::pair<std::size_t, std::size_t>> context_segments(const TrajectoryLog& log);

// Throws EmptyResultError when no log contains a complete context block.
AlignedCurve per_context_regret(std::span<const TrajectoryLog> logs, std::int64_t block_length);
AlignedCurve optimal_fraction(std::span<const TrajectoryLog> logs, std::int64_t block_length);

// Per step: mean over arms of (policy value - true mean)^2.
std::vector<double> value_mse(const TrajectoryLog& log);
std::vector<double> value_mse(const TrajectoryLog& log,
                              std::span<const std::vector<double>> truth_sequence);

double cumulative_regret(const TrajectoryLog& log);

// Mean instantaneous regret over the last `tail` steps of every complete
// context (aligned to block_length), averaged over contexts.
double final_average_regret(const TrajectoryLog& log, std::int64_t block_length,
                            std::int64_t tail);

// Plug-in entropy (nats) of the empirical arm frequencies in [start, end).
double choice_entropy(const TrajectoryLog& log, std::size_t start, std::size_t end);

struct EpochSplit {
  std::vector<std::pair<std::size_t, std::size_t>> inside;
  std::vector<std::pair<std::size_t, std::size_t>> outside;
};

// Stimulation epochs and the maximal gaps between them, clipped to the log.
EpochSplit split_epochs(const StimulationSchedule& schedule, std::size_t total_steps);

struct EpochEntropy {
  double stimulated = 0.0;
  double non_stimulated = 0.0;
};

EpochEntropy choice_entropy_by_epoch(const TrajectoryLog& log,
                                     const StimulationSchedule& schedule);

// Fraction of steps in the windows where the chosen arm equals the greedy arm
// (greedy = true) or the optimal arm (greedy = false).
double window_fraction(const TrajectoryLog& log,
                       std::span<const std::pair<std::size_t, std::size_t>> windows,
                       bool greedy);

// Switch-aligned means of a per-step series over [s + from, s + to) for every
// switch step s whose window fits in the log; averaged over switches.
// Returns nullopt when no switch qualifies.
std::optional<double> switch_window_mean(const TrajectoryLog& log,
                                         std::span<const double> series, std::int64_t from,
                                         std::int64_t to);

// Mean of alpha over arms at every step.
std::vector<double> mean_alpha_series(const TrajectoryLog& log);

struct MetricSummary {
  std::string agent;
  double cumulative_regret = 0.0;  // mean over seeds
  double final_avg_regret = 0.0;   // mean over seeds
  std::vector<double> final_cumulative_regrets;  // one per seed
  std::vector<double> final_avg_regrets;         // one per seed
  AlignedCurve per_context_regret_curve;
  AlignedCurve optimal_fraction_curve;
  std::vector<double> value_mse_curve;  // mean over seeds
  std::optional<EpochEntropy> choice_entropy_by_epoch;
};

inline constexpr std::int64_t kFinalRegretTail = 50;

MetricSummary summarize(std::span<const TrajectoryLog> logs, std::int64_t block_length,
                        const StimulationSchedule* schedule = nullptr);

}  // namespace nmb
