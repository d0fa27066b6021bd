#pragma once

// Non-stationary bandit environments.
//
//  * GaussianBandit: k arms with normally distributed payouts. Contexts last
//    a multiple of `block_length` steps; at each block boundary a Bernoulli(p)
//    trial decides whether every arm is resampled.
//  * BernoulliReversalBandit: two arms paying `reward_magnitude` with
//    complementary success probabilities that swap every `reversal_period`
//    steps.
//
// Both expose the current context as a ContextSpec (per-arm mean and std) so
// regret and oracle uncertainties are computed the same way for either.

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "nmb/rng.hpp"

namespace nmb {

struct ArmDistribution {
  double mean = 0.0;
  double std = 1.0;

  double variance() const { return std * std; }
};

struct ContextSpec {
  std::vector<ArmDistribution> arms;
  int context_id = 0;

  std::size_t k() const { return arms.size(); }
  // Ties broken by lowest index.
  std::size_t optimal_arm() const;
  double optimal_mean() const { return arms[optimal_arm()].mean; }
  std::vector<double> means() const;
};

struct GaussianBanditConfig {
  int k = 5;
  double p = 0.4;
  int block_length = 500;
  double mu_min = -5.0;
  double mu_max = 5.0;
  double sigma_min = 0.001;
  double sigma_max = 2.0;
  std::int64_t total_steps = 10000;
  std::uint64_t seed = 0;

  // Throws ConfigError naming the offending field.
  void validate() const;
  bool operator==(const GaussianBanditConfig&) const = default;
};

struct BernoulliReversalConfig {
  std::array<double, 2> success_probabilities{0.8, 0.2};
  double reward_magnitude = 1.0;
  int reversal_period = 500;
  std::int64_t total_steps = 4000;
  std::uint64_t seed = 0;

  void validate() const;
  bool operator==(const BernoulliReversalConfig&) const = default;
};

struct BanditState {
  ContextSpec current_context;
  std::int64_t step = 0;
  std::vector<std::int64_t> switch_history;
};

struct StepInfo {
  int context_id = 0;
  std::size_t optimal_arm = 0;
  double optimal_mean = 0.0;
  double chosen_mean = 0.0;
  // True on the first step of a context that replaced an earlier one.
  bool switched = false;

  double regret() const { return optimal_mean - chosen_mean; }
};

struct StepResult {
  double reward = 0.0;
  StepInfo info;
};

// Draws every arm's mean ~ U[mu_min, mu_max] and std ~ U[sigma_min, sigma_max].
ContextSpec sample_context(Rng& rng, const GaussianBanditConfig& cfg,
                           int context_id);

ContextSpec bernoulli_context(std::array<double, 2> probabilities,
                              double reward_magnitude, int context_id);

class Environment {
 public:
  virtual ~Environment() = default;

  // Pulls `arm` at the current step and advances the step counter.
  // Throws std::out_of_range for an invalid arm.
  virtual StepResult step(std::size_t arm) = 0;
  // Called once per step after step(); returns true when the context changed.
  virtual bool maybe_switch() = 0;

  virtual const BanditState& state() const = 0;
  virtual std::size_t k() const = 0;
  virtual std::int64_t total_steps() const = 0;
  // Smallest possible context length, used to align per-context curves.
  virtual std::int64_t min_block_length() const = 0;

  const ContextSpec& context() const { return state().current_context; }
};

class GaussianBandit final : public Environment {
 public:
  explicit GaussianBandit(GaussianBanditConfig cfg);

  StepResult step(std::size_t arm) override;
  bool maybe_switch() override;

  const BanditState& state() const override { return state_; }
  std::size_t k() const override { return static_cast<std::size_t>(cfg_.k); }
  std::int64_t total_steps() const override { return cfg_.total_steps; }
  std::int64_t min_block_length() const override { return cfg_.block_length; }
  const GaussianBanditConfig& config() const { return cfg_; }

 private:
  GaussianBanditConfig cfg_;
  Rng context_rng_;
  Rng switch_rng_;
  BanditState state_;
  bool pending_switch_flag_ = false;
};

class BernoulliReversalBandit final : public Environment {
 public:
  explicit BernoulliReversalBandit(BernoulliReversalConfig cfg);

  StepResult step(std::size_t arm) override;
  bool maybe_switch() override;

  const BanditState& state() const override { return state_; }
  std::size_t k() const override { return 2; }
  std::int64_t total_steps() const override { return cfg_.total_steps; }
  std::int64_t min_block_length() const override { return cfg_.reversal_period; }
  const BernoulliReversalConfig& config() const { return cfg_; }

  // Current success probability of each arm.
  const std::array<double, 2>& probabilities() const { return probabilities_; }

 private:
  BernoulliReversalConfig cfg_;
  std::array<double, 2> probabilities_;
  BanditState state_;
  bool pending_switch_flag_ = false;
};

}  // namespace nmb
