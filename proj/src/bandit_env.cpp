#include "nmb/bandit_env.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "nmb/errors.hpp"

namespace nmb {

std::size_t ContextSpec::optimal_arm() const {
  std::size_t best = 0;
  for (std::size_t a = 1; a < arms.size(); ++a) {
    if (arms[a].mean > arms[best].mean) best = a;
  }
  return best;
}

std::vector<double> ContextSpec::means() const {
  std::vector<double> out;
  out.reserve(arms.size());
  for (const auto& arm : arms) out.push_back(arm.mean);
  return out;
}

void GaussianBanditConfig::validate() const {
  if (k < 1) throw ConfigError("k", "arm count must be >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("p", "switch probability must lie in [0, 1]");
  if (block_length < 1) throw ConfigError("block_length", "must be >= 1");
  if (!(mu_min <= mu_max)) throw ConfigError("mu_min", "mu_min must not exceed mu_max");
  if (!(sigma_min > 0.0)) throw ConfigError("sigma_min", "sigma_min must be > 0");
  if (!(sigma_min <= sigma_max))
    throw ConfigError("sigma_min", "sigma_min must not exceed sigma_max");
  if (total_steps < 0) throw ConfigError("total_steps", "must be >= 0");
}

void BernoulliReversalConfig::validate() const {
  for (double q : success_probabilities) {
    if (!(q >= 0.0 && q <= 1.0))
      throw ConfigError("success_probabilities", "each probability must lie in [0, 1]");
  }
  if (std::abs(success_probabilities[0] + success_probabilities[1] - 1.0) > 1e-12)
    throw ConfigError("success_probabilities", "probabilities must sum to 1");
  if (!(reward_magnitude > 0.0)) throw ConfigError("reward_magnitude", "must be > 0");
  if (reversal_period < 1) throw ConfigError("reversal_period", "must be >= 1");
  if (total_steps < 0) throw ConfigError("total_steps", "must be >= 0");
}

ContextSpec sample_context(Rng& rng, const GaussianBanditConfig& cfg, int context_id) {
  ContextSpec ctx;
  ctx.context_id = context_id;
  ctx.arms.reserve(static_cast<std::size_t>(cfg.k));
  for (int a = 0; a < cfg.k; ++a) {
    const double mean = rng.uniform(cfg.mu_min, cfg.mu_max);
    const double std = rng.uniform(cfg.sigma_min, cfg.sigma_max);
    ctx.arms.push_back({mean, std});
  }
  return ctx;
}

ContextSpec bernoulli_context(std::array<double, 2> probabilities, double reward_magnitude,
                              int context_id) {
  ContextSpec ctx;
  ctx.context_id = context_id;
  for (double q : probabilities) {
    ctx.arms.push_back({reward_magnitude * q, reward_magnitude * std::sqrt(q * (1.0 - q))});
  }
  return ctx;
}

namespace {

void check_arm(std::size_t arm, std::size_t k) {
  if (arm >= k) {
    throw std::out_of_range("arm index " + std::to_string(arm) + " out of range for " +
                            std::to_string(k) + " arms");
  }
}

}  // namespace

GaussianBandit::GaussianBandit(GaussianBanditConfig cfg)
    : cfg_(cfg), context_rng_(cfg.seed, Stream::kContext), switch_rng_(cfg.seed, Stream::kSwitch) {
  cfg_.validate();
  state_.current_context = sample_context(context_rng_, cfg_, 0);
}

StepResult GaussianBandit::step(std::size_t arm) {
  const auto& ctx = state_.current_context;
  check_arm(arm, ctx.k());
  const auto& dist = ctx.arms[arm];
  const auto t = static_cast<std::uint64_t>(state_.step);

  StepResult out;
  out.reward = dist.mean + dist.std * counter_normal(cfg_.seed, t, arm);
  out.info.context_id = ctx.context_id;
  out.info.optimal_arm = ctx.optimal_arm();
  out.info.optimal_mean = ctx.optimal_mean();
  out.info.chosen_mean = dist.mean;
  out.info.switched = pending_switch_flag_;
  pending_switch_flag_ = false;
  ++state_.step;
  return out;
}

bool GaussianBandit::maybe_switch() {
  if (state_.step <= 0 || state_.step % cfg_.block_length != 0) return false;
  // One trial per block boundary, drawn even when p is 0 or 1 so the stream
  // position depends only on the step count.
  if (!switch_rng_.bernoulli(cfg_.p)) return false;
  state_.current_context =
      sample_context(context_rng_, cfg_, state_.current_context.context_id + 1);
  state_.switch_history.push_back(state_.step);
  pending_switch_flag_ = true;
  return true;
}

BernoulliReversalBandit::BernoulliReversalBandit(BernoulliReversalConfig cfg)
    : cfg_(cfg), probabilities_(cfg.success_probabilities) {
  cfg_.validate();
  state_.current_context = bernoulli_context(probabilities_, cfg_.reward_magnitude, 0);
}

StepResult BernoulliReversalBandit::step(std::size_t arm) {
  check_arm(arm, 2);
  const auto& ctx = state_.current_context;
  const auto t = static_cast<std::uint64_t>(state_.step);

  StepResult out;
  const bool success = counter_uniform(cfg_.seed, t, arm) < probabilities_[arm];
  out.reward = success ? cfg_.reward_magnitude : 0.0;
  out.info.context_id = ctx.context_id;
  out.info.optimal_arm = ctx.optimal_arm();
  out.info.optimal_mean = ctx.optimal_mean();
  out.info.chosen_mean = ctx.arms[arm].mean;
  out.info.switched = pending_switch_flag_;
  pending_switch_flag_ = false;
  ++state_.step;
  return out;
}

bool BernoulliReversalBandit::maybe_switch() {
  if (state_.step <= 0 || state_.step % cfg_.reversal_period != 0) return false;
  std::swap(probabilities_[0], probabilities_[1]);
  state_.current_context = bernoulli_context(probabilities_, cfg_.reward_magnitude,
                                             state_.current_context.context_id + 1);
  state_.switch_history.push_back(state_.step);
  pending_switch_flag_ = true;
  return true;
}

}  // namespace nmb
