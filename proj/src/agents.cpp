#include "nmb/agents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "nmb/errors.hpp"

namespace nmb {

std::vector<double> softmax_policy(std::span<const double> values, double beta) {
  if (values.empty()) throw std::invalid_argument("softmax_policy: empty value vector");
  if (std::isnan(beta) || beta < 0.0)
    throw std::invalid_argument("softmax_policy: beta must be finite and >= 0");
  double vmax = -std::numeric_limits<double>::infinity();
  for (double v : values) {
    if (std::isnan(v)) throw std::invalid_argument("softmax_policy: NaN value");
    vmax = std::max(vmax, v);
  }
  std::vector<double> p(values.size());
  if (std::isinf(beta)) {
    // Greedy limit: uniform over the maximizers.
    std::size_t n_max = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      p[i] = values[i] == vmax ? 1.0 : 0.0;
      n_max += values[i] == vmax ? 1 : 0;
    }
    for (double& x : p) x /= static_cast<double>(n_max);
    return p;
  }
  double total = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    // beta * (v - vmax) <= 0, with 0 * -inf treated as 0.
    const double z = beta == 0.0 ? 0.0 : beta * (values[i] - vmax);
    p[i] = std::exp(z);
    total += p[i];
  }
  for (double& x : p) x /= total;
  return p;
}

std::size_t sample_categorical(std::span<const double> probabilities, Rng& rng) {
  const double u = rng.uniform();
  double cumulative = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    cumulative += probabilities[i];
    if (u < cumulative) return i;
  }
  // Rounding left u above the final cumulative sum; take the last arm with mass.
  for (std::size_t i = probabilities.size(); i-- > 0;) {
    if (probabilities[i] > 0.0) return i;
  }
  return 0;
}

double adaptive_alpha(double epistemic, double aleatoric) {
  const double total = epistemic + aleatoric;
  if (total < kDivisionEpsilon) return 0.0;
  return epistemic / total;
}

double adaptive_beta(const Uncertainties& u) {
  double mean_e = 0.0;
  if (!u.epistemic.empty()) {
    mean_e = std::accumulate(u.epistemic.begin(), u.epistemic.end(), 0.0) /
             static_cast<double>(u.epistemic.size());
  }
  return 1.0 / std::max(mean_e, kBetaEpsilon);
}

std::string_view to_string(DoyaDayuMode mode) {
  switch (mode) {
    case DoyaDayuMode::kLearned:
      return "learned";
    case DoyaDayuMode::kAleatoricOracle:
      return "aleatoric_oracle";
    case DoyaDayuMode::kFullOracle:
      return "full_oracle";
  }
  return "learned";
}

DoyaDayuMode doya_dayu_mode_from_string(std::string_view name) {
  if (name == "learned") return DoyaDayuMode::kLearned;
  if (name == "aleatoric_oracle") return DoyaDayuMode::kAleatoricOracle;
  if (name == "full_oracle") return DoyaDayuMode::kFullOracle;
  throw ConfigError("mode", "unknown Doya-DaYu mode '" + std::string(name) + "'");
}

std::vector<double> EnsembleState::mean_q() const {
  std::vector<double> mean(k(), 0.0);
  for (const auto& m : members) {
    for (std::size_t a = 0; a < mean.size(); ++a) mean[a] += m.q[a];
  }
  for (double& x : mean) x /= static_cast<double>(members.size());
  return mean;
}

Uncertainties estimate_uncertainties(const EnsembleState& state, const ContextSpec* truth) {
  const std::size_t n = state.members.size();
  if (n < 2) throw ConfigError("n_ens", "ensemble needs at least two members");
  if (state.mode != DoyaDayuMode::kLearned && truth == nullptr)
    throw ConfigError("mode", "oracle mode requires ground truth");

  const std::size_t k = state.k();
  const double inv_n = 1.0 / static_cast<double>(n);
  Uncertainties u{std::vector<double>(k), std::vector<double>(k)};
  for (std::size_t a = 0; a < k; ++a) {
    double mean = 0.0;
    double var_g = 0.0;
    for (const auto& m : state.members) {
      mean += m.q[a];
      var_g += m.var_g[a];
    }
    mean *= inv_n;
    double spread = 0.0;
    for (const auto& m : state.members) spread += (m.q[a] - mean) * (m.q[a] - mean);
    u.epistemic[a] = spread * inv_n;
    u.aleatoric[a] = var_g * inv_n;
  }
  if (state.mode == DoyaDayuMode::kLearned) return u;

  for (std::size_t a = 0; a < k; ++a) u.aleatoric[a] = truth->arms[a].variance();
  if (state.mode == DoyaDayuMode::kFullOracle) {
    for (std::size_t a = 0; a < k; ++a)
      u.epistemic[a] = std::max(state.u_hat[a] - u.aleatoric[a], 0.0);
  }
  return u;
}

EnsembleState make_ensemble(const DoyaDayuParams& params, std::size_t k, double init_lo,
                            double init_hi, double var_init, Rng& init_rng) {
  if (params.n_ens < 2) throw ConfigError("n_ens", "ensemble needs at least two members");
  if (!(params.alpha_g > 0.0 && params.alpha_g <= 1.0))
    throw ConfigError("alpha_g", "must lie in (0, 1]");
  if (!(params.mask_prob > 0.0 && params.mask_prob <= 1.0))
    throw ConfigError("mask_prob", "must lie in (0, 1]");
  if (!(params.alpha_u > 0.0 && params.alpha_u <= 1.0))
    throw ConfigError("alpha_u", "must lie in (0, 1]");

  EnsembleState state;
  state.alpha_g = params.alpha_g;
  state.mask_prob = params.mask_prob;
  state.alpha_u = params.alpha_u;
  state.mode = params.mode;
  state.members.resize(static_cast<std::size_t>(params.n_ens));
  for (auto& m : state.members) {
    m.q.resize(k);
    for (double& q : m.q) q = init_rng.uniform(init_lo, init_hi);
    m.var_g.assign(k, var_init);
  }
  state.u_hat.assign(k, var_init);
  return state;
}

ActDiagnostics doya_dayu_act(const EnsembleState& state, const ContextSpec* truth, Rng& rng,
                             double stim_offset) {
  const Uncertainties u = estimate_uncertainties(state, truth);
  const double temperature = 1.0 / adaptive_beta(u) + stim_offset;
  const std::vector<double> values = state.mean_q();
  const std::vector<double> p = softmax_policy(values, 1.0 / temperature);

  ActDiagnostics out;
  out.arm = sample_categorical(p, rng);
  out.temperature = temperature;
  out.alpha.resize(values.size());
  for (std::size_t a = 0; a < values.size(); ++a)
    out.alpha[a] = adaptive_alpha(u.epistemic[a], u.aleatoric[a]);
  return out;
}

void doya_dayu_observe(EnsembleState& state, std::size_t arm, double reward, Rng& mask_rng,
                       const ContextSpec* truth) {
  if (arm >= state.k()) throw std::out_of_range("doya_dayu_observe: arm out of range");
  const Uncertainties u = estimate_uncertainties(state, truth);
  const double alpha = adaptive_alpha(u.epistemic[arm], u.aleatoric[arm]);

  double mean_q = 0.0;
  for (const auto& m : state.members) mean_q += m.q[arm];
  mean_q /= static_cast<double>(state.members.size());

  for (auto& m : state.members) {
    if (!mask_rng.bernoulli(state.mask_prob)) continue;
    const QUpdate step = q_update(m.q[arm], reward, alpha);
    m.q[arm] = step.q;
    m.var_g[arm] = var_update(m.var_g[arm], step.delta, state.alpha_g);
  }

  if (state.mode == DoyaDayuMode::kFullOracle) {
    const double err = reward - mean_q;
    state.u_hat[arm] += state.alpha_u * (err * err - state.u_hat[arm]);
  }
}

std::size_t ducb_select(const DucbState& state, std::int64_t t) {
  (void)t;
  const std::size_t k = state.q.size();
  for (std::size_t a = 0; a < k; ++a) {
    if (state.n_disc[a] < kCountEpsilon) return a;
  }
  const double n_total = std::accumulate(state.n_disc.begin(), state.n_disc.end(), 0.0);
  const double log_n = std::log(n_total);
  std::size_t best = 0;
  double best_index = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < k; ++a) {
    const double bonus = state.xi * std::sqrt(std::max(log_n, 0.0) / state.n_disc[a]);
    const double index = state.q[a] + bonus;
    if (index > best_index) {
      best_index = index;
      best = a;
    }
  }
  return best;
}

void ducb_update(DucbState& state, std::size_t arm, double reward) {
  if (arm >= state.q.size()) throw std::out_of_range("ducb_update: arm out of range");
  for (double& n : state.n_disc) n *= state.gamma;
  state.n_disc[arm] += 1.0;
  state.q[arm] = q_update(state.q[arm], reward, state.learning_rate).q;
}

std::size_t boltzmann_act(const BoltzmannState& state, Rng& rng) {
  return sample_categorical(softmax_policy(state.q, state.inverse_temperature), rng);
}

void boltzmann_observe(BoltzmannState& state, std::size_t arm, double reward) {
  if (arm >= state.q.size()) throw std::out_of_range("boltzmann_observe: arm out of range");
  state.q[arm] = q_update(state.q[arm], reward, state.learning_rate).q;
}

// ---------------------------------------------------------------------------

DoyaDayuAgent::DoyaDayuAgent(const DoyaDayuParams& params, std::size_t k, double init_lo,
                             double init_hi, double var_init, std::uint64_t seed)
    : policy_rng_(seed, Stream::kPolicy), mask_rng_(seed, Stream::kEnsembleMask) {
  Rng init_rng(seed, Stream::kEnsembleInit);
  state_ = make_ensemble(params, k, init_lo, init_hi, var_init, init_rng);
}

ActDiagnostics DoyaDayuAgent::act(std::int64_t, double stim_offset) {
  return doya_dayu_act(state_, truth_ ? &*truth_ : nullptr, policy_rng_, stim_offset);
}

void DoyaDayuAgent::reveal(const ContextSpec& truth) {
  if (wants_truth()) truth_ = truth;
}

void DoyaDayuAgent::observe(std::size_t arm, double reward, const ContextSpec* truth) {
  if (wants_truth()) {
    if (truth == nullptr) throw ConfigError("mode", "oracle mode requires ground truth");
    truth_ = *truth;
  }
  doya_dayu_observe(state_, arm, reward, mask_rng_, truth_ ? &*truth_ : nullptr);
}

BoltzmannAgent::BoltzmannAgent(std::size_t k, double learning_rate, double inverse_temperature,
                               std::uint64_t seed)
    : policy_rng_(seed, Stream::kPolicy) {
  if (!(learning_rate >= 0.0 && learning_rate <= 1.0))
    throw ConfigError("learning_rate", "must lie in [0, 1]");
  if (!(inverse_temperature >= 0.0))
    throw ConfigError("inverse_temperature", "must be >= 0");
  state_.q.assign(k, 0.0);
  state_.learning_rate = learning_rate;
  state_.inverse_temperature = inverse_temperature;
}

ActDiagnostics BoltzmannAgent::act(std::int64_t, double stim_offset) {
  ActDiagnostics out;
  const double base_temperature = state_.inverse_temperature > 0.0
                                      ? 1.0 / state_.inverse_temperature
                                      : std::numeric_limits<double>::infinity();
  out.temperature = base_temperature + stim_offset;
  if (stim_offset == 0.0) {
    out.arm = boltzmann_act(state_, policy_rng_);
  } else {
    out.arm = sample_categorical(softmax_policy(state_.q, 1.0 / out.temperature), policy_rng_);
  }
  out.alpha.assign(state_.q.size(), state_.learning_rate);
  return out;
}

void BoltzmannAgent::observe(std::size_t arm, double reward, const ContextSpec*) {
  boltzmann_observe(state_, arm, reward);
}

DiscountedUcbAgent::DiscountedUcbAgent(std::size_t k, double gamma, double xi,
                                       double learning_rate) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("gamma", "must lie in (0, 1]");
  if (!(xi > 0.0)) throw ConfigError("xi", "must be > 0");
  if (!(learning_rate > 0.0 && learning_rate <= 1.0))
    throw ConfigError("learning_rate", "must lie in (0, 1]");
  state_.q.assign(k, 0.0);
  state_.n_disc.assign(k, 0.0);
  state_.gamma = gamma;
  state_.xi = xi;
  state_.learning_rate = learning_rate;
}

ActDiagnostics DiscountedUcbAgent::act(std::int64_t t, double) {
  ActDiagnostics out;
  out.arm = ducb_select(state_, t);
  out.alpha.assign(state_.q.size(), state_.learning_rate);
  // Deterministic argmax: zero temperature.
  out.temperature = 0.0;
  return out;
}

void DiscountedUcbAgent::observe(std::size_t arm, double reward, const ContextSpec*) {
  ducb_update(state_, arm, reward);
}

}  // namespace nmb
