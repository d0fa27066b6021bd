#pragma once

// Bandit agents sharing a common act/observe interface:
//
//  * DoyaDayuAgent: an ensemble of tabular value learners. Ensemble spread of
//    the value estimates is the epistemic uncertainty E, the tracked return
//    variance is the aleatoric uncertainty A. The per-arm learning rate is
//    E / (E + A) and the softmax inverse temperature is 1 / mean_a(E).
//    Oracle modes substitute the true arm variance for A (and a truth-derived
//    E* = U - A* for E).
//  * BoltzmannAgent: fixed learning rate and inverse temperature.
//  * DiscountedUcbAgent: UCB with exponentially discounted pull counts.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nmb/bandit_env.hpp"
#include "nmb/rng.hpp"

namespace nmb {

inline constexpr double kDivisionEpsilon = 1e-12;
inline constexpr double kBetaEpsilon = 1e-3;
inline constexpr double kBetaMax = 1.0 / kBetaEpsilon;
inline constexpr double kCountEpsilon = 1e-12;

// p_i = exp(beta * v_i) / sum_j exp(beta * v_j), evaluated after subtracting
// max(v). Throws std::invalid_argument on NaN input or negative beta.
std::vector<double> softmax_policy(std::span<const double> values, double beta);

// Inverse-CDF draw from a probability vector.
std::size_t sample_categorical(std::span<const double> probabilities, Rng& rng);

struct QUpdate {
  double q = 0.0;
  double delta = 0.0;
};

inline QUpdate q_update(double q, double reward, double alpha) {
  const double delta = reward - q;
  return {q + alpha * delta, delta};
}

inline double var_update(double var_g, double delta, double alpha_g) {
  return var_g + alpha_g * (delta * delta - var_g);
}

// E / (E + A), or 0 when E + A < kDivisionEpsilon.
double adaptive_alpha(double epistemic, double aleatoric);

struct Uncertainties {
  std::vector<double> epistemic;
  std::vector<double> aleatoric;
};

// 1 / max(mean_a E[a], kBetaEpsilon).
double adaptive_beta(const Uncertainties& u);

// ---------------------------------------------------------------------------

enum class DoyaDayuMode { kLearned, kAleatoricOracle, kFullOracle };

std::string_view to_string(DoyaDayuMode mode);
DoyaDayuMode doya_dayu_mode_from_string(std::string_view name);

struct EnsembleMember {
  std::vector<double> q;
  std::vector<double> var_g;
};

struct EnsembleState {
  std::vector<EnsembleMember> members;
  double alpha_g = 0.1;
  double mask_prob = 0.5;
  DoyaDayuMode mode = DoyaDayuMode::kLearned;
  std::vector<double> u_hat;
  double alpha_u = 0.1;

  std::size_t k() const { return members.empty() ? 0 : members.front().q.size(); }
  std::vector<double> mean_q() const;
};

// Learned: E = population variance of q across members, A = mean of var_g.
// Aleatoric oracle: A = true arm variance. Full oracle: additionally
// E = max(u_hat - A*, 0). Throws ConfigError for fewer than two members or
// for an oracle mode without truth.
Uncertainties estimate_uncertainties(const EnsembleState& state, const ContextSpec* truth);

struct ActDiagnostics {
  std::size_t arm = 0;
  std::vector<double> alpha;
  // Temperature actually used by the policy (beta^-1), including any offset.
  double temperature = 0.0;
};

struct DoyaDayuParams {
  int n_ens = 10;
  double alpha_g = 0.1;
  double mask_prob = 0.5;
  double alpha_u = 0.1;
  DoyaDayuMode mode = DoyaDayuMode::kLearned;

  bool operator==(const DoyaDayuParams&) const = default;
};

// Members' q ~ U[init_lo, init_hi]; var_g and u_hat start at var_init.
EnsembleState make_ensemble(const DoyaDayuParams& params, std::size_t k, double init_lo,
                            double init_hi, double var_init, Rng& init_rng);

// Samples an arm from softmax(mean_q) at temperature 1/adaptive_beta + stim_offset.
ActDiagnostics doya_dayu_act(const EnsembleState& state, const ContextSpec* truth, Rng& rng,
                             double stim_offset);

// Bernoulli(mask_prob) per member: updated members move q[arm] with the
// adaptive alpha and var_g[arm] with alpha_g. Full oracle also tracks
// u_hat[arm] from the ensemble-mean prediction error.
void doya_dayu_observe(EnsembleState& state, std::size_t arm, double reward, Rng& mask_rng,
                       const ContextSpec* truth);

struct DucbState {
  std::vector<double> q;
  std::vector<double> n_disc;
  double gamma = 0.9999;
  double xi = 1.0;
  double learning_rate = 0.25;
};

std::size_t ducb_select(const DucbState& state, std::int64_t t);
void ducb_update(DucbState& state, std::size_t arm, double reward);

struct BoltzmannState {
  std::vector<double> q;
  double learning_rate = 0.25;
  double inverse_temperature = 0.25;
};

std::size_t boltzmann_act(const BoltzmannState& state, Rng& rng);
void boltzmann_observe(BoltzmannState& state, std::size_t arm, double reward);

// ---------------------------------------------------------------------------

// Per-run agent. `truth` is the oracle channel; only oracle agents read it.
class Agent {
 public:
  virtual ~Agent() = default;

  virtual ActDiagnostics act(std::int64_t t, double stim_offset) = 0;
  virtual void observe(std::size_t arm, double reward, const ContextSpec* truth) = 0;
  // Values the policy acts on (ensemble mean for Doya-DaYu).
  virtual std::vector<double> values() const = 0;
  virtual bool wants_truth() const { return false; }
  // Oracle channel: the harness reveals the current context before act().
  virtual void reveal(const ContextSpec&) {}
};

class DoyaDayuAgent final : public Agent {
 public:
  DoyaDayuAgent(const DoyaDayuParams& params, std::size_t k, double init_lo, double init_hi,
                double var_init, std::uint64_t seed);

  ActDiagnostics act(std::int64_t t, double stim_offset) override;
  void observe(std::size_t arm, double reward, const ContextSpec* truth) override;
  std::vector<double> values() const override { return state_.mean_q(); }
  bool wants_truth() const override { return state_.mode != DoyaDayuMode::kLearned; }
  void reveal(const ContextSpec& truth) override;

  const EnsembleState& state() const { return state_; }

 private:
  EnsembleState state_;
  Rng policy_rng_;
  Rng mask_rng_;
  // Last context delivered through the oracle channel.
  std::optional<ContextSpec> truth_;
};

class BoltzmannAgent final : public Agent {
 public:
  BoltzmannAgent(std::size_t k, double learning_rate, double inverse_temperature,
                 std::uint64_t seed);

  ActDiagnostics act(std::int64_t t, double stim_offset) override;
  void observe(std::size_t arm, double reward, const ContextSpec* truth) override;
  std::vector<double> values() const override { return state_.q; }

  const BoltzmannState& state() const { return state_; }

 private:
  BoltzmannState state_;
  Rng policy_rng_;
};

class DiscountedUcbAgent final : public Agent {
 public:
  DiscountedUcbAgent(std::size_t k, double gamma, double xi, double learning_rate);

  ActDiagnostics act(std::int64_t t, double stim_offset) override;
  void observe(std::size_t arm, double reward, const ContextSpec* truth) override;
  std::vector<double> values() const override { return state_.q; }

  const DucbState& state() const { return state_; }

 private:
  DucbState state_;
};

}  // namespace nmb
