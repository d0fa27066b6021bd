#pragma once

// Seeded random streams for reproducible simulation.
//
// A run seed is split into independent named sub-streams so that every agent
// in an experiment sees the same environment realization. Payout noise is
// counter-based: it depends only on (seed, step, arm), never on how many
// draws were consumed before.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace nmb {

enum class Stream : std::uint64_t {
  kContext = 1,
  kSwitch = 2,
  kPayout = 3,
  kPolicy = 4,
  kEnsembleInit = 5,
  kEnsembleMask = 6,
};

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ a);
  h = splitmix64(h ^ (b * 0xD1B54A32D192ED03ULL));
  h = splitmix64(h ^ (c * 0xABC98388FB8FAC03ULL));
  return h;
}

// 53-bit mantissa fill; platform independent unlike std::uniform_real_distribution.
constexpr double to_unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}
  Rng(std::uint64_t seed, Stream stream)
      : engine_(mix_seed(seed, static_cast<std::uint64_t>(stream))) {}

  double uniform() { return to_unit(engine_()); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  bool bernoulli(double p) { return uniform() < p; }

  // Box-Muller, one value per pair of uniforms (no cached spare).
  double normal(double mean = 0.0, double stddev = 1.0) {
    double u1 = uniform();
    const double u2 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double z = std::sqrt(-2.0 * std::log(u1)) *
                     std::cos(2.0 * std::numbers::pi * u2);
    return mean + stddev * z;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

// Counter-based draws keyed by (seed, step, arm).
inline double counter_uniform(std::uint64_t seed, std::uint64_t step,
                              std::uint64_t arm, std::uint64_t lane = 0) {
  return to_unit(mix_seed(seed ^ static_cast<std::uint64_t>(Stream::kPayout),
                          step, arm + 1, lane + 1));
}

inline double counter_normal(std::uint64_t seed, std::uint64_t step,
                             std::uint64_t arm) {
  double u1 = counter_uniform(seed, step, arm, 0);
  const double u2 = counter_uniform(seed, step, arm, 1);
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace nmb
