#pragma once

// One-way ANOVA with Tukey HSD (Tukey-Kramer for unequal group sizes)
// post-hoc comparisons. The studentized range tail probability is evaluated
// by direct numerical integration of its defining double integral.

#include <map>
#include <string>
#include <vector>

namespace nmb::stats {

// P(Q > q) for the studentized range of `groups` means with `df` error
// degrees of freedom. df must be >= 1, groups >= 2.
double studentized_range_sf(double q, int groups, double df);

struct TukeyPair {
  std::string first;
  std::string second;
  double mean_difference = 0.0;  // mean(first) - mean(second)
  double statistic = 0.0;        // studentized range statistic
  double p_value = 1.0;
  std::string stars;
};

struct AnovaResult {
  double f_statistic = 0.0;
  double df_between = 0.0;
  double df_within = 0.0;
  double ms_between = 0.0;
  double ms_within = 0.0;
  double p_value = 1.0;
  // Zero within-group variance with differing means: every comparison is exact.
  bool exact_separation = false;
  std::vector<TukeyPair> pairs;
};

// "*", "**", "***" for p < 0.1, 0.01, 0.001.
std::string significance_stars(double p);

// Requires >= 2 groups with >= 2 samples each; throws std::invalid_argument
// otherwise. Pairs are ordered by the map's key order.
AnovaResult anova_tukey(const std::map<std::string, std::vector<double>>& groups);

}  // namespace nmb::stats
