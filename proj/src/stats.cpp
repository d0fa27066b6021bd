#include "nmb/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace nmb::stats {

namespace {

using Quadrature = boost::math::quadrature::gauss_kronrod<double, 61>;
constexpr unsigned kMaxDepth = 8;
constexpr double kTolerance = 1e-11;

double normal_sf(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

// 1 - W(w), where W is the CDF of the range of `groups` standard normals:
//   1 - W(w) = k * Int phi(z) [S(z)^(k-1) - (S(z) - S(z+w))^(k-1)] dz
// with S the normal survival function. The bracket is evaluated as
// -S^m * expm1(m * log1p(-S(z+w)/S(z))) to keep the tail accurate.
double range_sf(double w, int groups) {
  if (w <= 0.0) return 1.0;
  const double m = groups - 1;
  auto integrand = [&](double z) {
    const double a = normal_sf(z);
    if (a <= 0.0) return 0.0;
    const double b = normal_sf(z + w);
    const double bracket = -std::pow(a, m) * std::expm1(m * std::log1p(-b / a));
    return normal_pdf(z) * bracket;
  };
  // The integrand is negligible outside [-w - 9, 9].
  const double lo = -w - 9.0;
  const double hi = 9.0;
  const double mid = -0.5 * w;
  double total = Quadrature::integrate(integrand, lo, mid, kMaxDepth, kTolerance) +
                 Quadrature::integrate(integrand, mid, hi, kMaxDepth, kTolerance);
  return std::clamp(groups * total, 0.0, 1.0);
}

// log density of S = sqrt(chi^2_df / df).
double log_scale_density(double s, double df) {
  if (s <= 0.0) return -std::numeric_limits<double>::infinity();
  const double h = 0.5 * df;
  return h * std::log(df) - std::lgamma(h) - (h - 1.0) * std::numbers::ln2 +
         (df - 1.0) * std::log(s) - h * s * s;
}

}  // namespace

double studentized_range_sf(double q, int groups, double df) {
  if (groups < 2) throw std::invalid_argument("studentized_range_sf: groups must be >= 2");
  if (!(df >= 1.0)) throw std::invalid_argument("studentized_range_sf: df must be >= 1");
  if (std::isnan(q)) return std::numeric_limits<double>::quiet_NaN();
  if (q <= 0.0) return 1.0;
  if (std::isinf(q)) return 0.0;

  auto integrand = [&](double s) {
    const double log_f = log_scale_density(s, df);
    if (log_f < -745.0) return 0.0;
    return std::exp(log_f) * range_sf(q * s, groups);
  };
  // S concentrates around 1 with spread ~ 1/sqrt(2 df); split there so the
  // adaptive rule resolves the peak for large df.
  const double spread = 1.0 / std::sqrt(2.0 * df);
  const double lo = std::max(0.0, 1.0 - 12.0 * spread);
  const double hi = 1.0 + 12.0 * spread;
  double total = Quadrature::integrate(integrand, lo, 1.0, kMaxDepth, kTolerance) +
                 Quadrature::integrate(integrand, 1.0, hi, kMaxDepth, kTolerance);
  if (lo > 0.0) total += Quadrature::integrate(integrand, 0.0, lo, kMaxDepth, kTolerance);
  total += Quadrature::integrate(integrand, hi, std::numeric_limits<double>::infinity(),
                                 kMaxDepth, kTolerance);
  return std::clamp(total, 0.0, 1.0);
}

std::string significance_stars(double p) {
  if (p < 0.001) return "***";
  if (p < 0.01) return "**";
  if (p < 0.1) return "*";
  return "";
}

AnovaResult anova_tukey(const std::map<std::string, std::vector<double>>& groups) {
  if (groups.size() < 2) throw std::invalid_argument("anova_tukey: need at least two groups");

  std::vector<double> means;
  std::vector<double> sizes;
  double grand_sum = 0.0;
  double n_total = 0.0;
  double ss_within = 0.0;
  for (const auto& [name, values] : groups) {
    if (values.size() < 2)
      throw std::invalid_argument("anova_tukey: group '" + name + "' has fewer than two samples");
    double sum = 0.0;
    for (double v : values) sum += v;
    const double n = static_cast<double>(values.size());
    const double mean = sum / n;
    for (double v : values) ss_within += (v - mean) * (v - mean);
    means.push_back(mean);
    sizes.push_back(n);
    grand_sum += sum;
    n_total += n;
  }
  const double grand_mean = grand_sum / n_total;
  double ss_between = 0.0;
  for (std::size_t i = 0; i < means.size(); ++i)
    ss_between += sizes[i] * (means[i] - grand_mean) * (means[i] - grand_mean);

  const auto n_groups = static_cast<int>(groups.size());
  AnovaResult r;
  r.df_between = n_groups - 1;
  r.df_within = n_total - n_groups;
  r.ms_between = ss_between / r.df_between;
  r.ms_within = ss_within / r.df_within;

  // Sums of squares this small relative to the data scale are rounding noise.
  const double scale = std::max(1.0, grand_mean * grand_mean * n_total);
  const bool no_within = ss_within <= 1e-28 * scale;
  const bool no_between = ss_between <= 1e-28 * scale;
  if (no_within) {
    r.exact_separation = !no_between;
    r.f_statistic = no_between ? 0.0 : std::numeric_limits<double>::infinity();
    r.p_value = no_between ? 1.0 : 0.0;
  } else {
    r.f_statistic = r.ms_between / r.ms_within;
    boost::math::fisher_f_distribution<double> dist(r.df_between, r.df_within);
    r.p_value = boost::math::cdf(boost::math::complement(dist, r.f_statistic));
  }

  std::vector<std::string> names;
  for (const auto& entry : groups) names.push_back(entry.first);
  for (std::size_t i = 0; i < names.size(); ++i) {
    for (std::size_t j = i + 1; j < names.size(); ++j) {
      TukeyPair pair;
      pair.first = names[i];
      pair.second = names[j];
      pair.mean_difference = means[i] - means[j];
      const double diff = std::abs(pair.mean_difference);
      if (no_within) {
        const bool equal = diff <= 1e-14 * std::max(1.0, std::abs(means[i]));
        pair.statistic = equal ? 0.0 : std::numeric_limits<double>::infinity();
        pair.p_value = equal ? 1.0 : 0.0;
      } else {
        const double se = std::sqrt(0.5 * r.ms_within * (1.0 / sizes[i] + 1.0 / sizes[j]));
        pair.statistic = diff / se;
        pair.p_value = studentized_range_sf(pair.statistic, n_groups, r.df_within);
      }
      pair.stars = significance_stars(pair.p_value);
      r.pairs.push_back(std::move(pair));
    }
  }
  return r;
}

}  // namespace nmb::stats
