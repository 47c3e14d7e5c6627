#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gch::stats {

/// Standard normal cdf via erfc; absolute error at the level of double roundoff.
double normal_cdf(double u);

/// Two-sided multiplier z with Pr(max of m independent |N(0,1)| <= z) =
/// 1 - family_alpha.
double sidak_multiplier(std::size_t m, double family_alpha);

/// Power sums of a scalar statistic; merge in a fixed order for reproducible
/// reductions.
struct Moments {
  std::size_t count = 0;
  double sum = 0.0;
  double sum2 = 0.0;

  void add(double x) {
    ++count;
    sum += x;
    sum2 += x * x;
  }
  void merge(const Moments& other) {
    count += other.count;
    sum += other.sum;
    sum2 += other.sum2;
  }
  double mean() const;
  /// Unbiased sample variance.
  double variance() const;
  /// Standard error of the mean, s / sqrt(N).
  double standard_error() const;
};

/// Binomial standard error sqrt(p (1 - p) / N).
double binomial_se(double p, std::size_t n);

/// Central-moment summary of a sample, with plug-in standard errors.
struct SampleSummary {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;     // unbiased
  double mean_se = 0.0;
  double variance_se = 0.0;  // sqrt((m4 - m2^2) / N)
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
};

SampleSummary summarize(std::span<const double> sample);

/// sup_x |F_N(x) - Phi(x / sigma)| for a centered normal target. Sorts a copy.
double ks_distance_normal(std::vector<double> sample, double sigma);

/// Asymptotic Kolmogorov critical value sqrt(-ln(alpha/2)/2) / sqrt(N).
double ks_critical(double alpha, std::size_t n);

}  // namespace gch::stats
