#include "gch/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gch/error.hpp"

namespace gch::stats {

double normal_cdf(double u) { return 0.5 * std::erfc(-u / std::numbers::sqrt2); }

double sidak_multiplier(std::size_t m, double family_alpha) {
  if (m == 0 || !(family_alpha > 0.0 && family_alpha < 1.0)) {
    throw ParameterError("sidak_multiplier: need m >= 1 and alpha in (0, 1)");
  }
  // Per-entry two-sided tail; -expm1(log1p(-a)/m) keeps precision for tiny a.
  const double tail = -std::expm1(std::log1p(-family_alpha) / static_cast<double>(m));
  double lo = 0.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (std::erfc(mid / std::numbers::sqrt2) > tail ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double Moments::mean() const { return count == 0 ? 0.0 : sum / static_cast<double>(count); }

double Moments::variance() const {
  if (count < 2) return 0.0;
  const double n = static_cast<double>(count);
  return std::max(0.0, (sum2 - sum * sum / n) / (n - 1.0));
}

double Moments::standard_error() const {
  return count == 0 ? 0.0 : std::sqrt(variance() / static_cast<double>(count));
}

double binomial_se(double p, std::size_t n) {
  return n == 0 ? 0.0 : std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n));
}

SampleSummary summarize(std::span<const double> sample) {
  SampleSummary s;
  s.count = sample.size();
  if (sample.size() < 2) return s;
  const double n = static_cast<double>(sample.size());
  double sum = 0.0;
  for (double x : sample) sum += x;
  s.mean = sum / n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double x : sample) {
    const double d = x - s.mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  s.variance = m2 * n / (n - 1.0);
  s.mean_se = std::sqrt(s.variance / n);
  s.variance_se = std::sqrt(std::max(0.0, m4 - m2 * m2) / n);
  if (m2 > 0.0) {
    s.skewness = m3 / std::pow(m2, 1.5);
    s.excess_kurtosis = m4 / (m2 * m2) - 3.0;
  }
  return s;
}

double ks_distance_normal(std::vector<double> sample, double sigma) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = normal_cdf(sample[i] / sigma);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_critical(double alpha, std::size_t n) {
  return std::sqrt(-std::log(alpha / 2.0) / 2.0) / std::sqrt(static_cast<double>(n));
}

}  // namespace gch::stats
