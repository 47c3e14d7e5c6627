#include "gch/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>

#include <json.hpp>

#include "gch/baselines.hpp"
#include "gch/error.hpp"
#include "gch/gates.hpp"
#include "gch/metrics.hpp"
#include "gch/parallel.hpp"
#include "gch/random.hpp"
#include "gch/sampler.hpp"
#include "gch/stats.hpp"

namespace gch::verify {
namespace {

constexpr std::size_t kChunk = 8192;

// Canonical check ordinals; they are part of the stream-splitting rule, so
// appending is fine but reordering changes every report.
enum Ordinal : std::uint64_t {
  kEnergy = 0,
  kCovariance,
  kMoments,
  kTau,
  kSmallGamma,
  kLogratio,
  kRanking,
  kIntrinsic,
  kDropout,
  kMask,
  kSandwich,
  kCycle,
  kMeanOne,
  kResidual,
};

class Timer {
 public:
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Runs `body(rng, count, acc)` over n samples split into fixed chunks and
// merges the per-chunk accumulators in chunk order.
template <typename Acc, typename Body>
Acc monte_carlo(const CheckConfig& cfg, std::uint64_t ordinal, std::uint64_t run, std::size_t n,
                const Acc& init, Body&& body) {
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  auto parts = run_chunks(chunks, cfg.workers, [&](std::size_t c) {
    Acc acc = init;
    RandomStream rng(cfg.seed, RandomStream::derive_id({ordinal, run, c}));
    body(rng, std::min(kChunk, n - c * kChunk), acc);
    return acc;
  });
  Acc total = init;
  for (const Acc& part : parts) total.merge(part);
  return total;
}

// Power sums for a vector of statistics observed together on each sample.
struct MomentVector {
  std::size_t count = 0;
  std::vector<double> sum;
  std::vector<double> sum2;

  explicit MomentVector(std::size_t size = 0) : sum(size, 0.0), sum2(size, 0.0) {}

  void add(std::size_t i, double v) {
    sum[i] += v;
    sum2[i] += v * v;
  }
  void merge(const MomentVector& o) {
    count += o.count;
    for (std::size_t i = 0; i < sum.size(); ++i) {
      sum[i] += o.sum[i];
      sum2[i] += o.sum2[i];
    }
  }
  stats::Moments at(std::size_t i) const { return {count, sum[i], sum2[i]}; }
};

struct Counts {
  std::size_t count = 0;
  std::vector<std::uint64_t> hits;

  explicit Counts(std::size_t size = 0) : hits(size, 0) {}
  void merge(const Counts& o) {
    count += o.count;
    for (std::size_t i = 0; i < hits.size(); ++i) hits[i] += o.hits[i];
  }
  double frequency(std::size_t i) const {
    return count == 0 ? 0.0 : static_cast<double>(hits[i]) / static_cast<double>(count);
  }
};

VerificationReport statistical(std::string check, std::string anchor, double empirical,
                               double theoretical, double se, const CheckConfig& cfg,
                               std::size_t n) {
  VerificationReport r;
  r.check = std::move(check);
  r.anchor = std::move(anchor);
  r.empirical = empirical;
  r.theoretical = theoretical;
  r.se = se;
  r.tolerance = cfg.k * se;
  r.pass = std::abs(empirical - theoretical) <= r.tolerance;
  r.samples = n;
  r.seed = cfg.seed;
  return r;
}

VerificationReport identity(std::string check, std::string anchor, double empirical,
                            double theoretical, double tolerance, const CheckConfig& cfg,
                            std::size_t n) {
  VerificationReport r;
  r.check = std::move(check);
  r.anchor = std::move(anchor);
  r.empirical = empirical;
  r.theoretical = theoretical;
  r.tolerance = tolerance;
  r.pass = std::abs(empirical - theoretical) <= tolerance;
  r.samples = n;
  r.seed = cfg.seed;
  return r;
}

VerificationReport negative(VerificationReport r) {
  r.check += ".negative_control";
  r.negative_control = true;
  return r;
}

// Tracks the entry with the largest standardized deviation.
struct Worst {
  double empirical = 0.0;
  double theoretical = 0.0;
  double se = 0.0;
  double z = -1.0;

  void consider(double e, double t, double s) {
    const double diff = std::abs(e - t);
    const double zz = s > 0.0 ? diff / s : (diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
    if (zz > z) {
      empirical = e;
      theoretical = t;
      se = s;
      z = zz;
    }
  }
  VerificationReport report(std::string check, std::string anchor, const CheckConfig& cfg,
                            std::size_t n) const {
    return statistical(std::move(check), std::move(anchor), empirical, theoretical, se, cfg, n);
  }
};

void finish(ReportList& reports, const Timer& timer) {
  const double ms = timer.elapsed_ms();
  for (auto& r : reports) r.wall_ms = ms;
}

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

std::string fmt_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

void require_two_sites(const GridSpec& grid, const char* what) {
  if (grid.size() < 2) throw ParameterError(std::string(what) + ": grid needs at least 2 sites");
}

}  // namespace

void CheckConfig::validate() const {
  if (height < 1 || width < 1) throw ConfigError("CheckConfig: grid dims must be >= 1");
  if (samples < 1000) throw ConfigError("CheckConfig: samples must be >= 1000");
  if (!(k >= 1.0)) throw ConfigError("CheckConfig: tolerance multiplier k must be >= 1");
  if (!(q > 0.0 && q <= 1.0)) throw ConfigError("CheckConfig: q must be in (0, 1]");
  if (workers < 1) throw ConfigError("CheckConfig: workers must be >= 1");
  if (!(mass >= 0.0)) throw ConfigError("CheckConfig: mass must be >= 0");
  if (beta && eps) throw ConfigError("CheckConfig: give beta or eps, not both");
  if (beta && !(*beta > 0.0)) throw ConfigError("CheckConfig: beta must be > 0");
  if (eps && !(*eps > 0.0)) throw ConfigError("CheckConfig: eps must be > 0");
}

double CheckConfig::resolved_beta() const {
  if (eps) return beta_from_budget(grid(), *eps);
  return beta.value_or(1.0);
}

GridSpec CheckConfig::grid() const { return GridSpec(height, width, mass); }

Field positive_test_field(const GridSpec& grid, std::uint64_t seed, std::uint64_t tag) {
  RandomStream rng(seed, RandomStream::derive_id({0xfeedull, tag}));
  Field h(grid.height(), grid.width());
  for (double& v : h.values()) v = 0.5 + 1.5 * rng.uniform();
  return h;
}

double enumerate_dropout_energy(const GridSpec& grid, const Field& h, double q) {
  const std::size_t n = grid.size();
  if (n > 20) throw ParameterError("enumerate_dropout_energy: n must be <= 20");
  if (!(q > 0.0 && q <= 1.0)) throw ParameterError("enumerate_dropout_energy: q must be in (0, 1]");
  long double expected = 0.0L;
  Field masked(grid.height(), grid.width());
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
    int kept = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const bool keep = (bits >> i) & 1u;
      kept += keep ? 1 : 0;
      masked[i] = keep ? h[i] / q : 0.0;
    }
    const long double prob = std::pow(static_cast<long double>(q), kept) *
                             std::pow(1.0L - static_cast<long double>(q), static_cast<int>(n) - kept);
    if (prob == 0.0L) continue;
    expected += prob * static_cast<long double>(intrinsic_energy(grid, masked));
  }
  return static_cast<double>(expected);
}

ReportList check_energy_budget(const CheckConfig& cfg) {
  cfg.validate();
  Timer timer;
  const GridSpec grid = cfg.grid();
  const double beta = cfg.resolved_beta();
  const SpectralPlan plan(grid, beta);
  const std::size_t n = cfg.samples;
  const auto acc = monte_carlo(cfg, kEnergy, 0, n, stats::Moments{},
                               [&](RandomStream& rng, std::size_t count, stats::Moments& m) {
                                 for (std::size_t s = 0; s < count; ++s) {
                                   m.add(dirichlet_energy(grid, sample_gff_spectral(plan, rng)));
                                 }
                               });
  const double target = budget_from_beta(grid, beta);
  const std::string anchor = "MaxEnt energy budget E[1/2 <psi,Q psi>] = n/(2 beta)";
  ReportList out;
  out.push_back(statistical("energy_budget", anchor, acc.mean(), target, acc.standard_error(), cfg, n));
  out.push_back(negative(statistical("energy_budget", anchor, acc.mean(), 2.0 * target,
                                     acc.standard_error(), cfg, n)));
  finish(out, timer);
  return out;
}

ReportList check_gff_covariance(const CheckConfig& cfg) {
  cfg.validate();
  Timer timer;
  const GridSpec grid = cfg.grid();
  const double beta = cfg.resolved_beta();
  const SpectralPlan plan(grid, beta);
  const Eigen::MatrixXd green = green_matrix_dense(grid);
  const std::size_t sites = grid.size();
  const std::size_t entries = sites * (sites + 1) / 2;
  const std::size_t n = cfg.samples;
  const auto acc = monte_carlo(cfg, kCovariance, 0, n, MomentVector(entries),
                               [&](RandomStream& rng, std::size_t count, MomentVector& m) {
                                 for (std::size_t s = 0; s < count; ++s) {
                                   const Field psi = sample_gff_spectral(plan, rng);
                                   std::size_t e = 0;
                                   for (std::size_t a = 0; a < sites; ++a)
                                     for (std::size_t b = a; b < sites; ++b) m.add(e++, psi[a] * psi[b]);
                                   ++m.count;
                                 }
                               });
  Worst worst, perturbed;
  std::size_t e = 0;
  for (std::size_t a = 0; a < sites; ++a) {
    for (std::size_t b = a; b < sites; ++b, ++e) {
      const stats::Moments m = acc.at(e);
      const double target = green(idx(a), idx(b)) / beta;
      worst.consider(m.mean(), target, m.standard_error());
      perturbed.consider(m.mean(), 1.1 * target, m.standard_error());
    }
  }
  const std::string anchor = "Cov(psi(x),psi(y)) = beta^-1 G(x,y) (worst entry)";
  ReportList out;
  out.push_back(worst.report("gff_covariance", anchor, cfg, n));
  out.push_back(negative(perturbed.report("gff_covariance", anchor, cfg, n)));
  finish(out, timer);
  return out;
}

ReportList check_exact_gate_moments(const CheckConfig& cfg, int max_order) {
  cfg.validate();
  if (max_order < 1) throw ParameterError("check_exact_gate_moments: max_order must be >= 1");
  Timer timer;
  const GridSpec grid = cfg.grid();
  const double beta = cfg.resolved_beta();
  const double gamma = cfg.gamma;
  const SpectralPlan plan(grid, beta);
  const Eigen::MatrixXd green = green_matrix_dense(grid);
  const int sites = static_cast<int>(grid.size());

  // Multisets x_1 <= ... <= x_m in depth-first order; each tuple extends its
  // parent by one site so products are built incrementally.
  std::vector<int> parent, last, order;
  std::function<void(int, int, int)> expand = [&](int par, int start, int depth) {
    for (int s = start; s < sites; ++s) {
      const int t = static_cast<int>(parent.size());
      parent.push_back(par);
      last.push_back(s);
      order.push_back(depth + 1);
      if (depth + 1 < max_order) expand(t, s, depth + 1);
    }
  };
  expand(-1, 0, 0);
  const std::size_t tuples = parent.size();

  const std::size_t n = cfg.samples;
  const auto acc = monte_carlo(
      cfg, kMoments, 0, n, MomentVector(tuples),
      [&](RandomStream& rng, std::size_t count, MomentVector& m) {
        std::vector<double> prod(tuples);
        for (std::size_t s = 0; s < count; ++s) {
          const Gate xi = exact_wick_gate(plan, sample_gff_spectral(plan, rng), gamma);
          for (std::size_t t = 0; t < tuples; ++t) {
            const double base = parent[t] < 0 ? 1.0 : prod[static_cast<std::size_t>(parent[t])];
            prod[t] = base * xi.values[static_cast<std::size_t>(last[t])];
            m.add(t, prod[t]);
          }
          ++m.count;
        }
      });

  std::vector<Worst> worst(static_cast<std::size_t>(max_order));
  Worst perturbed;
  std::vector<Site> tuple;
  for (std::size_t t = 0; t < tuples; ++t) {
    tuple.clear();
    for (int u = static_cast<int>(t); u >= 0; u = parent[static_cast<std::size_t>(u)]) {
      tuple.push_back(grid.site(static_cast<std::size_t>(last[static_cast<std::size_t>(u)])));
    }
    const stats::Moments m = acc.at(t);
    const double target = multi_point_moment_theoretical(grid, green, beta, gamma, tuple);
    worst[static_cast<std::size_t>(order[t] - 1)].consider(m.mean(), target, m.standard_error());
    if (order[t] == 2) {
      perturbed.consider(m.mean(),
                         multi_point_moment_theoretical(grid, green, beta, std::sqrt(2.0) * gamma, tuple),
                         m.standard_error());
    }
  }
  ReportList out;
  for (int m = 1; m <= max_order; ++m) {
    out.push_back(worst[static_cast<std::size_t>(m - 1)].report(
        "exact_gate_moments.m" + std::to_string(m),
        "E[prod xi(x_r)] = exp(gamma^2 sum_{a<b} C(x_a,x_b)), order " + std::to_string(m), cfg, n));
  }
  if (max_order >= 2) {
    out.push_back(negative(perturbed.report("exact_gate_moments.m2",
                                            "second moment against exp(2 gamma^2 C)", cfg, n)));
  }
  finish(out, timer);
  return out;
}

namespace {

// One-point and two-point (a <= b) means of the exact gate.
MomentVector gate_low_moments(const CheckConfig& cfg, std::uint64_t run, double gamma, double beta) {
  const GridSpec grid = cfg.grid();
  const SpectralPlan plan(grid, beta);
  const std::size_t sites = grid.size();
  const std::size_t entries = sites + sites * (sites + 1) / 2;
  return monte_carlo(cfg, kTau, run, cfg.samples, MomentVector(entries),
                     [&](RandomStream& rng, std::size_t count, MomentVector& m) {
                       for (std::size_t s = 0; s < count; ++s) {
                         const Gate xi = exact_wick_gate(plan, sample_gff_spectral(plan, rng), gamma);
                         std::size_t e = 0;
                         for (std::size_t a = 0; a < sites; ++a) m.add(e++, xi.values[a]);
                         for (std::size_t a = 0; a < sites; ++a)
                           for (std::size_t b = a; b < sites; ++b) m.add(e++, xi.values[a] * xi.values[b]);
                         ++m.count;
                       }
                     });
}

// Joint comparison of two independent runs: worst |mean_a - mean_b| against
// k sqrt(se_a^2 + se_b^2).
Worst compare_runs(const MomentVector& a, const MomentVector& b, std::size_t begin, std::size_t end) {
  Worst w;
  for (std::size_t e = begin; e < end; ++e) {
    const stats::Moments ma = a.at(e);
    const stats::Moments mb = b.at(e);
    w.consider(ma.mean(), mb.mean(), std::hypot(ma.standard_error(), mb.standard_error()));
  }
  return w;
}

}  // namespace

ReportList check_tau_sufficiency(const CheckConfig& cfg) {
  cfg.validate();
  Timer timer;
  const double beta = cfg.resolved_beta();
  const double gamma = cfg.gamma;
  const std::size_t sites = cfg.grid().size();
  const std::size_t one_end = sites;
  const std::size_t two_end = sites + sites * (sites + 1) / 2;
  const MomentVector base = gate_low_moments(cfg, 0, gamma, beta);
  const MomentVector same_tau = gate_low_moments(cfg, 1, 2.0 * gamma, 4.0 * beta);
  const MomentVector other_tau = gate_low_moments(cfg, 2, 2.0 * gamma, beta);
  const std::size_t n = cfg.samples;
  const std::string anchor = "exact gate law depends on (gamma, beta) only through tau";
  // The joint band covers the whole moment family at level 0.001, never
  // narrower than k standard errors per entry.
  auto family_report = [&](const Worst& w, std::string name, std::string label, std::size_t m) {
    VerificationReport r = w.report(std::move(name), anchor + ": " + label, cfg, n);
    r.tolerance = std::max(cfg.k, stats::sidak_multiplier(m, 1e-3)) * w.se;
    r.pass = std::abs(r.empirical - r.theoretical) <= r.tolerance;
    return r;
  };
  const std::size_t pairs = two_end - one_end;
  ReportList out;
  out.push_back(family_report(compare_runs(base, same_tau, 0, one_end), "tau_sufficiency.one_point",
                              "one-point", sites));
  out.push_back(family_report(compare_runs(base, same_tau, one_end, two_end),
                              "tau_sufficiency.two_point", "two-point", pairs));
  out.push_back(negative(family_report(compare_runs(base, other_tau, one_end, two_end),
                                       "tau_sufficiency.two_point", "mismatched tau", pairs)));
  finish(out, timer);
  return out;
}

ReportList check_small_gamma(const CheckConfig& cfg) {
  cfg.validate();
  Timer timer;
  const GridSpec grid = cfg.grid();
  const double beta = cfg.resolved_beta();
  const SpectralPlan plan(grid, beta);
  const Eigen::MatrixXd cov = green_matrix_dense(grid) / beta;
  const std::size_t sites = grid.size();
  const std::size_t entries = sites * (sites + 1) / 2;
  const std::size_t n = cfg.samples;
  const std::vector<double> gammas = {0.1, 0.05, 0.025};
  const std::string anchor = "Cov(xi(x),xi(y)) = gamma^2 C(x,y) + O(gamma^4)";

  ReportList out;
  for (std::size_t g = 0; g < gammas.size(); ++g) {
    const double gamma = gammas[g];
    const auto acc = monte_carlo(cfg, kSmallGamma, g, n, MomentVector(entries),
                                 [&](RandomStream& rng, std::size_t count, MomentVector& m) {
                                   for (std::size_t s = 0; s < count; ++s) {
                                     const Gate xi =
                                         exact_wick_gate(plan, sample_gff_spectral(plan, rng), gamma);
                                     std::size_t e = 0;
                                     for (std::size_t a = 0; a < sites; ++a)
                                       for (std::size_t b = a; b < sites; ++b)
                                         m.add(e++, (xi.values[a] - 1.0) * (xi.values[b] - 1.0));
                                     ++m.count;
                                   }
                                 });
    Worst worst, perturbed;
    std::size_t e = 0;
    for (std::size_t a = 0; a < sites; ++a) {
      for (std::size_t b = a; b < sites; ++b, ++e) {
        const stats::Moments m = acc.at(e);
        const double c = cov(idx(a), idx(b));
        worst.consider(m.mean(), std::expm1(gamma * gamma * c), m.standard_error());
        perturbed.consider(m.mean(), 1.5 * gamma * gamma * c, m.standard_error());
      }
    }
    const std::string tag = "g" + fmt_num(gamma);
    out.push_back(worst.report("small_gamma.covariance_" + tag, anchor + " (exact kernel)", cfg, n));
    if (g == 0) {
      out.push_back(negative(perturbed.report("small_gamma.covariance_" + tag,
                                              "covariance against 1.5 gamma^2 C", cfg, n)));
    }
  }

  // Relative remainder e(gamma) = (exp(gamma^2 C) - 1)/(gamma^2 C) - 1 must
  // shrink like gamma^2: halving gamma divides it by about four.
  double ratio_min = std::numeric_limits<double>::infinity();
  double ratio_max = 0.0;
  for (std::size_t g = 0; g + 1 < gammas.size(); ++g) {
    for (std::size_t a = 0; a < sites; ++a) {
      for (std::size_t b = a; b < sites; ++b) {
        const double c = cov(idx(a), idx(b));
        if (!(c > 0.0)) continue;
        auto rel = [c](double gm) { return std::expm1(gm * gm * c) / (gm * gm * c) - 1.0; };
        const double ratio = rel(gammas[g]) / rel(gammas[g + 1]);
        ratio_min = std::min(ratio_min, ratio);
        ratio_max = std::max(ratio_max, ratio);
      }
    }
  }
  VerificationReport rr = identity("small_gamma.remainder_ratio",
                                   "relative remainder shrinks ~4x per halving of gamma",
                                   0.5 * (ratio_min + ratio_max), 4.25, 1.75, cfg, 0);
  rr.pass = ratio_min >= 2.5 && ratio_max <= 6.0;
  out.push_back(rr);
  finish(out, timer);
  return out;
}

ReportList check_logratio_law(const CheckConfig& cfg, Site x, Site y) {
  cfg.validate();
  Timer timer;
  const GridSpec grid = cfg.grid();
  require_two_sites(grid, "check_logratio_law");
  if (!grid.contains(x) || !grid.contains(y)) throw IndexError("check_logratio_law: site outside grid");
  if (x == y) throw ParameterError("check_logratio_law: sites must be distinct");
  const double beta = cfg.resolved_beta();
  const double gamma = cfg.gamma;
  const SpectralPlan plan(grid, beta);
  const Field h = positive_test_field(grid, cfg.seed, kLogratio);
  const std::size_t ix = grid.index(x);
  const std::size_t iy = grid.index(y);

  struct Acc {
    std::vector<double> values;
    double identity_error = 0.0;
    void merge(const Acc& o) {
      values.insert(values.end(), o.values.begin(), o.values.end());
      identity_error = std::max(identity_error, o.identity_error);
    }
  };
  const std::size_t n = cfg.samples;
  const Acc acc = monte_carlo(cfg, kLogratio, 0, n, Acc{},
                              [&](RandomStream& rng, std::size_t count, Acc& a) {
                                a.values.reserve(count);
                                for (std::size_t s = 0; s < count; ++s) {
                                  const Field psi = sample_gff_spectral(plan, rng);
                                  const Gate xi = samplewise_gate(psi, gamma, beta);
                                  Field ht = h;
                                  for (std::size_t i = 0; i < ht.size(); ++i) ht[i] *= xi.values[i];
                                  const double d = logratio_deformation(h, ht, x, y);
                                  a.identity_error = std::max(
                                      a.identity_error, std::abs(d - gamma * (psi[ix] - psi[iy])));
                                  a.values.push_back(d);
                                }
                              });

  const Eigen::MatrixXd green = green_matrix_dense(grid);
  const double r_g = green(idx(ix), idx(ix)) + green(idx(iy), idx(iy)) - 2.0 * green(idx(ix), idx(iy));
  const double var = effective_tau(gamma, beta) * r_g;
  const stats::SampleSummary s = stats::summarize(acc.values);
  const double nn = static_cast<double>(n);
  const std::string anchor = "log-ratio deformation = gamma(psi(x)-psi(y)) ~ N(0, tau R_G)";

  ReportList out;
  out.push_back(identity("logratio.identity", anchor + ": per-sample identity", acc.identity_error,
                         0.0, kIdentityTolerance, cfg, n));
  out.push_back(statistical("logratio.mean", anchor + ": mean", s.mean, 0.0, s.mean_se, cfg, n));
  out.push_back(statistical("logratio.variance", anchor + ": variance", s.variance, var,
                            s.variance_se, cfg, n));
  out.push_back(statistical("logratio.skewness", anchor + ": skewness", s.skewness, 0.0,
                            std::sqrt(6.0 / nn), cfg, n));
  out.push_back(statistical("logratio.excess_kurtosis", anchor + ": excess kurtosis",
                            s.excess_kurtosis, 0.0, std::sqrt(24.0 / nn), cfg, n));
  VerificationReport ks = identity("logratio.ks_distance", anchor + ": KS distance (alpha=0.001)",
                                   stats::ks_distance_normal(acc.values, std::sqrt(var)), 0.0,
                                   stats::ks_critical(0.001, n), cfg, n);
  out.push_back(ks);
  out.push_back(negative(statistical("logratio.variance", anchor + ": variance against 1.1 tau R_G",
                                     s.variance, 1.1 * var, s.variance_se, cfg, n)));
  finish(out, timer);
  return out;
}

ReportList check_ranking_law(const CheckConfig& cfg, std::span<const double> margins) {
  cfg.validate();
  Timer timer;
  const GridSpec grid = cfg.grid();
  require_two_sites(grid, "check_ranking_law");
  if (margins.empty()) throw ParameterError("check_ranking_law: no margins");
  for (double d : margins) {
    if (!(d > 0.0)) throw ParameterError("check_ranking_law: margins must be > 0");
  }
  const double beta = cfg.resolved_beta();
  const double gamma = cfg.gamma;
  const double q = cfg.q;
  const SpectralPlan plan(grid, beta);
  const Site x = grid.site(0);
  const Site y = grid.site(grid.size() - 1);
  const Eigen::MatrixXd green = green_matrix_dense(grid);
  const std::size_t ix = grid.index(x);
  const std::size_t iy = grid.index(y);
  const double r_g = green(idx(ix), idx(ix)) + green(idx(iy), idx(iy)) - 2.0 * green(idx(ix), idx(iy));
  const double tau = effective_tau(gamma, beta);
  const double sigma = std::sqrt(tau * r_g);

  // Margins under test followed by the growth sequence sigma * {1, 2, 4, 8}.
  std::vector<double> all(margins.begin(), margins.end());
  const std::vector<double> growth_factors = {1.0, 2.0, 4.0, 8.0};
  for (double f : growth_factors) all.push_back(f * sigma);
  const std::size_t m = all.size();
  const std::size_t n = cfg.samples;

  // h = 1 except h(x) = e^delta, so the log-margin is exactly delta.
  auto preserved = [&](const Field& multiplier, double delta) {
    Field ht(grid.height(), grid.width(), 1.0);
    ht[x] = std::exp(delta);
    for (std::size_t i = 0; i < ht.size(); ++i) ht[i] *= multiplier[i];
    return ranking_preserved(ht, x, y);
  };

  const Counts gch = monte_carlo(cfg, kRanking, 0, n, Counts(m),
                                 [&](RandomStream& rng, std::size_t count, Counts& c) {
                                   for (std::size_t s = 0; s < count; ++s) {
                                     const Gate xi = samplewise_gate(sample_gff_spectral(plan, rng), gamma, beta);
                                     for (std::size_t j = 0; j < m; ++j) c.hits[j] += preserved(xi.values, all[j]);
                                     ++c.count;
                                   }
                                 });
  const Counts drop = monte_carlo(cfg, kRanking, 1, n, Counts(m),
                                  [&](RandomStream& rng, std::size_t count, Counts& c) {
                                    for (std::size_t s = 0; s < count; ++s) {
                                      const MaskField mask = inverted_dropout_mask(grid, q, rng);
                                      for (std::size_t j = 0; j < m; ++j) c.hits[j] += preserved(mask.values, all[j]);
                                      ++c.count;
                                    }
                                  });

  ReportList out;
  Worst perturbed;
  for (std::size_t j = 0; j < margins.size(); ++j) {
    const double delta = all[j];
    const double p = gch.frequency(j);
    const double target = ranking_probability_theoretical(delta, tau, r_g);
    out.push_back(statistical("ranking.gch_delta" + fmt_num(delta),
                              "Pr(ranking kept) = Phi(delta / sqrt(tau R_G)) under the sample-wise gate",
                              p, target, stats::binomial_se(p, n), cfg, n));
    perturbed.consider(p, ranking_probability_theoretical(2.0 * delta, tau, r_g),
                       stats::binomial_se(p, n));
  }
  Worst dropout_worst;
  for (std::size_t j = 0; j < m; ++j) {
    const double p = drop.frequency(j);
    dropout_worst.consider(p, q, stats::binomial_se(p, n));
    if (j < margins.size()) {
      out.push_back(statistical("ranking.dropout_delta" + fmt_num(all[j]),
                                "Pr(ranking kept) = q under inverted dropout, for every margin", p, q,
                                stats::binomial_se(p, n), cfg, n));
    }
  }
  // Growth regime: GCh frequencies are nondecreasing along the growth
  // sequence and exceed 0.999 at its end, while dropout stays at q.
  bool monotone = true;
  for (std::size_t j = margins.size() + 1; j < m; ++j) monotone &= gch.frequency(j) >= gch.frequency(j - 1);
  VerificationReport growth = identity("ranking.growth_gch",
                                       "GCh preservation -> 1 as delta / sqrt(tau R_G) grows",
                                       gch.frequency(m - 1), 1.0, 1e-3, cfg, n);
  growth.pass = monotone && gch.frequency(m - 1) > 0.999;
  out.push_back(growth);
  out.push_back(dropout_worst.report("ranking.growth_dropout",
                                     "dropout preservation stays at q along growing margins", cfg, n));
  out.push_back(negative(perturbed.report("ranking.gch", "GCh frequency against Phi(2 delta / sigma)", cfg, n)));
  finish(out, timer);
  return out;
}

ReportList check_intrinsic_budget(const CheckConfig& cfg, const Field& h) {
  cfg.validate();
  Timer timer;
  const GridSpec grid = cfg.grid();
  if (!h.same_shape(Field(grid.height(), grid.width()))) {
    throw DimensionError("check_intrinsic_budget: h shape does not match the grid");
  }
  for (double v : h.values()) {
    if (!(v > 0.0)) throw DomainError("check_intrinsic_budget: h must be strictly positive");
  }
  const double beta = cfg.resolved_beta();
  const double gamma = cfg.gamma;
  const SpectralPlan plan(grid, beta);
  constexpr double kScale = 3.7;
  constexpr double kConstant = 2.5;
  Field log_h(grid.height(), grid.width());
  Field log_ah(grid.height(), grid.width());
  for (std::size_t i = 0; i < h.size(); ++i) {
    log_h[i] = std::log(h[i]);
    log_ah[i] = std::log(kScale * h[i]);
  }

  struct Acc {
    stats::Moments base, scaled, coherent;
    double identity_error = 0.0;
    void merge(const Acc& o) {
      base.merge(o.base);
      scaled.merge(o.scaled);
      coherent.merge(o.coherent);
      identity_error = std::max(identity_error, o.identity_error);
    }
  };
  const std::size_t n = cfg.samples;
  const Acc acc = monte_carlo(
      cfg, kIntrinsic, 0, n, Acc{}, [&](RandomStream& rng, std::size_t count, Acc& a) {
        Field lt(grid.height(), grid.width());
        Field shifted(grid.height(), grid.width());
        for (std::size_t s = 0; s < count; ++s) {
          const Field psi = sample_gff_spectral(plan, rng);
          const Gate xi = samplewise_gate(psi, gamma, beta);
          for (std::size_t i = 0; i < h.size(); ++i) {
            lt[i] = std::log(xi.values[i] * h[i]);
            shifted[i] = log_h[i] + gamma * psi[i];
          }
          const double e_base = intrinsic_energy(grid, lt);
          a.base.add(e_base);
          a.identity_error = std::max(a.identity_error, std::abs(e_base - intrinsic_energy(grid, shifted)) /
                                                            (1.0 + std::abs(e_base)));
          for (std::size_t i = 0; i < h.size(); ++i) lt[i] = std::log(xi.values[i] * (kScale * h[i]));
          a.scaled.add(intrinsic_energy(grid, lt));
          for (std::size_t i = 0; i < h.size(); ++i) lt[i] = std::log(xi.values[i] * kConstant);
          a.coherent.add(intrinsic_energy(grid, lt));
        }
      });

  const Eigen::MatrixXd cov = green_matrix_dense(grid) / beta;
  const double budget = expected_intrinsic_budget_gch(grid, cov, gamma);
  const double base_excess = acc.base.mean() - intrinsic_energy(grid, log_h);
  const double scaled_excess = acc.scaled.mean() - intrinsic_energy(grid, log_ah);
  const std::string anchor = "E[E_int(log h~)] = E_int(log h) + gamma^2 1/2 Tr(L_int C)";

  ReportList out;
  out.push_back(identity("intrinsic_budget.identity", anchor + ": constant shift drops out",
                         acc.identity_error, 0.0, kIdentityTolerance, cfg, n));
  out.push_back(statistical("intrinsic_budget.budget", anchor, base_excess, budget,
                            acc.base.standard_error(), cfg, n));
  out.push_back(identity("intrinsic_budget.scale_compatibility",
                         "added intrinsic roughness is invariant under h -> a h", scaled_excess,
                         base_excess, kIdentityTolerance, cfg, n));
  out.push_back(statistical("intrinsic_budget.perfect_coherence",
                            "constant positive map acquires exactly gamma^2 eps_int in expectation",
                            acc.coherent.mean(), budget, acc.coherent.standard_error(), cfg, n));
  out.push_back(negative(statistical("intrinsic_budget.budget", anchor + " against 1.5x budget",
                                     base_excess, 1.5 * budget, acc.base.standard_error(), cfg, n)));
  finish(out, timer);
  return out;
}

ReportList check_dropout_inflation(const CheckConfig& cfg, const Field& h) {
  cfg.validate();
  Timer timer;
  const GridSpec grid = cfg.grid();
  if (!h.same_shape(Field(grid.height(), grid.width()))) {
    throw DimensionError("check_dropout_inflation: h shape does not match the grid");
  }
  const double q = cfg.q;

  // Exhaustive enumeration on every small grid, plus the configured grid when
  // it is small enough.
  std::vector<std::pair<GridSpec, Field>> cases;
  const std::vector<std::pair<int, int>> shapes = {{1, 2}, {2, 2}, {2, 3}, {3, 3}, {3, 4}, {2, 6}};
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    const GridSpec g(shapes[i].first, shapes[i].second);
    cases.emplace_back(g, positive_test_field(g, cfg.seed, 100 * kDropout + i));
  }
  if (grid.size() <= 12) cases.emplace_back(grid, h);

  double max_err = 0.0, max_coherence_err = 0.0, max_constant_err = 0.0;
  double min_constant = std::numeric_limits<double>::infinity();
  for (const auto& [g, field] : cases) {
    const double enumerated = enumerate_dropout_energy(g, field, q);
    const double formula = dropout_energy_expected(g, field, q);
    max_err = std::max(max_err, std::abs(enumerated - formula));
    const double e_int = intrinsic_energy(g, field);
    if (e_int > 0.0) {
      const double factor = 1.0 + (1.0 - q) / q * coherence_score(g, field);
      max_coherence_err = std::max(max_coherence_err, std::abs(enumerated / e_int - factor));
    }
    const double c = 1.5;
    const Field constant(g.height(), g.width(), c);
    double degree_sum = 0.0;
    for (std::size_t a = 0; a < g.size(); ++a) degree_sum += intrinsic_degree(g, g.site(a));
    const double constant_target = (1.0 - q) / (2.0 * q) * c * c * degree_sum;
    const double constant_enum = enumerate_dropout_energy(g, constant, q);
    max_constant_err = std::max(max_constant_err, std::abs(constant_enum - constant_target));
    min_constant = std::min(min_constant, constant_enum);
  }

  const std::size_t n = cfg.samples;
  const auto acc = monte_carlo(cfg, kDropout, 0, n, stats::Moments{},
                               [&](RandomStream& rng, std::size_t count, stats::Moments& m) {
                                 Field masked(grid.height(), grid.width());
                                 for (std::size_t s = 0; s < count; ++s) {
                                   const MaskField mask = inverted_dropout_mask(grid, q, rng);
                                   for (std::size_t i = 0; i < masked.size(); ++i) masked[i] = mask.values[i] * h[i];
                                   m.add(intrinsic_energy(grid, masked));
                                 }
                               });
  const std::string anchor = "E[E_int(m_q h)] = E_int(h) + (1-q)/(2q) sum_x d_x h(x)^2";
  ReportList out;
  out.push_back(identity("dropout_inflation.exhaustive", anchor + " (all 2^n masks)", max_err, 0.0,
                         1e-12, cfg, 0));
  out.push_back(identity("dropout_inflation.coherence_factor",
                         "E[E_int(m_q h)]/E_int(h) = 1 + (1-q)/q kappa(h)", max_coherence_err, 0.0,
                         1e-12, cfg, 0));
  VerificationReport constant = identity("dropout_inflation.perfect_coherence",
                                         "constant map: expected energy (1-q)/(2q) c^2 sum d_x > 0",
                                         max_constant_err, 0.0, 1e-12, cfg, 0);
  constant.pass = constant.pass && (q == 1.0 || min_constant > 0.0);
  out.push_back(constant);
  out.push_back(statistical("dropout_inflation.monte_carlo", anchor, acc.mean(),
                            dropout_energy_expected(grid, h, q), acc.standard_error(), cfg, n));
  if (q < 1.0) {
    out.push_back(negative(statistical("dropout_inflation.monte_carlo", anchor + " against E_int(h)",
                                       acc.mean(), intrinsic_energy(grid, h), acc.standard_error(),
                                       cfg, n)));
  }
  finish(out, timer);
  return out;
}

ReportList check_mask_singularity(const CheckConfig& cfg) {
  cfg.validate();
  Timer timer;
  const GridSpec grid = cfg.grid();
  require_two_sites(grid, "check_mask_singularity");
  const double q = cfg.q;
  const Site x = grid.site(0);
  const Site y = grid.site(1);
  const Field h = positive_test_field(grid, cfg.seed, kMask);
  const std::size_t n = cfg.samples;
  // hits: finite, minus infinity, plus infinity, undefined.
  const Counts acc = monte_carlo(cfg, kMask, 0, n, Counts(4),
                                 [&](RandomStream& rng, std::size_t count, Counts& c) {
                                   for (std::size_t s = 0; s < count; ++s) {
                                     const MaskField mask = inverted_dropout_mask(grid, q, rng);
                                     const auto kind = masked_logratio(h, mask, x, y).kind();
                                     ++c.hits[static_cast<std::size_t>(kind == ExtendedLogRatio::Kind::Finite ? 0
                                                                       : kind == ExtendedLogRatio::Kind::MinusInfinity ? 1
                                                                       : kind == ExtendedLogRatio::Kind::PlusInfinity ? 2
                                                                                                                       : 3)];
                                     ++c.count;
                                   }
                                 });
  const std::string anchor = "binary-mask log-ratio events at distinct sites";
  auto freq_report = [&](std::string name, double p, double target) {
    return statistical(std::move(name), anchor, p, target, stats::binomial_se(p, n), cfg, n);
  };
  ReportList out;
  out.push_back(freq_report("mask_singularity.finite", acc.frequency(0), q * q));
  out.push_back(freq_report("mask_singularity.minus_infinity", acc.frequency(1), q * (1.0 - q)));
  out.push_back(freq_report("mask_singularity.plus_infinity", acc.frequency(2), q * (1.0 - q)));
  out.push_back(freq_report("mask_singularity.undefined", acc.frequency(3), (1.0 - q) * (1.0 - q)));
  out.push_back(freq_report("mask_singularity.asymmetric", acc.frequency(1) + acc.frequency(2),
                            2.0 * q * (1.0 - q)));
  out.push_back(freq_report("mask_singularity.any_zero", 1.0 - acc.frequency(0), 1.0 - q * q));
  if (q < 1.0) out.push_back(negative(freq_report("mask_singularity.finite", acc.frequency(0), q)));
  finish(out, timer);
  return out;
}

ReportList check_sandwich_and_oscillation(const CheckConfig& cfg) {
  cfg.validate();
  Timer timer;
  const GridSpec grid = cfg.grid();
  const double beta = cfg.resolved_beta();
  const double gamma = cfg.gamma;
  const SpectralPlan plan(grid, beta);
  const Field h = positive_test_field(grid, cfg.seed, kSandwich);
  std::vector<double> thresholds(h.values().begin(), h.values().end());
  for (double t : {0.6, 0.8, 1.0, 1.2, 1.5, 1.8}) thresholds.push_back(t);

  // hits: sandwich violations, oscillation-bound violations, violations of
  // the deliberately too-tight bound |gamma| osc / 4.
  const std::size_t n = cfg.samples;
  const Counts acc = monte_carlo(
      cfg, kSandwich, 0, n, Counts(3), [&](RandomStream& rng, std::size_t count, Counts& c) {
        Field gated(grid.height(), grid.width());
        for (std::size_t s = 0; s < count; ++s) {
          const Field psi = sample_gff_spectral(plan, rng);
          const Gate xi = samplewise_gate(psi, gamma, beta);
          double eta = 0.0;
          for (double v : xi.values.values()) eta = std::max(eta, std::abs(std::log(v)));
          const double bound = std::abs(gamma) * oscillation(psi);
          c.hits[1] += eta > bound + 1e-12;
          c.hits[2] += eta > 0.25 * bound + 1e-12;
          for (std::size_t i = 0; i < h.size(); ++i) gated[i] = xi.values[i] * h[i];
          bool ok = true;
          for (double t : thresholds) {
            const SiteSet inner = superlevel_set(h, t * std::exp(eta));
            const SiteSet middle = superlevel_set(gated, t);
            const SiteSet outer = superlevel_set(h, t * std::exp(-eta));
            ok &= is_subset(inner, middle) && is_subset(middle, outer);
          }
          c.hits[0] += !ok;
          ++c.count;
        }
      });
  ReportList out;
  out.push_back(identity("sandwich.violations",
                         "S_{t e^eta}(h) in S_t(xi h) in S_{t e^-eta}(h) with eta = ||log xi||_inf",
                         static_cast<double>(acc.hits[0]), 0.0, 0.0, cfg, n));
  out.push_back(identity("oscillation.violations", "||log xi_sw||_inf <= |gamma| osc(psi)",
                         static_cast<double>(acc.hits[1]), 0.0, 0.0, cfg, n));
  out.push_back(negative(identity("oscillation.violations", "||log xi_sw||_inf <= |gamma| osc(psi) / 4",
                                  static_cast<double>(acc.hits[2]), 0.0, 0.0, cfg, n)));
  finish(out, timer);
  return out;
}

ReportList check_cycle_fracture(const CheckConfig& cfg, int cycle_length) {
  cfg.validate();
  Timer timer;
  const CycleGraph graph(cycle_length, 1.0);
  const GridSpec carrier(1, cycle_length);
  const double q = cfg.q;
  const double c = graph.values()[0];
  const double t = 0.5 * c / q;  // any t in (0, c/q) selects exactly the kept vertices
  const std::size_t n = cfg.samples;
  // hits: loop survives, samples where (b1 == 1) differs from (all kept).
  const Counts acc = monte_carlo(cfg, kCycle, static_cast<std::uint64_t>(cycle_length), n, Counts(2),
                                 [&](RandomStream& rng, std::size_t count, Counts& hc) {
                                   std::vector<double> values(static_cast<std::size_t>(cycle_length));
                                   for (std::size_t s = 0; s < count; ++s) {
                                     const MaskField mask = inverted_dropout_mask(carrier, q, rng);
                                     for (std::size_t v = 0; v < values.size(); ++v)
                                       values[v] = mask.values[v] * graph.values()[v];
                                     const SiteSet kept = superlevel_set(values, t);
                                     const BettiNumbers b = betti_numbers_cycle(graph, kept);
                                     hc.hits[0] += b.b1 == 1;
                                     hc.hits[1] += (b.b1 == 1) != (kept.size() == values.size());
                                     ++hc.count;
                                   }
                                 });
  const double target = std::pow(q, cycle_length);
  const double p = acc.frequency(0);
  const std::string name = "cycle_fracture.n" + std::to_string(cycle_length);
  const std::string anchor = "inverted dropout keeps the loop of C_n with probability q^n";
  ReportList out;
  out.push_back(statistical(name, anchor, p, target, stats::binomial_se(p, n), cfg, n));
  out.push_back(identity(name + ".loop_iff_all_kept", "b1 = 1 exactly when no vertex is dropped",
                         static_cast<double>(acc.hits[1]), 0.0, 0.0, cfg, n));
  if (q < 1.0) {
    out.push_back(negative(statistical(name, anchor + " against q^(n-1)", p,
                                       std::pow(q, cycle_length - 1), stats::binomial_se(p, n), cfg, n)));
  }
  finish(out, timer);
  return out;
}

ReportList check_samplewise_mean_one(const CheckConfig& cfg) {
  cfg.validate();
  Timer timer;
  const GridSpec grid = cfg.grid();
  const double beta = cfg.resolved_beta();
  const SpectralPlan plan(grid, beta);
  const std::size_t n = std::min<std::size_t>(cfg.samples, 10000);
  struct Acc {
    double mean_error = 0.0;
    std::uint64_t nonpositive = 0;
    void merge(const Acc& o) {
      mean_error = std::max(mean_error, o.mean_error);
      nonpositive += o.nonpositive;
    }
  };
  const std::vector<double> gammas = {cfg.gamma, 2.0};
  const Acc acc = monte_carlo(cfg, kMeanOne, 0, n, Acc{},
                              [&](RandomStream& rng, std::size_t count, Acc& a) {
                                for (std::size_t s = 0; s < count; ++s) {
                                  const Field psi = sample_gff_spectral(plan, rng);
                                  for (double gamma : gammas) {
                                    const Gate sw = samplewise_gate(psi, gamma, beta);
                                    const Gate ex = exact_wick_gate(plan, psi, gamma);
                                    a.mean_error = std::max(a.mean_error, std::abs(sw.values.mean() - 1.0));
                                    for (std::size_t i = 0; i < psi.size(); ++i) {
                                      a.nonpositive += !(sw.values[i] > 0.0);
                                      a.nonpositive += !(ex.values[i] > 0.0);
                                    }
                                  }
                                }
                              });
  ReportList out;
  out.push_back(identity("samplewise_mean_one", "spatial mean of the sample-wise gate is 1",
                         acc.mean_error, 0.0, 1e-12, cfg, n));
  out.push_back(identity("gate_positivity", "every gate value is > 0 (gamma up to 2)",
                         static_cast<double>(acc.nonpositive), 0.0, 0.0, cfg, n));
  finish(out, timer);
  return out;
}

ReportList check_residual_interpolation(const CheckConfig& cfg) {
  cfg.validate();
  Timer timer;
  const GridSpec grid = cfg.grid();
  const double beta = cfg.resolved_beta();
  const SpectralPlan plan(grid, beta);
  const std::size_t n = std::min<std::size_t>(cfg.samples, 1000);
  constexpr int kChannels = 3;
  struct Acc {
    double error = 0.0;
    double alpha_one_error = 0.0;
    void merge(const Acc& o) {
      error = std::max(error, o.error);
      alpha_one_error = std::max(alpha_one_error, o.alpha_one_error);
    }
  };
  const Acc acc = monte_carlo(
      cfg, kResidual, 0, n, Acc{}, [&](RandomStream& rng, std::size_t count, Acc& a) {
        for (std::size_t s = 0; s < count; ++s) {
          FeatureMap f(kChannels, grid.height(), grid.width());
          rng.fill_normal(f.values());
          const Gate xi = samplewise_gate(sample_gff_spectral(plan, rng), cfg.gamma, beta);
          const FeatureMap full = inject_multiplicative(f, xi);
          for (double alpha : {0.25, 0.5, 0.75, 1.0}) {
            const FeatureMap res = inject_residual(f, xi, alpha);
            for (std::size_t i = 0; i < f.size(); ++i) {
              const double expected = (1.0 - alpha) * f.values()[i] + alpha * full.values()[i];
              a.error = std::max(a.error, std::abs(res.values()[i] - expected));
              if (alpha == 1.0) {
                a.alpha_one_error = std::max(a.alpha_one_error, std::abs(res.values()[i] - full.values()[i]));
              }
            }
          }
        }
      });
  ReportList out;
  out.push_back(identity("residual_interpolation",
                         "F(1 + alpha(xi - 1)) = (1 - alpha) F + alpha F xi", acc.error, 0.0, 1e-12,
                         cfg, n));
  out.push_back(identity("residual_alpha_one", "alpha = 1 reproduces multiplicative injection",
                         acc.alpha_one_error, 0.0, 0.0, cfg, n));
  finish(out, timer);
  return out;
}

namespace {

using CheckFn = std::function<ReportList(const CheckConfig&)>;

const std::vector<std::pair<std::string, CheckFn>>& registry() {
  static const std::vector<std::pair<std::string, CheckFn>> checks = {
      {"energy_budget", [](const CheckConfig& c) { return check_energy_budget(c); }},
      {"gff_covariance", [](const CheckConfig& c) { return check_gff_covariance(c); }},
      {"exact_gate_moments", [](const CheckConfig& c) { return check_exact_gate_moments(c, 4); }},
      {"tau_sufficiency", [](const CheckConfig& c) { return check_tau_sufficiency(c); }},
      {"small_gamma", [](const CheckConfig& c) { return check_small_gamma(c); }},
      {"logratio_law",
       [](const CheckConfig& c) {
         const GridSpec g = c.grid();
         require_two_sites(g, "logratio_law");
         return check_logratio_law(c, g.site(0), g.site(g.size() - 1));
       }},
      {"ranking_law",
       [](const CheckConfig& c) {
         const std::vector<double> margins = {0.05, 0.2, 1.0};
         return check_ranking_law(c, margins);
       }},
      {"intrinsic_budget",
       [](const CheckConfig& c) {
         return check_intrinsic_budget(c, positive_test_field(c.grid(), c.seed, kIntrinsic));
       }},
      {"dropout_inflation",
       [](const CheckConfig& c) {
         return check_dropout_inflation(c, positive_test_field(c.grid(), c.seed, kDropout));
       }},
      {"mask_singularity", [](const CheckConfig& c) { return check_mask_singularity(c); }},
      {"sandwich_oscillation", [](const CheckConfig& c) { return check_sandwich_and_oscillation(c); }},
      {"cycle_fracture",
       [](const CheckConfig& c) {
         ReportList out = check_cycle_fracture(c, 4);
         ReportList six = check_cycle_fracture(c, 6);
         out.insert(out.end(), six.begin(), six.end());
         return out;
       }},
      {"samplewise_mean_one", [](const CheckConfig& c) { return check_samplewise_mean_one(c); }},
      {"residual_interpolation", [](const CheckConfig& c) { return check_residual_interpolation(c); }},
  };
  return checks;
}

}  // namespace

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : registry()) out.push_back(name);
    return out;
  }();
  return names;
}

bool is_check_name(const std::string& name) {
  const auto& names = check_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

ReportList run_check(const std::string& name, const CheckConfig& cfg) {
  for (const auto& [n, fn] : registry()) {
    if (n == name) return fn(cfg);
  }
  throw ParameterError("unknown check: " + name);
}

ReportList run_all(const CheckConfig& cfg) {
  cfg.validate();
  ReportList out;
  for (const auto& [name, fn] : registry()) {
    ReportList part = fn(cfg);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

bool all_ok(const ReportList& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.ok(); });
}

std::string to_json_line(const VerificationReport& r, bool include_timing) {
  nlohmann::ordered_json j;
  j["check"] = r.check;
  j["anchor"] = r.anchor;
  j["empirical"] = r.empirical;
  j["theoretical"] = r.theoretical;
  j["se"] = r.se;
  j["tol"] = r.tolerance;
  j["pass"] = r.pass;
  j["negative_control"] = r.negative_control;
  j["N"] = r.samples;
  j["seed"] = r.seed;
  j["ms"] = include_timing ? r.wall_ms : 0.0;
  return j.dump();
}

std::string csv_header() { return "check,anchor,empirical,theoretical,se,tol,pass,N,seed,ms"; }

std::string to_csv_row(const VerificationReport& r, bool include_timing) {
  auto quoted = [](const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
      if (ch == '"') out += '"';
      out += ch;
    }
    return out + "\"";
  };
  char buf[256];
  std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%s,%zu,%llu,%.3f", r.empirical,
                r.theoretical, r.se, r.tolerance, r.pass ? "true" : "false", r.samples,
                static_cast<unsigned long long>(r.seed), include_timing ? r.wall_ms : 0.0);
  return r.check + "," + quoted(r.anchor) + "," + buf;
}

}  // namespace gch::verify
