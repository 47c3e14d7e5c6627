#include <doctest.h>

#include <cmath>
#include <random>

#include "gch/baselines.hpp"
#include "gch/error.hpp"
#include "gch/gates.hpp"
#include "gch/metrics.hpp"
#include "gch/sampler.hpp"
#include "gch/stats.hpp"

using namespace gch;

namespace {

Field positive_field(int h, int w, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.3, 3.0);
  Field f(h, w);
  for (double& v : f.values()) v = u(gen);
  return f;
}

// Intrinsic energy from an explicit edge list.
double edge_energy(const Field& f) {
  double e = 0.0;
  for (int r = 0; r < f.height(); ++r) {
    for (int c = 0; c < f.width(); ++c) {
      if (c + 1 < f.width()) e += 0.5 * std::pow(f(r, c) - f(r, c + 1), 2);
      if (r + 1 < f.height()) e += 0.5 * std::pow(f(r, c) - f(r + 1, c), 2);
    }
  }
  return e;
}

double enumerate(const Field& h, double q) {
  const std::size_t n = h.size();
  double total = 0.0;
  for (unsigned bits = 0; bits < (1u << n); ++bits) {
    Field m(h.height(), h.width());
    double prob = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const bool keep = (bits >> i) & 1u;
      m[i] = keep ? h[i] / q : 0.0;
      prob *= keep ? q : 1.0 - q;
    }
    total += prob * edge_energy(m);
  }
  return total;
}

}  // namespace

TEST_CASE("log-ratio deformation") {
  const Field h = positive_field(3, 3, 1);
  const Site x{0, 0}, y{2, 1};
  CHECK(logratio_deformation(h, h, x, y) == 0.0);

  const SpectralPlan plan(GridSpec(3, 3), 1.0);
  RandomStream rng(2, 0);
  for (int t = 0; t < 1000; ++t) {
    const Field psi = sample_gff_spectral(plan, rng);
    const Gate xi = samplewise_gate(psi, 0.7);
    Field ht = h, scaled = h, scaled_t = h;
    for (std::size_t i = 0; i < h.size(); ++i) {
      ht[i] = xi.values[i] * h[i];
      scaled[i] = 4.2 * h[i];
      scaled_t[i] = xi.values[i] * scaled[i];
    }
    const double d = logratio_deformation(h, ht, x, y);
    CHECK(std::abs(d - 0.7 * (psi[x] - psi[y])) <= 1e-10);
    CHECK(std::abs(logratio_deformation(scaled, scaled_t, x, y) - d) <= 1e-12);
  }
  Field bad = h;
  bad[x] = 0.0;
  CHECK_THROWS_AS(logratio_deformation(h, bad, x, y), DomainError);
  CHECK_THROWS_AS(logratio_deformation(bad, h, x, y), DomainError);
}

TEST_CASE("log-ratio variance and ranking law") {
  const GridSpec two(2, 1);
  CHECK(logratio_variance_theoretical(two, 0.1, Site{0, 0}, Site{1, 0}) == doctest::Approx(0.04));
  CHECK(logratio_variance_theoretical(two, 0.1, Site{1, 0}, Site{1, 0}) == 0.0);
  CHECK_THROWS_AS(logratio_variance_theoretical(two, 0.1, Site{2, 0}, Site{1, 0}), IndexError);

  CHECK(ranking_probability_theoretical(0.2, 0.1, 0.4) == doctest::Approx(0.841344746068543).epsilon(1e-12));
  CHECK(ranking_probability_theoretical(1e-12, 1.0, 1.0) == doctest::Approx(0.5));
  for (double u : {1.0, 2.0, 3.0}) {
    CHECK(1.0 - ranking_probability_theoretical(u, 1.0, 1.0) <= std::exp(-u * u / 2.0));
  }
  CHECK_THROWS_AS(ranking_probability_theoretical(0.2, 0.0, 0.4), DegenerateVarianceError);
  CHECK_THROWS_AS(ranking_probability_theoretical(0.2, 0.1, 0.0), DegenerateVarianceError);
  CHECK_THROWS_AS(ranking_probability_theoretical(0.0, 0.1, 0.4), ParameterError);

  // Phi cross-checked by trapezoidal integration of the density.
  double integral = 0.5;
  const int steps = 200000;
  for (int i = 0; i < steps; ++i) {
    const double a = static_cast<double>(i) / steps, b = static_cast<double>(i + 1) / steps;
    integral += 0.5 * (b - a) * (std::exp(-a * a / 2) + std::exp(-b * b / 2)) / std::sqrt(2.0 * M_PI);
  }
  CHECK(stats::normal_cdf(1.0) == doctest::Approx(integral).epsilon(1e-9));
}

TEST_CASE("ranking preservation is strict") {
  const Field f(1, 2, {2.0, 1.0});
  CHECK(ranking_preserved(f, Site{0, 0}, Site{0, 1}));
  CHECK_FALSE(ranking_preserved(f, Site{0, 1}, Site{0, 0}));
  CHECK_FALSE(ranking_preserved(Field(1, 2, 1.0), Site{0, 0}, Site{0, 1}));
}

TEST_CASE("dropout ranking is margin blind") {
  const GridSpec g(1, 2);
  RandomStream rng(3, 0);
  const double q = 0.7;
  const std::size_t n = 200000;
  for (double margin : {1.01, 3.0}) {
    const Field h(1, 2, {margin, 1.0});
    std::size_t kept = 0;
    for (std::size_t s = 0; s < n; ++s) {
      const MaskField m = inverted_dropout_mask(g, q, rng);
      Field ht = h;
      for (std::size_t i = 0; i < 2; ++i) ht[i] *= m.values[i];
      kept += ranking_preserved(ht, Site{0, 0}, Site{0, 1});
    }
    const double p = static_cast<double>(kept) / n;
    CHECK(std::abs(p - q) <= 4.0 * stats::binomial_se(p, n));
  }
}

TEST_CASE("masked log-ratio states") {
  const Field h(1, 2, {2.0, 3.0});
  const Site x{0, 0}, y{0, 1};
  auto mask = [](double a, double b) { return MaskField{Field(1, 2, {a, b}), 0.5, 2.0, false}; };
  const ExtendedLogRatio finite = masked_logratio(h, mask(2.0, 2.0), x, y);
  CHECK(finite.is_finite());
  CHECK(finite.value() == doctest::Approx(std::log(2.0 / 3.0)));
  CHECK(masked_logratio(h, mask(0.0, 2.0), x, y).kind() == ExtendedLogRatio::Kind::MinusInfinity);
  CHECK(masked_logratio(h, mask(2.0, 0.0), x, y).kind() == ExtendedLogRatio::Kind::PlusInfinity);
  CHECK(masked_logratio(h, mask(0.0, 0.0), x, y).kind() == ExtendedLogRatio::Kind::Undefined);

  RandomStream rng(4, 0);
  const double q = 0.6;
  const std::size_t n = 1000000;
  std::size_t singular = 0;
  for (std::size_t s = 0; s < n; ++s) {
    singular += !masked_logratio(h, inverted_dropout_mask(GridSpec(1, 2), q, rng), x, y).is_finite();
  }
  const double p = static_cast<double>(singular) / n;
  CHECK(std::abs(p - 0.64) <= 4.0 * stats::binomial_se(p, n));
}

TEST_CASE("intrinsic budget of the gate") {
  const GridSpec two(2, 1);
  const Eigen::MatrixXd c = green_matrix_dense(two);
  CHECK(expected_intrinsic_budget_gch(two, c, 0.0) == 0.0);
  CHECK(expected_intrinsic_budget_gch(two, c, 0.5) == doctest::Approx(0.05));
  CHECK_THROWS_AS(expected_intrinsic_budget_gch(two, Eigen::MatrixXd::Identity(3, 3), 0.5), DimensionError);
}

TEST_CASE("constant map acquires exactly the budgeted roughness") {
  const GridSpec g(3, 3);
  const double beta = 1.0, gamma = 0.5;
  const SpectralPlan plan(g, beta);
  const double budget = expected_intrinsic_budget_gch(g, green_matrix_dense(g) / beta, gamma);
  RandomStream rng(5, 0);
  stats::Moments m;
  for (int s = 0; s < 500000; ++s) {
    const Gate xi = samplewise_gate(sample_gff_spectral(plan, rng), gamma, beta);
    Field log_ht(3, 3);
    for (std::size_t i = 0; i < 9; ++i) log_ht[i] = std::log(2.0 * xi.values[i]);
    m.add(intrinsic_energy(g, log_ht));
  }
  CHECK(std::abs(m.mean() - budget) <= 4.0 * m.standard_error());
}

TEST_CASE("dropout energy inflation") {
  const GridSpec g22(2, 2);
  const Field ones(2, 2, 1.0);
  CHECK(dropout_energy_expected(g22, ones, 0.5) == doctest::Approx(4.0));
  CHECK(enumerate(ones, 0.5) == doctest::Approx(4.0).epsilon(1e-14));
  const Field h = positive_field(2, 3, 6);
  CHECK(dropout_energy_expected(GridSpec(2, 3), h, 1.0) == intrinsic_energy(GridSpec(2, 3), h));
  CHECK_THROWS_AS(dropout_energy_expected(g22, ones, 0.0), ParameterError);

  std::uint64_t seed = 10;
  for (const auto& [rows, cols] : {std::pair{1, 1}, {1, 2}, {1, 3}, {2, 1}, {2, 2}, {2, 3}, {3, 2}}) {
    for (double q : {0.2, 0.5, 0.85}) {
      const Field f = positive_field(rows, cols, seed++);
      CHECK(std::abs(enumerate(f, q) - dropout_energy_expected(GridSpec(rows, cols), f, q)) <= 1e-12);
      const Field c(rows, cols, 1.7);
      double degree_sum = 0.0;
      const GridSpec grid(rows, cols);
      for (std::size_t a = 0; a < grid.size(); ++a) degree_sum += intrinsic_degree(grid, grid.site(a));
      const double constant = enumerate(c, q);
      CHECK(std::abs(constant - (1.0 - q) / (2.0 * q) * 1.7 * 1.7 * degree_sum) <= 1e-12);
      if (degree_sum > 0.0) CHECK(constant > 0.0);
    }
  }

  const GridSpec g33(3, 3);
  const Field h33 = positive_field(3, 3, 7);
  RandomStream rng(8, 0);
  stats::Moments m;
  for (int s = 0; s < 1000000; ++s) {
    const MaskField mask = inverted_dropout_mask(g33, 0.6, rng);
    Field masked = h33;
    for (std::size_t i = 0; i < 9; ++i) masked[i] *= mask.values[i];
    m.add(intrinsic_energy(g33, masked));
  }
  CHECK(std::abs(m.mean() - dropout_energy_expected(g33, h33, 0.6)) <= 4.0 * m.standard_error());
}

TEST_CASE("coherence score") {
  const GridSpec path(1, 2);
  CHECK(coherence_score(path, Field(1, 2, {1.0, 2.0})) == doctest::Approx(5.0));
  CHECK(coherence_score(path, Field(1, 2, {3.0, 6.0})) == doctest::Approx(5.0));
  CHECK_THROWS_AS(coherence_score(path, Field(1, 2, 1.0)), CoherenceUndefinedError);
  double previous = 0.0;
  for (int l : {1, 10, 100, 1000}) {
    const double k = coherence_score(path, Field(1, 2, {1.0, 1.0 + 1.0 / l}));
    CHECK(k > previous);
    previous = k;
  }
  CHECK(previous > 1e6);

  const GridSpec g(3, 4);
  const Field h = positive_field(3, 4, 9);
  for (double q : {0.3, 0.8}) {
    const double ratio = dropout_energy_expected(g, h, q) / intrinsic_energy(g, h);
    CHECK(std::abs(ratio - (1.0 + (1.0 - q) / q * coherence_score(g, h))) <= 1e-12 * ratio);
  }
}

TEST_CASE("oscillation and superlevel sets") {
  CHECK(oscillation(Field(2, 2, 0.3)) == 0.0);
  CHECK(oscillation(Field(1, 2, {-1.0, 2.0})) == 3.0);
  const Field f(2, 2, {0.5, 1.5, 1.0, 2.0});
  CHECK(superlevel_set(f, 0.1) == SiteSet{0, 1, 2, 3});
  CHECK(superlevel_set(f, 3.0).empty());
  CHECK(superlevel_set(f, 1.0) == SiteSet{1, 2, 3});
  CHECK_THROWS_AS(superlevel_set(f, 0.0), ParameterError);
  CHECK(is_subset(SiteSet{1, 3}, SiteSet{0, 1, 3}));
  CHECK_FALSE(is_subset(SiteSet{2}, SiteSet{0, 1, 3}));
}

TEST_CASE("sandwich and oscillation bound on random draws") {
  const GridSpec g(4, 4);
  const SpectralPlan plan(g, 1.0);
  const Field h = positive_field(4, 4, 12);
  RandomStream rng(13, 0);
  const double gamma = 0.8;
  for (int s = 0; s < 10000; ++s) {
    const Field psi = sample_gff_spectral(plan, rng);
    const Gate xi = samplewise_gate(psi, gamma);
    double eta = 0.0;
    Field gated = h;
    for (std::size_t i = 0; i < 16; ++i) {
      eta = std::max(eta, std::abs(std::log(xi.values[i])));
      gated[i] *= xi.values[i];
    }
    REQUIRE(eta <= gamma * oscillation(psi) + 1e-12);
    for (double t : {0.5, 1.0, 1.7, 2.5}) {
      const SiteSet mid = superlevel_set(gated, t);
      REQUIRE(is_subset(superlevel_set(h, t * std::exp(eta)), mid));
      REQUIRE(is_subset(mid, superlevel_set(h, t * std::exp(-eta))));
    }
  }
}

TEST_CASE("cycle and grid Betti numbers") {
  const CycleGraph c4(4);
  CHECK(betti_numbers_cycle(c4, SiteSet{0, 1, 2, 3}) == BettiNumbers{1, 1});
  CHECK(betti_numbers_cycle(c4, SiteSet{0, 1, 3}) == BettiNumbers{1, 0});
  CHECK(betti_numbers_cycle(c4, SiteSet{0, 2}) == BettiNumbers{2, 0});
  CHECK(betti_numbers_cycle(c4, SiteSet{}) == BettiNumbers{0, 0});
  CHECK_THROWS_AS(CycleGraph(2), ParameterError);
  // Exhaustive: b1 = 1 exactly when every vertex is kept.
  for (int n = 3; n <= 8; ++n) {
    const CycleGraph g(n);
    for (unsigned bits = 0; bits < (1u << n); ++bits) {
      SiteSet kept;
      for (int v = 0; v < n; ++v)
        if ((bits >> v) & 1u) kept.push_back(static_cast<std::size_t>(v));
      const BettiNumbers b = betti_numbers_cycle(g, kept);
      CHECK(b.b1 == (kept.size() == static_cast<std::size_t>(n) ? 1 : 0));
    }
  }
  const GridSpec g22(2, 2);
  CHECK(betti_numbers_grid(g22, SiteSet{0, 1, 2, 3}) == BettiNumbers{1, 1});
  CHECK(betti_numbers_grid(g22, SiteSet{0, 3}) == BettiNumbers{2, 0});
  const GridSpec g33(3, 3);
  CHECK(betti_numbers_grid(g33, SiteSet{0, 1, 2, 3, 5, 6, 7, 8}) == BettiNumbers{1, 1});
  CHECK(betti_numbers_grid(g33, SiteSet{0, 1, 2, 3, 4, 5, 6, 7, 8}) == BettiNumbers{1, 4});
}
