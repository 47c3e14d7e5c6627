#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "gch/baselines.hpp"
#include "gch/field.hpp"
#include "gch/grid.hpp"

namespace gch {

/// log(a/b) on the extended real line, keeping the three singular outcomes
/// of hard masking apart.
class ExtendedLogRatio {
 public:
  enum class Kind { Finite, PlusInfinity, MinusInfinity, Undefined };

  static ExtendedLogRatio finite(double value) { return {Kind::Finite, value}; }
  static ExtendedLogRatio plus_infinity() { return {Kind::PlusInfinity, 0.0}; }
  static ExtendedLogRatio minus_infinity() { return {Kind::MinusInfinity, 0.0}; }
  static ExtendedLogRatio undefined() { return {Kind::Undefined, 0.0}; }

  Kind kind() const noexcept { return kind_; }
  bool is_finite() const noexcept { return kind_ == Kind::Finite; }
  /// Only meaningful when is_finite().
  double value() const noexcept { return value_; }

 private:
  ExtendedLogRatio(Kind kind, double value) : kind_(kind), value_(value) {}
  Kind kind_;
  double value_;
};

/// Sorted row-major site indices.
using SiteSet = std::vector<std::size_t>;

struct BettiNumbers {
  int b0 = 0;
  int b1 = 0;
  friend bool operator==(const BettiNumbers&, const BettiNumbers&) = default;
};

/// Cycle graph C_n with a value per vertex.
class CycleGraph {
 public:
  explicit CycleGraph(int n, double fill = 1.0);
  CycleGraph(std::vector<double> values);

  int size() const noexcept { return static_cast<int>(values_.size()); }
  std::span<const double> values() const noexcept { return values_; }

 private:
  std::vector<double> values_;
};

/// log(h~(x)/h~(y)) - log(h(x)/h(y)) for strictly positive h, h~.
double logratio_deformation(const Field& h, const Field& h_tilde, Site x, Site y);

/// tau R_G(x, y).
double logratio_variance_theoretical(const GridSpec& grid, double tau, Site x, Site y);

/// Phi(delta / sqrt(tau R)).
double ranking_probability_theoretical(double delta, double tau, double r);

/// Strict h~(x) > h~(y); ties are not preserved.
bool ranking_preserved(const Field& h_tilde, Site x, Site y);

/// Log-ratio of the masked field m h at (x, y).
ExtendedLogRatio masked_logratio(const Field& h, const MaskField& mask, Site x, Site y);

/// gamma^2 * 1/2 Tr(L_int C).
double expected_intrinsic_budget_gch(const GridSpec& grid, const Eigen::MatrixXd& covariance,
                                     double gamma);

/// E_int(h) + (1-q)/(2q) sum_x d_x h(x)^2: expected intrinsic energy of the
/// inverted-dropout-masked field.
double dropout_energy_expected(const GridSpec& grid, const Field& h, double q);

/// kappa(h) = sum_x d_x h(x)^2 / (2 E_int(h)).
double coherence_score(const GridSpec& grid, const Field& h);

/// max psi - min psi.
double oscillation(const Field& psi);

/// {x : f(x) >= t}.
SiteSet superlevel_set(std::span<const double> f, double t);
SiteSet superlevel_set(const Field& f, double t);

/// True when every element of inner is in outer (both sorted).
bool is_subset(const SiteSet& inner, const SiteSet& outer);

/// Component count and cycle rank of the subgraph of C_n induced by kept.
BettiNumbers betti_numbers_cycle(const CycleGraph& graph, const SiteSet& kept);

/// Component count and cycle rank of the subgraph of the interior 4-neighbor
/// grid induced by kept.
BettiNumbers betti_numbers_grid(const GridSpec& grid, const SiteSet& kept);

}  // namespace gch
