#pragma once

#include <span>
#include <vector>

#include "gch/field.hpp"
#include "gch/grid.hpp"

namespace gch {

class SpectralPlan;

enum class Normalization { ExactWick, SampleWise, Unit };

/// Strictly positive multiplicative gate on the grid. Carries its
/// normalization and the (gamma, beta) it was built with so that checks can
/// pick the matching theoretical target.
struct Gate {
  Field values;
  Normalization normalization = Normalization::Unit;
  double gamma = 0.0;
  double beta = 1.0;
};

/// C x H x W feature tensor, channel-major then row-major.
class FeatureMap {
 public:
  FeatureMap() = default;
  FeatureMap(int channels, int height, int width, double fill = 0.0);
  FeatureMap(int channels, int height, int width, std::vector<double> values);

  int channels() const noexcept { return channels_; }
  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  std::size_t size() const noexcept { return values_.size(); }

  double& operator()(int c, int row, int col) { return values_[index(c, row, col)]; }
  double operator()(int c, int row, int col) const { return values_[index(c, row, col)]; }
  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

  friend bool operator==(const FeatureMap&, const FeatureMap&) = default;

 private:
  std::size_t index(int c, int row, int col) const noexcept {
    return (static_cast<std::size_t>(c) * static_cast<std::size_t>(height_) +
            static_cast<std::size_t>(row)) *
               static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(col);
  }

  int channels_ = 0;
  int height_ = 0;
  int width_ = 0;
  std::vector<double> values_;
};

/// xi(x) = exp(gamma psi(x) - gamma^2 v(x) / 2); site-wise mean one when v is
/// the variance map of psi's law. beta is recorded as metadata only.
Gate exact_wick_gate(const Field& psi, double gamma, const Field& variance, double beta = 1.0);
Gate exact_wick_gate(const SpectralPlan& plan, const Field& psi, double gamma);

/// xi(x) = exp(gamma psi(x)) / mean_y exp(gamma psi(y)), evaluated with a max
/// shift so no finite input overflows.
Gate samplewise_gate(const Field& psi, double gamma, double beta = 1.0);

Gate unit_gate(int height, int width);

/// tau = gamma^2 / beta.
double effective_tau(double gamma, double beta);

/// exp(tau G(x, y)) = E[xi(x) xi(y)] for the exact gate.
double gate_kernel_theoretical(const GridSpec& grid, double tau, Site x, Site y);

/// exp(gamma^2 sum_{a<b} beta^{-1} G(x_a, x_b)).
double multi_point_moment_theoretical(const GridSpec& grid, double beta, double gamma,
                                      std::span<const Site> sites);
/// Same formula from a precomputed Green matrix.
double multi_point_moment_theoretical(const GridSpec& grid, const Eigen::MatrixXd& green,
                                      double beta, double gamma, std::span<const Site> sites);

/// Leading-order covariance gamma^2 beta^{-1} G(x, y) of the exact gate.
double small_gamma_covariance_theoretical(const GridSpec& grid, double beta, double gamma, Site x,
                                          Site y);

/// out(c, x) = F(c, x) xi(x), gate shared by all channels.
FeatureMap inject_multiplicative(const FeatureMap& features, const Gate& gate);
/// Channel-wise variant: one gate per channel.
FeatureMap inject_multiplicative(const FeatureMap& features, std::span<const Gate> gates);

/// out(c, x) = F(c, x) (1 + alpha (xi(x) - 1)), alpha in (0, 1].
FeatureMap inject_residual(const FeatureMap& features, const Gate& gate, double alpha);

/// Bilinear resize (half-pixel centers, edge clamped). Sample-wise gates are
/// renormalized to spatial mean one afterwards.
Gate resize_gate(const Gate& gate, int height, int width);

}  // namespace gch
