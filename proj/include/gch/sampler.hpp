#pragma once

#include "gch/field.hpp"
#include "gch/grid.hpp"
#include "gch/random.hpp"
#include "gch/sine_transform.hpp"

namespace gch {

/// Precomputed spectral data for sampling psi ~ N(0, (beta (L_U + mu I))^{-1})
/// on an unweighted grid. Immutable after construction.
class SpectralPlan {
 public:
  SpectralPlan(const GridSpec& grid, double beta,
               TransformMethod method = TransformMethod::Fast);

  const GridSpec& grid() const noexcept { return grid_; }
  double beta() const noexcept { return beta_; }
  /// lambda_{k,l} stored at (k-1, l-1).
  const Field& eigenvalues() const noexcept { return eigenvalues_; }
  /// v(x) = beta^{-1} G(x, x).
  const Field& variance() const noexcept { return variance_; }
  const SineTransform2D& transform() const noexcept { return transform_; }

  /// Maps standard-normal spectral coefficients Z to the field
  /// IDST2(Z / sqrt(beta lambda)).
  Field synthesize(const Field& normals) const;

 private:
  GridSpec grid_;
  double beta_;
  Field eigenvalues_;
  Field variance_;
  Field inv_sqrt_scale_;
  SineTransform2D transform_;
};

SpectralPlan build_plan(const GridSpec& grid, double beta);

/// beta = n / (2 eps): the inverse temperature meeting an expected
/// Dirichlet-energy budget eps.
double beta_from_budget(const GridSpec& grid, double eps);
/// Inverse of beta_from_budget.
double budget_from_beta(const GridSpec& grid, double beta);

Field sample_gff_spectral(const SpectralPlan& plan, RandomStream& rng);

/// Sample of N(0, (beta Q)^{-1}) via Q = L L^T and psi = L^{-T} z / sqrt(beta).
Field sample_gff_dense(const DenseOperator& op, double beta, RandomStream& rng);
/// Same map applied to a caller-supplied standard-normal vector z.
Field sample_gff_dense_from_normals(const DenseOperator& op, double beta, const Field& normals);

}  // namespace gch
