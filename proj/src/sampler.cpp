#include "gch/sampler.hpp"

#include <cmath>

#include "gch/error.hpp"

namespace gch {
namespace {

double checked_beta(double beta, const char* what) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw ParameterError(std::string(what) + ": beta must be > 0");
  }
  return beta;
}

const GridSpec& checked_unweighted(const GridSpec& grid) {
  if (grid.is_weighted()) {
    throw UnsupportedOperatorError("build_plan: weighted grids must use sample_gff_dense");
  }
  return grid;
}

}  // namespace

SpectralPlan::SpectralPlan(const GridSpec& grid, double beta, TransformMethod method)
    : grid_(checked_unweighted(grid)),
      beta_(checked_beta(beta, "build_plan")),
      eigenvalues_(grid.height(), grid.width()),
      variance_(variance_map(grid, beta)),
      inv_sqrt_scale_(grid.height(), grid.width()),
      transform_(grid.height(), grid.width(), method) {
  for (int k = 0; k < grid.height(); ++k) {
    for (int l = 0; l < grid.width(); ++l) {
      const double lambda = dirichlet_eigenvalue(grid, k + 1, l + 1);
      eigenvalues_(k, l) = lambda;
      inv_sqrt_scale_(k, l) = 1.0 / std::sqrt(beta_ * lambda);
    }
  }
}

Field SpectralPlan::synthesize(const Field& normals) const {
  if (!normals.same_shape(eigenvalues_)) {
    throw DimensionError("SpectralPlan::synthesize: coefficient shape mismatch");
  }
  Field coeffs = normals;
  for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] *= inv_sqrt_scale_[i];
  return transform_.apply(coeffs, TransformDirection::Inverse);
}

SpectralPlan build_plan(const GridSpec& grid, double beta) { return SpectralPlan(grid, beta); }

double beta_from_budget(const GridSpec& grid, double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw ParameterError("beta_from_budget: eps must be > 0");
  return static_cast<double>(grid.size()) / (2.0 * eps);
}

double budget_from_beta(const GridSpec& grid, double beta) {
  checked_beta(beta, "budget_from_beta");
  return static_cast<double>(grid.size()) / (2.0 * beta);
}

Field sample_gff_spectral(const SpectralPlan& plan, RandomStream& rng) {
  Field z(plan.grid().height(), plan.grid().width());
  rng.fill_normal(z.values());
  return plan.synthesize(z);
}

Field sample_gff_dense_from_normals(const DenseOperator& op, double beta, const Field& normals) {
  checked_beta(beta, "sample_gff_dense");
  if (normals.size() != op.size()) throw DimensionError("sample_gff_dense: normal vector size");
  Eigen::Map<const Eigen::VectorXd> z(normals.values().data(),
                                      static_cast<Eigen::Index>(normals.size()));
  // Q = L L^T, so L^{-T} z has covariance Q^{-1}.
  Eigen::VectorXd psi = op.cholesky().matrixU().solve(z) / std::sqrt(beta);
  return Field(op.height(), op.width(), std::vector<double>(psi.data(), psi.data() + psi.size()));
}

Field sample_gff_dense(const DenseOperator& op, double beta, RandomStream& rng) {
  Field z(op.height(), op.width());
  rng.fill_normal(z.values());
  return sample_gff_dense_from_normals(op, beta, z);
}

}  // namespace gch
