#pragma once

#include <cstddef>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "gch/field.hpp"

namespace gch {

/// Neighbor direction on the extended grid.
enum class Direction { North, South, West, East };

/// H x W interior grid U with an auxiliary Dirichlet boundary ring, optional
/// positive edge weights and an optional mass term (the operator becomes
/// L_U + mass * I).
///
/// Sites are linearized row-major. Every interior site has exactly four
/// neighbors on the extended grid; a neighbor outside U is a boundary node
/// whose field value is pinned to zero.
class GridSpec {
 public:
  GridSpec(int height, int width, double mass = 0.0);

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  std::size_t size() const noexcept {
    return static_cast<std::size_t>(height_) * static_cast<std::size_t>(width_);
  }
  double mass() const noexcept { return mass_; }
  bool is_weighted() const noexcept { return weighted_; }

  bool contains(Site s) const noexcept {
    return s.row >= 0 && s.row < height_ && s.col >= 0 && s.col < width_;
  }
  /// Row-major index of s; throws IndexError outside U.
  std::size_t index(Site s) const;
  Site site(std::size_t index) const;

  /// Weight of the edge from interior site s towards dir (1 when unweighted).
  double weight(Site s, Direction dir) const;

  /// Sets the weight of the edge from s towards dir. The neighbor may be a
  /// boundary node. Marks the grid weighted.
  GridSpec& set_edge_weight(Site s, Direction dir, double weight);

  GridSpec with_mass(double mass) const;

 private:
  // horizontal_(r, c): edge between extended columns c and c+1 in row r,
  // i.e. West of interior (r, c) / East of interior (r, c-1).
  // vertical_(r, c): North of interior (r, c) / South of interior (r-1, c).
  int height_;
  int width_;
  double mass_;
  bool weighted_ = false;
  Field horizontal_;
  Field vertical_;
};

/// General symmetric positive-definite operator on the sites of an H x W
/// grid. Symmetry and definiteness are validated on construction.
class DenseOperator {
 public:
  DenseOperator(Eigen::MatrixXd matrix, int height, int width);
  /// Treats the operator as acting on an n x 1 grid.
  explicit DenseOperator(Eigen::MatrixXd matrix);

  /// Dense L_U + mass * I for the grid.
  static DenseOperator from_grid(const GridSpec& grid);

  const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }
  const Eigen::LLT<Eigen::MatrixXd>& cholesky() const noexcept { return llt_; }
  Eigen::MatrixXd inverse() const;
  std::size_t size() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }

 private:
  Eigen::MatrixXd matrix_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  int height_;
  int width_;
};

/// (L_U + mu I) phi with zero extension to the boundary.
Field apply_dirichlet_laplacian(const GridSpec& grid, const Field& phi);

/// 1/2 <phi, (L_U + mu I) phi>, evaluated as an edge sum plus the mass term.
double dirichlet_energy(const GridSpec& grid, const Field& phi);

/// Half the weighted squared differences over interior-interior edges.
double intrinsic_energy(const GridSpec& grid, const Field& f);

/// Sum of weights of edges from x to interior neighbors.
double intrinsic_degree(const GridSpec& grid, Site x);

/// Eigenvalue of the unweighted Dirichlet operator for the mode (k, l),
/// with 1 <= k <= H and 1 <= l <= W.
double dirichlet_eigenvalue(const GridSpec& grid, int k, int l);

/// Orthonormal 1-D sine basis: sqrt(2/(n+1)) sin(pi k i / (n+1)), 1-based k, i.
double sine_basis(int n, int k, int i);

Eigen::MatrixXd dirichlet_laplacian_matrix(const GridSpec& grid);
Eigen::MatrixXd intrinsic_laplacian_matrix(const GridSpec& grid);

/// Green matrix (L_U + mu I)^{-1}. Uses the sine eigenbasis on unweighted
/// grids and a Cholesky inverse otherwise.
Eigen::MatrixXd green_matrix(const GridSpec& grid);
Eigen::MatrixXd green_matrix_dense(const GridSpec& grid);
Eigen::MatrixXd green_matrix_spectral(const GridSpec& grid);

double green_kernel(const GridSpec& grid, Site x, Site y);
double green_kernel_spectral(const GridSpec& grid, Site x, Site y);
double green_kernel_dense(const GridSpec& grid, Site x, Site y);

/// R_G(x, y) = G(x,x) + G(y,y) - 2 G(x,y).
double green_metric(const GridSpec& grid, Site x, Site y);

/// Site-wise variance beta^{-1} G(x, x) of the log-field.
Field variance_map(const GridSpec& grid, double beta);

/// 1/2 Tr(L_int C) for an n x n covariance C.
double epsilon_intrinsic(const GridSpec& grid, const Eigen::MatrixXd& covariance);

}  // namespace gch
