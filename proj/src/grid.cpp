#include "gch/grid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "gch/error.hpp"

namespace gch {
namespace {

constexpr std::array<Direction, 4> kDirections = {Direction::North, Direction::South,
                                                  Direction::West, Direction::East};

Site neighbor(Site s, Direction dir) {
  switch (dir) {
    case Direction::North: return {s.row - 1, s.col};
    case Direction::South: return {s.row + 1, s.col};
    case Direction::West: return {s.row, s.col - 1};
    case Direction::East: return {s.row, s.col + 1};
  }
  return s;
}

void require_shape(const GridSpec& grid, const Field& f, const char* what) {
  if (f.height() != grid.height() || f.width() != grid.width()) {
    throw DimensionError(std::string(what) + ": field is " + std::to_string(f.height()) + "x" +
                         std::to_string(f.width()) + ", grid is " +
                         std::to_string(grid.height()) + "x" + std::to_string(grid.width()));
  }
}

void require_site(const GridSpec& grid, Site s, const char* what) {
  if (!grid.contains(s)) {
    throw IndexError(std::string(what) + ": site (" + std::to_string(s.row) + "," +
                     std::to_string(s.col) + ") outside the interior grid");
  }
}

// Value of the zero-extended field at a possibly-boundary node.
double extended(const GridSpec& grid, const Field& f, Site s) {
  return grid.contains(s) ? f[s] : 0.0;
}

// B(x, mode) = orthonormal sine basis vector for mode evaluated at site x,
// modes ordered row-major over (k, l).
Eigen::MatrixXd sine_basis_matrix(const GridSpec& grid) {
  const int h = grid.height();
  const int w = grid.width();
  const auto n = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXd basis(n, n);
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < w; ++j)
      for (int k = 0; k < h; ++k)
        for (int l = 0; l < w; ++l)
          basis(i * w + j, k * w + l) = sine_basis(h, k + 1, i + 1) * sine_basis(w, l + 1, j + 1);
  return basis;
}

void require_unweighted(const GridSpec& grid, const char* what) {
  if (grid.is_weighted()) {
    throw UnsupportedOperatorError(std::string(what) +
                                   ": spectral closed form requires an unweighted grid");
  }
}

}  // namespace

GridSpec::GridSpec(int height, int width, double mass)
    : height_(height), width_(width), mass_(mass) {
  if (height < 1 || width < 1) throw ParameterError("GridSpec: dimensions must be >= 1");
  if (!(mass >= 0.0) || !std::isfinite(mass)) throw ParameterError("GridSpec: mass must be >= 0");
}

std::size_t GridSpec::index(Site s) const {
  require_site(*this, s, "GridSpec::index");
  return static_cast<std::size_t>(s.row) * static_cast<std::size_t>(width_) +
         static_cast<std::size_t>(s.col);
}

Site GridSpec::site(std::size_t index) const {
  if (index >= size()) throw IndexError("GridSpec::site: index out of range");
  return {static_cast<int>(index / static_cast<std::size_t>(width_)),
          static_cast<int>(index % static_cast<std::size_t>(width_))};
}

double GridSpec::weight(Site s, Direction dir) const {
  require_site(*this, s, "GridSpec::weight");
  if (!weighted_) return 1.0;
  switch (dir) {
    case Direction::North: return vertical_(s.row, s.col);
    case Direction::South: return vertical_(s.row + 1, s.col);
    case Direction::West: return horizontal_(s.row, s.col);
    case Direction::East: return horizontal_(s.row, s.col + 1);
  }
  return 1.0;
}

GridSpec& GridSpec::set_edge_weight(Site s, Direction dir, double weight) {
  require_site(*this, s, "GridSpec::set_edge_weight");
  if (!(weight > 0.0) || !std::isfinite(weight)) {
    throw ParameterError("GridSpec::set_edge_weight: weights must be strictly positive");
  }
  if (!weighted_) {
    horizontal_ = Field(height_, width_ + 1, 1.0);
    vertical_ = Field(height_ + 1, width_, 1.0);
    weighted_ = true;
  }
  switch (dir) {
    case Direction::North: vertical_(s.row, s.col) = weight; break;
    case Direction::South: vertical_(s.row + 1, s.col) = weight; break;
    case Direction::West: horizontal_(s.row, s.col) = weight; break;
    case Direction::East: horizontal_(s.row, s.col + 1) = weight; break;
  }
  return *this;
}

GridSpec GridSpec::with_mass(double mass) const {
  GridSpec copy = *this;
  if (!(mass >= 0.0) || !std::isfinite(mass)) throw ParameterError("GridSpec: mass must be >= 0");
  copy.mass_ = mass;
  return copy;
}

DenseOperator::DenseOperator(Eigen::MatrixXd matrix, int height, int width)
    : matrix_(std::move(matrix)), height_(height), width_(width) {
  if (matrix_.rows() != matrix_.cols()) throw DimensionError("DenseOperator: matrix not square");
  if (height < 1 || width < 1 ||
      static_cast<Eigen::Index>(height) * width != matrix_.rows()) {
    throw DimensionError("DenseOperator: matrix size does not match grid shape");
  }
  const double scale = matrix_.cwiseAbs().maxCoeff();
  if ((matrix_ - matrix_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw NonSpdError("DenseOperator: matrix is not symmetric");
  }
  llt_.compute(matrix_);
  if (llt_.info() != Eigen::Success) {
    throw NonSpdError("DenseOperator: Cholesky factorization failed");
  }
  if (llt_.matrixL().toDenseMatrix().diagonal().minCoeff() <= 0.0) {
    throw NonSpdError("DenseOperator: matrix is not positive definite");
  }
}

DenseOperator::DenseOperator(Eigen::MatrixXd matrix)
    : DenseOperator(matrix, static_cast<int>(matrix.rows()), 1) {}

DenseOperator DenseOperator::from_grid(const GridSpec& grid) {
  return DenseOperator(dirichlet_laplacian_matrix(grid), grid.height(), grid.width());
}

Eigen::MatrixXd DenseOperator::inverse() const {
  return llt_.solve(Eigen::MatrixXd::Identity(matrix_.rows(), matrix_.cols()));
}

Field apply_dirichlet_laplacian(const GridSpec& grid, const Field& phi) {
  require_shape(grid, phi, "apply_dirichlet_laplacian");
  Field out(grid.height(), grid.width());
  for (int i = 0; i < grid.height(); ++i) {
    for (int j = 0; j < grid.width(); ++j) {
      const Site x{i, j};
      double acc = grid.mass() * phi[x];
      for (Direction d : kDirections) {
        acc += grid.weight(x, d) * (phi[x] - extended(grid, phi, neighbor(x, d)));
      }
      out[x] = acc;
    }
  }
  return out;
}

double dirichlet_energy(const GridSpec& grid, const Field& phi) {
  require_shape(grid, phi, "dirichlet_energy");
  double energy = 0.0;
  auto edge = [&](Site x, Direction d) {
    const double diff = phi[x] - extended(grid, phi, neighbor(x, d));
    energy += 0.5 * grid.weight(x, d) * diff * diff;
  };
  for (int i = 0; i < grid.height(); ++i) {
    for (int j = 0; j < grid.width(); ++j) {
      const Site x{i, j};
      // Each edge is visited once: East/South always, West/North only on the
      // first column/row where the neighbor is a boundary node.
      edge(x, Direction::East);
      edge(x, Direction::South);
      if (j == 0) edge(x, Direction::West);
      if (i == 0) edge(x, Direction::North);
      energy += 0.5 * grid.mass() * phi[x] * phi[x];
    }
  }
  return energy;
}

double intrinsic_energy(const GridSpec& grid, const Field& f) {
  require_shape(grid, f, "intrinsic_energy");
  double energy = 0.0;
  for (int i = 0; i < grid.height(); ++i) {
    for (int j = 0; j < grid.width(); ++j) {
      const Site x{i, j};
      if (j + 1 < grid.width()) {
        const double diff = f[x] - f(i, j + 1);
        energy += 0.5 * grid.weight(x, Direction::East) * diff * diff;
      }
      if (i + 1 < grid.height()) {
        const double diff = f[x] - f(i + 1, j);
        energy += 0.5 * grid.weight(x, Direction::South) * diff * diff;
      }
    }
  }
  return energy;
}

double intrinsic_degree(const GridSpec& grid, Site x) {
  require_site(grid, x, "intrinsic_degree");
  double degree = 0.0;
  for (Direction d : kDirections) {
    if (grid.contains(neighbor(x, d))) degree += grid.weight(x, d);
  }
  return degree;
}

double sine_basis(int n, int k, int i) {
  const double np1 = static_cast<double>(n + 1);
  return std::sqrt(2.0 / np1) * std::sin(std::numbers::pi * k * i / np1);
}

double dirichlet_eigenvalue(const GridSpec& grid, int k, int l) {
  require_unweighted(grid, "dirichlet_eigenvalue");
  if (k < 1 || k > grid.height() || l < 1 || l > grid.width()) {
    throw IndexError("dirichlet_eigenvalue: mode index out of range");
  }
  const double sk = std::sin(std::numbers::pi * k / (2.0 * (grid.height() + 1)));
  const double sl = std::sin(std::numbers::pi * l / (2.0 * (grid.width() + 1)));
  return 4.0 * sk * sk + 4.0 * sl * sl + grid.mass();
}

Eigen::MatrixXd dirichlet_laplacian_matrix(const GridSpec& grid) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t a = 0; a < grid.size(); ++a) {
    const Site x = grid.site(a);
    const auto ia = static_cast<Eigen::Index>(a);
    L(ia, ia) += grid.mass();
    for (Direction d : kDirections) {
      const double c = grid.weight(x, d);
      L(ia, ia) += c;
      const Site y = neighbor(x, d);
      if (grid.contains(y)) L(ia, static_cast<Eigen::Index>(grid.index(y))) -= c;
    }
  }
  return L;
}

Eigen::MatrixXd intrinsic_laplacian_matrix(const GridSpec& grid) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t a = 0; a < grid.size(); ++a) {
    const Site x = grid.site(a);
    const auto ia = static_cast<Eigen::Index>(a);
    for (Direction d : kDirections) {
      const Site y = neighbor(x, d);
      if (!grid.contains(y)) continue;
      const double c = grid.weight(x, d);
      L(ia, ia) += c;
      L(ia, static_cast<Eigen::Index>(grid.index(y))) -= c;
    }
  }
  return L;
}

Eigen::MatrixXd green_matrix(const GridSpec& grid) {
  return grid.is_weighted() ? green_matrix_dense(grid) : green_matrix_spectral(grid);
}

Eigen::MatrixXd green_matrix_dense(const GridSpec& grid) {
  return DenseOperator::from_grid(grid).inverse();
}

Eigen::MatrixXd green_matrix_spectral(const GridSpec& grid) {
  require_unweighted(grid, "green_matrix_spectral");
  const Eigen::MatrixXd basis = sine_basis_matrix(grid);
  Eigen::VectorXd inv_eig(basis.cols());
  for (int k = 0; k < grid.height(); ++k)
    for (int l = 0; l < grid.width(); ++l)
      inv_eig(k * grid.width() + l) = 1.0 / dirichlet_eigenvalue(grid, k + 1, l + 1);
  Eigen::MatrixXd G = basis * inv_eig.asDiagonal() * basis.transpose();
  // Symmetrize away roundoff so G(x,y) == G(y,x) bit for bit.
  return 0.5 * (G + G.transpose());
}

double green_kernel_spectral(const GridSpec& grid, Site x, Site y) {
  require_unweighted(grid, "green_kernel_spectral");
  require_site(grid, x, "green_kernel");
  require_site(grid, y, "green_kernel");
  // Accumulate in a fixed symmetric order so swapping x and y is exact.
  const Site a = std::min(x, y);
  const Site b = std::max(x, y);
  double g = 0.0;
  for (int k = 1; k <= grid.height(); ++k) {
    const double row = sine_basis(grid.height(), k, a.row + 1) *
                       sine_basis(grid.height(), k, b.row + 1);
    for (int l = 1; l <= grid.width(); ++l) {
      const double col = sine_basis(grid.width(), l, a.col + 1) *
                         sine_basis(grid.width(), l, b.col + 1);
      g += row * col / dirichlet_eigenvalue(grid, k, l);
    }
  }
  return g;
}

double green_kernel_dense(const GridSpec& grid, Site x, Site y) {
  const std::size_t ix = grid.index(x);
  const std::size_t iy = grid.index(y);
  const Eigen::MatrixXd G = green_matrix_dense(grid);
  return 0.5 * (G(static_cast<Eigen::Index>(ix), static_cast<Eigen::Index>(iy)) +
                G(static_cast<Eigen::Index>(iy), static_cast<Eigen::Index>(ix)));
}

double green_kernel(const GridSpec& grid, Site x, Site y) {
  return grid.is_weighted() ? green_kernel_dense(grid, x, y) : green_kernel_spectral(grid, x, y);
}

double green_metric(const GridSpec& grid, Site x, Site y) {
  require_site(grid, x, "green_metric");
  require_site(grid, y, "green_metric");
  if (x == y) return 0.0;
  const double r = green_kernel(grid, x, x) + green_kernel(grid, y, y) - 2.0 * green_kernel(grid, x, y);
  return std::max(r, 0.0);
}

Field variance_map(const GridSpec& grid, double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ParameterError("variance_map: beta must be > 0");
  const int h = grid.height();
  const int w = grid.width();
  Field v(h, w);
  if (grid.is_weighted()) {
    const Eigen::MatrixXd G = green_matrix_dense(grid);
    for (std::size_t a = 0; a < grid.size(); ++a) {
      v[a] = G(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a)) / beta;
    }
    return v;
  }
  // v = P_H * diag-free(1/lambda) * P_W^T with P(i,k) = basis(k, i)^2.
  Eigen::MatrixXd ph(h, h), pw(w, w), inv_eig(h, w);
  for (int i = 0; i < h; ++i)
    for (int k = 0; k < h; ++k) ph(i, k) = std::pow(sine_basis(h, k + 1, i + 1), 2);
  for (int j = 0; j < w; ++j)
    for (int l = 0; l < w; ++l) pw(j, l) = std::pow(sine_basis(w, l + 1, j + 1), 2);
  for (int k = 0; k < h; ++k)
    for (int l = 0; l < w; ++l) inv_eig(k, l) = 1.0 / dirichlet_eigenvalue(grid, k + 1, l + 1);
  const Eigen::MatrixXd vm = ph * inv_eig * pw.transpose();
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < w; ++j) v(i, j) = vm(i, j) / beta;
  return v;
}

double epsilon_intrinsic(const GridSpec& grid, const Eigen::MatrixXd& covariance) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  if (covariance.rows() != n || covariance.cols() != n) {
    throw DimensionError("epsilon_intrinsic: covariance must be n x n");
  }
  const Eigen::MatrixXd L = intrinsic_laplacian_matrix(grid);
  return 0.5 * L.cwiseProduct(covariance.transpose()).sum();
}

}  // namespace gch
