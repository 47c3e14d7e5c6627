#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "gch/error.hpp"
#include "gch/grid.hpp"

using namespace gch;

namespace {

// Independent assembly: 4 on the diagonal (plus mass), -1 for each interior
// 4-neighbor.
Eigen::MatrixXd oracle_laplacian(int h, int w, double mu = 0.0) {
  const int n = h * w;
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const int i = r * w + c;
      l(i, i) = 4.0 + mu;
      if (r > 0) l(i, i - w) = -1.0;
      if (r + 1 < h) l(i, i + w) = -1.0;
      if (c > 0) l(i, i - 1) = -1.0;
      if (c + 1 < w) l(i, i + 1) = -1.0;
    }
  }
  return l;
}

Field random_field(int h, int w, std::mt19937_64& gen) {
  std::normal_distribution<double> nd;
  Field f(h, w);
  for (double& v : f.values()) v = nd(gen);
  return f;
}

double dot(const Field& a, const Field& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

TEST_CASE("GridSpec validates its parameters") {
  CHECK_THROWS_AS(GridSpec(0, 3), ParameterError);
  CHECK_THROWS_AS(GridSpec(3, 0), ParameterError);
  CHECK_THROWS_AS(GridSpec(2, 2, -0.1), ParameterError);
  const GridSpec g(3, 5);
  CHECK(g.size() == 15);
  CHECK(g.index(Site{1, 2}) == 7);
  CHECK(g.site(7) == Site{1, 2});
  CHECK_THROWS_AS(g.index(Site{3, 0}), IndexError);
  GridSpec w(2, 2);
  CHECK_THROWS_AS(w.set_edge_weight(Site{0, 0}, Direction::East, 0.0), ParameterError);
}

TEST_CASE("laplacian application on small grids") {
  const GridSpec one(1, 1);
  CHECK(apply_dirichlet_laplacian(one, Field(1, 1, 1.0))[0] == doctest::Approx(4.0));
  const GridSpec two(2, 1);
  const Field out = apply_dirichlet_laplacian(two, Field(2, 1, {1.0, 0.0}));
  CHECK(out[0] == doctest::Approx(4.0));
  CHECK(out[1] == doctest::Approx(-1.0));
  const GridSpec g(4, 3);
  for (const auto held = apply_dirichlet_laplacian(g, Field(4, 3, 0.0)); double v : held.values()) CHECK(v == 0.0);
}

TEST_CASE("dirichlet energy values") {
  CHECK(dirichlet_energy(GridSpec(1, 1), Field(1, 1, 1.0)) == doctest::Approx(2.0));
  CHECK(dirichlet_energy(GridSpec(2, 1), Field(2, 1, 1.0)) == doctest::Approx(3.0));
  CHECK(dirichlet_energy(GridSpec(3, 3), Field(3, 3, 0.0)) == 0.0);
}

TEST_CASE("dirichlet energy equals half the quadratic form") {
  std::mt19937_64 gen(7);
  for (const auto& [h, w, mu] : {std::tuple{1, 1, 0.0}, {3, 4, 0.0}, {5, 2, 0.3}, {6, 6, 1.0}}) {
    const GridSpec g(h, w, mu);
    for (int t = 0; t < 20; ++t) {
      const Field phi = random_field(h, w, gen);
      const double e = dirichlet_energy(g, phi);
      const double q = 0.5 * dot(phi, apply_dirichlet_laplacian(g, phi));
      CHECK(std::abs(e - q) <= 1e-12 * std::max(1.0, std::abs(q)));
      Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(phi.values().data(), static_cast<Eigen::Index>(phi.size()));
      CHECK(std::abs(e - 0.5 * v.dot(oracle_laplacian(h, w, mu) * v)) <= 1e-12 * std::max(1.0, e));
    }
  }
}

TEST_CASE("intrinsic energy and degrees") {
  const GridSpec two(2, 1);
  CHECK(intrinsic_energy(two, Field(2, 1, {1.0, 2.0})) == doctest::Approx(0.5));
  CHECK(intrinsic_energy(GridSpec(3, 3), Field(3, 3, 2.0)) == 0.0);
  CHECK(intrinsic_degree(GridSpec(1, 1), Site{0, 0}) == 0.0);
  CHECK(intrinsic_degree(GridSpec(2, 2), Site{1, 1}) == 2.0);
  CHECK(intrinsic_degree(GridSpec(3, 3), Site{1, 1}) == 4.0);
  CHECK(intrinsic_degree(GridSpec(3, 3), Site{0, 1}) == 3.0);

  std::mt19937_64 gen(11);
  const GridSpec g(5, 4);
  for (int t = 0; t < 100; ++t) {
    const Field f = random_field(5, 4, gen);
    Field shifted = f;
    const double c = 10.0 * std::normal_distribution<double>()(gen);
    for (double& v : shifted.values()) v += c;
    CHECK(intrinsic_energy(g, shifted) == doctest::Approx(intrinsic_energy(g, f)).epsilon(1e-12));
  }
}

TEST_CASE("eigenvalues match closed form and dense oracle") {
  CHECK(dirichlet_eigenvalue(GridSpec(1, 1), 1, 1) == doctest::Approx(4.0));
  CHECK(dirichlet_eigenvalue(GridSpec(2, 1), 1, 1) == doctest::Approx(3.0));
  CHECK(dirichlet_eigenvalue(GridSpec(2, 1), 2, 1) == doctest::Approx(5.0));
  CHECK_THROWS_AS(dirichlet_eigenvalue(GridSpec(2, 1), 3, 1), IndexError);
  CHECK_THROWS_AS(dirichlet_eigenvalue(GridSpec(2, 2), 0, 1), IndexError);
  const GridSpec base(3, 4);
  const GridSpec shifted(3, 4, 0.5);
  for (int k = 1; k <= 3; ++k)
    for (int l = 1; l <= 4; ++l)
      CHECK(dirichlet_eigenvalue(shifted, k, l) == doctest::Approx(dirichlet_eigenvalue(base, k, l) + 0.5));

  for (int h = 1; h <= 8; ++h) {
    for (int w = 1; w <= 8; w += 3) {
      const GridSpec g(h, w);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(oracle_laplacian(h, w));
      std::vector<double> closed;
      for (int k = 1; k <= h; ++k)
        for (int l = 1; l <= w; ++l) closed.push_back(dirichlet_eigenvalue(g, k, l));
      std::sort(closed.begin(), closed.end());
      for (std::size_t i = 0; i < closed.size(); ++i)
        CHECK(closed[i] == doctest::Approx(es.eigenvalues()(static_cast<Eigen::Index>(i))).epsilon(1e-12));
      CHECK(es.eigenvalues().minCoeff() > 0.0);
    }
  }
  const double min8 = dirichlet_eigenvalue(GridSpec(8, 8), 1, 1);
  CHECK(min8 == doctest::Approx(8.0 * std::pow(std::sin(std::numbers::pi / 18.0), 2)));
}

TEST_CASE("assembled laplacians match independent assembly") {
  for (const auto& [h, w, mu] : {std::tuple{1, 1, 0.0}, {2, 3, 0.0}, {4, 4, 0.7}}) {
    CHECK((dirichlet_laplacian_matrix(GridSpec(h, w, mu)) - oracle_laplacian(h, w, mu)).cwiseAbs().maxCoeff() == 0.0);
  }
  Eigen::MatrixXd lint(2, 2);
  lint << 1, -1, -1, 1;
  CHECK((intrinsic_laplacian_matrix(GridSpec(2, 1)) - lint).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("green kernel values") {
  CHECK(green_kernel(GridSpec(1, 1), Site{0, 0}, Site{0, 0}) == doctest::Approx(0.25));
  const GridSpec two(2, 1);
  CHECK(green_kernel(two, Site{0, 0}, Site{0, 0}) == doctest::Approx(4.0 / 15.0));
  CHECK(green_kernel(two, Site{0, 0}, Site{1, 0}) == doctest::Approx(1.0 / 15.0));
  CHECK(green_kernel_dense(two, Site{1, 0}, Site{1, 0}) == doctest::Approx(4.0 / 15.0));

  const GridSpec g8(8, 8);
  for (std::size_t a = 0; a < g8.size(); ++a)
    for (std::size_t b = 0; b < g8.size(); ++b)
      CHECK(green_kernel(g8, g8.site(a), g8.site(b)) == green_kernel(g8, g8.site(b), g8.site(a)));
}

TEST_CASE("spectral and dense green matrices agree up to 16x16") {
  for (const auto& [h, w, mu] : {std::tuple{1, 1, 0.0}, {2, 1, 0.0}, {5, 7, 0.0}, {9, 4, 0.25}, {16, 16, 0.0}}) {
    const GridSpec g(h, w, mu);
    const Eigen::MatrixXd dense = green_matrix_dense(g);
    const Eigen::MatrixXd spectral = green_matrix_spectral(g);
    CHECK((dense - spectral).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((dense - oracle_laplacian(h, w, mu).inverse()).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("green metric is a squared seminorm") {
  const GridSpec two(2, 1);
  CHECK(green_metric(two, Site{0, 0}, Site{1, 0}) == doctest::Approx(0.4));
  const GridSpec g(6, 6);
  const Eigen::MatrixXd dense = oracle_laplacian(6, 6).inverse();
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::MatrixXd r(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      r(a, b) = green_metric(g, g.site(static_cast<std::size_t>(a)), g.site(static_cast<std::size_t>(b)));
      CHECK(r(a, b) >= 0.0);
      CHECK(r(a, b) == green_metric(g, g.site(static_cast<std::size_t>(b)), g.site(static_cast<std::size_t>(a))));
      CHECK(r(a, b) == doctest::Approx(dense(a, a) + dense(b, b) - 2.0 * dense(a, b)).epsilon(1e-10));
    }
    CHECK(r(a, a) == 0.0);
  }
  std::mt19937_64 gen(3);
  std::normal_distribution<double> nd;
  for (int t = 0; t < 50; ++t) {
    Eigen::VectorXd c(n);
    for (Eigen::Index i = 0; i < n; ++i) c(i) = nd(gen);
    c.array() -= c.mean();
    CHECK(c.dot(r * c) <= 1e-12);
  }
}

TEST_CASE("variance map") {
  CHECK(variance_map(GridSpec(1, 1), 1.0)[0] == doctest::Approx(0.25));
  CHECK(variance_map(GridSpec(1, 1), 2.0)[0] == doctest::Approx(0.125));
  const Field v2 = variance_map(GridSpec(2, 1), 1.0);
  CHECK(v2[0] == doctest::Approx(4.0 / 15.0));
  CHECK(v2[1] == doctest::Approx(4.0 / 15.0));
  CHECK_THROWS_AS(variance_map(GridSpec(2, 2), 0.0), ParameterError);
  const GridSpec g(7, 5, 0.2);
  const Eigen::MatrixXd dense = oracle_laplacian(7, 5, 0.2).inverse();
  const Field v = variance_map(g, 3.0);
  for (std::size_t i = 0; i < g.size(); ++i)
    CHECK(std::abs(v[i] - dense(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) / 3.0) <= 1e-10);
}

TEST_CASE("intrinsic covariance budget") {
  CHECK(epsilon_intrinsic(GridSpec(1, 1), Eigen::MatrixXd::Constant(1, 1, 0.25)) == 0.0);
  const GridSpec two(2, 1);
  Eigen::MatrixXd c(2, 2);
  c << 4, 1, 1, 4;
  c /= 15.0;
  CHECK(epsilon_intrinsic(two, c) == doctest::Approx(0.2));
  CHECK(epsilon_intrinsic(two, 3.0 * c) == doctest::Approx(0.6));
  CHECK_THROWS_AS(epsilon_intrinsic(two, Eigen::MatrixXd::Identity(3, 3)), DimensionError);
}

TEST_CASE("dense operators reject non-SPD and asymmetric input") {
  Eigen::MatrixXd indefinite(2, 2);
  indefinite << 1, 2, 2, 1;
  CHECK_THROWS_AS(DenseOperator(indefinite, 2, 1), NonSpdError);
  Eigen::MatrixXd asym(2, 2);
  asym << 2, 1, 0, 2;
  CHECK_THROWS(DenseOperator(asym, 2, 1));
  CHECK_THROWS_AS(DenseOperator(Eigen::MatrixXd::Identity(3, 3), 2, 1), DimensionError);
  const DenseOperator op = DenseOperator::from_grid(GridSpec(3, 2));
  CHECK((op.inverse() - oracle_laplacian(3, 2).inverse()).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("weighted grids use the dense operator") {
  GridSpec g(3, 3);
  g.set_edge_weight(Site{1, 1}, Direction::East, 2.5);
  g.set_edge_weight(Site{0, 0}, Direction::North, 0.5);
  CHECK(g.is_weighted());
  CHECK(g.weight(Site{1, 2}, Direction::West) == 2.5);
  CHECK_THROWS_AS(dirichlet_eigenvalue(g, 1, 1), UnsupportedOperatorError);

  Eigen::MatrixXd l = oracle_laplacian(3, 3);
  // Edge (1,1)-(1,2): weight 2.5 instead of 1.
  l(4, 4) += 1.5;
  l(5, 5) += 1.5;
  l(4, 5) = l(5, 4) = -2.5;
  // Boundary edge north of (0,0): weight 0.5.
  l(0, 0) -= 0.5;
  CHECK((dirichlet_laplacian_matrix(g) - l).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK((green_matrix(g) - l.inverse()).cwiseAbs().maxCoeff() <= 1e-12);

  std::mt19937_64 gen(5);
  const Field phi = random_field(3, 3, gen);
  CHECK(dirichlet_energy(g, phi) == doctest::Approx(0.5 * dot(phi, apply_dirichlet_laplacian(g, phi))).epsilon(1e-12));
  const Field v = variance_map(g, 2.0);
  CHECK(v[4] == doctest::Approx(l.inverse()(4, 4) / 2.0).epsilon(1e-12));
}
