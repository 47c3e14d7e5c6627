#include "gch/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

#include "gch/error.hpp"
#include "gch/stats.hpp"

namespace gch {
namespace {

void require_positive_at(const Field& f, Site s, const char* what) {
  if (s.row < 0 || s.row >= f.height() || s.col < 0 || s.col >= f.width()) {
    throw IndexError(std::string(what) + ": site outside the field");
  }
  if (!(f[s] > 0.0)) throw DomainError(std::string(what) + ": field must be > 0 at compared sites");
}

// Breadth-first component count of the subgraph induced by `kept` over an
// adjacency given by `neighbors(v, out)`.
template <typename Neighbors>
BettiNumbers induced_betti(std::size_t vertex_count, const SiteSet& kept, Neighbors neighbors) {
  std::vector<char> in_set(vertex_count, 0);
  for (std::size_t v : kept) {
    if (v >= vertex_count) throw IndexError("betti numbers: vertex outside the graph");
    in_set[v] = 1;
  }
  std::vector<char> seen(vertex_count, 0);
  std::vector<std::size_t> adj;
  int components = 0;
  long edges2 = 0;  // each undirected edge counted twice
  long vertices = 0;
  for (std::size_t start : kept) {
    if (!in_set[start]) continue;
    if (seen[start]) continue;
    ++components;
    std::queue<std::size_t> frontier;
    frontier.push(start);
    seen[start] = 1;
    while (!frontier.empty()) {
      const std::size_t v = frontier.front();
      frontier.pop();
      ++vertices;
      adj.clear();
      neighbors(v, adj);
      for (std::size_t u : adj) {
        if (!in_set[u]) continue;
        ++edges2;
        if (!seen[u]) {
          seen[u] = 1;
          frontier.push(u);
        }
      }
    }
  }
  return {components, static_cast<int>(edges2 / 2 - vertices + components)};
}

}  // namespace

CycleGraph::CycleGraph(int n, double fill) {
  if (n < 3) throw ParameterError("CycleGraph: n must be >= 3");
  values_.assign(static_cast<std::size_t>(n), fill);
}

CycleGraph::CycleGraph(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 3) throw ParameterError("CycleGraph: n must be >= 3");
}

double logratio_deformation(const Field& h, const Field& h_tilde, Site x, Site y) {
  if (!h.same_shape(h_tilde)) throw DimensionError("logratio_deformation: shape mismatch");
  require_positive_at(h, x, "logratio_deformation");
  require_positive_at(h, y, "logratio_deformation");
  require_positive_at(h_tilde, x, "logratio_deformation");
  require_positive_at(h_tilde, y, "logratio_deformation");
  return (std::log(h_tilde[x]) - std::log(h_tilde[y])) - (std::log(h[x]) - std::log(h[y]));
}

double logratio_variance_theoretical(const GridSpec& grid, double tau, Site x, Site y) {
  if (!(tau >= 0.0)) throw ParameterError("logratio_variance_theoretical: tau must be >= 0");
  return tau * green_metric(grid, x, y);
}

double ranking_probability_theoretical(double delta, double tau, double r) {
  if (!(delta > 0.0)) throw ParameterError("ranking_probability_theoretical: delta must be > 0");
  const double var = tau * r;
  if (!(var > 0.0)) {
    throw DegenerateVarianceError("ranking_probability_theoretical: tau * R must be > 0");
  }
  return stats::normal_cdf(delta / std::sqrt(var));
}

bool ranking_preserved(const Field& h_tilde, Site x, Site y) { return h_tilde[x] > h_tilde[y]; }

ExtendedLogRatio masked_logratio(const Field& h, const MaskField& mask, Site x, Site y) {
  if (!h.same_shape(mask.values)) throw DimensionError("masked_logratio: shape mismatch");
  require_positive_at(h, x, "masked_logratio");
  require_positive_at(h, y, "masked_logratio");
  const double a = mask.values[x] * h[x];
  const double b = mask.values[y] * h[y];
  if (a > 0.0 && b > 0.0) return ExtendedLogRatio::finite(std::log(a) - std::log(b));
  if (a == 0.0 && b == 0.0) return ExtendedLogRatio::undefined();
  return a == 0.0 ? ExtendedLogRatio::minus_infinity() : ExtendedLogRatio::plus_infinity();
}

double expected_intrinsic_budget_gch(const GridSpec& grid, const Eigen::MatrixXd& covariance,
                                     double gamma) {
  return gamma * gamma * epsilon_intrinsic(grid, covariance);
}

double dropout_energy_expected(const GridSpec& grid, const Field& h, double q) {
  if (!(q > 0.0 && q <= 1.0)) throw ParameterError("dropout_energy_expected: q must be in (0, 1]");
  double weighted_mass = 0.0;
  for (std::size_t a = 0; a < grid.size(); ++a) {
    const Site x = grid.site(a);
    weighted_mass += intrinsic_degree(grid, x) * h[x] * h[x];
  }
  return intrinsic_energy(grid, h) + (1.0 - q) / (2.0 * q) * weighted_mass;
}

double coherence_score(const GridSpec& grid, const Field& h) {
  const double energy = intrinsic_energy(grid, h);
  if (!(energy > 0.0)) {
    throw CoherenceUndefinedError("coherence_score: intrinsic energy must be > 0");
  }
  double weighted_mass = 0.0;
  for (std::size_t a = 0; a < grid.size(); ++a) {
    const Site x = grid.site(a);
    weighted_mass += intrinsic_degree(grid, x) * h[x] * h[x];
  }
  return weighted_mass / (2.0 * energy);
}

double oscillation(const Field& psi) { return psi.max() - psi.min(); }

SiteSet superlevel_set(std::span<const double> f, double t) {
  if (!(t > 0.0)) throw ParameterError("superlevel_set: threshold must be > 0");
  SiteSet out;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] >= t) out.push_back(i);
  }
  return out;
}

SiteSet superlevel_set(const Field& f, double t) { return superlevel_set(f.values(), t); }

bool is_subset(const SiteSet& inner, const SiteSet& outer) {
  return std::includes(outer.begin(), outer.end(), inner.begin(), inner.end());
}

BettiNumbers betti_numbers_cycle(const CycleGraph& graph, const SiteSet& kept) {
  const auto n = static_cast<std::size_t>(graph.size());
  return induced_betti(n, kept, [n](std::size_t v, std::vector<std::size_t>& out) {
    out.push_back((v + 1) % n);
    out.push_back((v + n - 1) % n);
  });
}

BettiNumbers betti_numbers_grid(const GridSpec& grid, const SiteSet& kept) {
  const auto w = static_cast<std::size_t>(grid.width());
  const auto h = static_cast<std::size_t>(grid.height());
  return induced_betti(grid.size(), kept, [w, h](std::size_t v, std::vector<std::size_t>& out) {
    const std::size_t r = v / w;
    const std::size_t c = v % w;
    if (r > 0) out.push_back(v - w);
    if (r + 1 < h) out.push_back(v + w);
    if (c > 0) out.push_back(v - 1);
    if (c + 1 < w) out.push_back(v + 1);
  });
}

}  // namespace gch
