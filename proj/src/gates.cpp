#include "gch/gates.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gch/error.hpp"
#include "gch/sampler.hpp"

namespace gch {
namespace {

void require_sites(const GridSpec& grid, std::span<const Site> sites, const char* what) {
  for (Site s : sites) {
    if (!grid.contains(s)) throw IndexError(std::string(what) + ": site outside the grid");
  }
}

void require_gate_shape(const FeatureMap& f, const Gate& gate, const char* what) {
  if (f.height() != gate.values.height() || f.width() != gate.values.width()) {
    throw DimensionError(std::string(what) + ": gate and feature spatial dims differ");
  }
}

}  // namespace

FeatureMap::FeatureMap(int channels, int height, int width, double fill)
    : channels_(channels), height_(height), width_(width) {
  if (channels < 1 || height < 1 || width < 1) {
    throw DimensionError("FeatureMap: dimensions must be >= 1");
  }
  values_.assign(static_cast<std::size_t>(channels) * static_cast<std::size_t>(height) *
                     static_cast<std::size_t>(width),
                 fill);
}

FeatureMap::FeatureMap(int channels, int height, int width, std::vector<double> values)
    : FeatureMap(channels, height, width) {
  if (values.size() != values_.size()) throw DimensionError("FeatureMap: value count mismatch");
  values_ = std::move(values);
}

Gate exact_wick_gate(const Field& psi, double gamma, const Field& variance, double beta) {
  if (!psi.same_shape(variance)) throw DimensionError("exact_wick_gate: psi/variance shape");
  Gate gate{Field(psi.height(), psi.width()), Normalization::ExactWick, gamma, beta};
  const double half_g2 = 0.5 * gamma * gamma;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    gate.values[i] = std::exp(gamma * psi[i] - half_g2 * variance[i]);
  }
  return gate;
}

Gate exact_wick_gate(const SpectralPlan& plan, const Field& psi, double gamma) {
  return exact_wick_gate(psi, gamma, plan.variance(), plan.beta());
}

Gate samplewise_gate(const Field& psi, double gamma, double beta) {
  if (psi.size() == 0) throw DimensionError("samplewise_gate: empty field");
  Gate gate{Field(psi.height(), psi.width()), Normalization::SampleWise, gamma, beta};
  double shift = gamma * psi[0];
  for (std::size_t i = 1; i < psi.size(); ++i) shift = std::max(shift, gamma * psi[i]);
  double sum = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    gate.values[i] = std::exp(gamma * psi[i] - shift);
    sum += gate.values[i];
  }
  const double mean = sum / static_cast<double>(psi.size());
  for (double& v : gate.values.values()) v /= mean;
  return gate;
}

Gate unit_gate(int height, int width) {
  return Gate{Field(height, width, 1.0), Normalization::Unit, 0.0, 1.0};
}

double effective_tau(double gamma, double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ParameterError("effective_tau: beta must be > 0");
  return gamma * gamma / beta;
}

double gate_kernel_theoretical(const GridSpec& grid, double tau, Site x, Site y) {
  if (!(tau >= 0.0)) throw ParameterError("gate_kernel_theoretical: tau must be >= 0");
  return std::exp(tau * green_kernel(grid, x, y));
}

double multi_point_moment_theoretical(const GridSpec& grid, const Eigen::MatrixXd& green,
                                      double beta, double gamma, std::span<const Site> sites) {
  if (sites.empty()) throw ParameterError("multi_point_moment_theoretical: empty site list");
  if (!(beta > 0.0)) throw ParameterError("multi_point_moment_theoretical: beta must be > 0");
  require_sites(grid, sites, "multi_point_moment_theoretical");
  double pair_sum = 0.0;
  for (std::size_t a = 0; a < sites.size(); ++a) {
    const auto ia = static_cast<Eigen::Index>(grid.index(sites[a]));
    for (std::size_t b = a + 1; b < sites.size(); ++b) {
      pair_sum += green(ia, static_cast<Eigen::Index>(grid.index(sites[b])));
    }
  }
  return std::exp(gamma * gamma * pair_sum / beta);
}

double multi_point_moment_theoretical(const GridSpec& grid, double beta, double gamma,
                                      std::span<const Site> sites) {
  return multi_point_moment_theoretical(grid, green_matrix(grid), beta, gamma, sites);
}

double small_gamma_covariance_theoretical(const GridSpec& grid, double beta, double gamma, Site x,
                                          Site y) {
  if (!(beta > 0.0)) throw ParameterError("small_gamma_covariance_theoretical: beta must be > 0");
  return gamma * gamma * green_kernel(grid, x, y) / beta;
}

FeatureMap inject_multiplicative(const FeatureMap& features, const Gate& gate) {
  require_gate_shape(features, gate, "inject_multiplicative");
  FeatureMap out = features;
  const std::size_t plane = gate.values.size();
  auto data = out.values();
  for (std::size_t i = 0; i < data.size(); ++i) data[i] *= gate.values[i % plane];
  return out;
}

FeatureMap inject_multiplicative(const FeatureMap& features, std::span<const Gate> gates) {
  if (gates.size() == 1) return inject_multiplicative(features, gates.front());
  if (gates.size() != static_cast<std::size_t>(features.channels())) {
    throw DimensionError("inject_multiplicative: need one gate or one gate per channel");
  }
  FeatureMap out = features;
  for (int c = 0; c < features.channels(); ++c) {
    const Gate& gate = gates[static_cast<std::size_t>(c)];
    require_gate_shape(features, gate, "inject_multiplicative");
    for (int i = 0; i < features.height(); ++i)
      for (int j = 0; j < features.width(); ++j) out(c, i, j) *= gate.values(i, j);
  }
  return out;
}

FeatureMap inject_residual(const FeatureMap& features, const Gate& gate, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ParameterError("inject_residual: alpha must be in (0, 1]");
  require_gate_shape(features, gate, "inject_residual");
  if (alpha == 1.0) return inject_multiplicative(features, gate);
  FeatureMap out = features;
  const std::size_t plane = gate.values.size();
  auto data = out.values();
  for (std::size_t i = 0; i < data.size(); ++i) {
    data[i] *= 1.0 + alpha * (gate.values[i % plane] - 1.0);
  }
  return out;
}

Gate resize_gate(const Gate& gate, int height, int width) {
  if (height < 1 || width < 1) throw ParameterError("resize_gate: target dims must be >= 1");
  const Field& src = gate.values;
  Gate out{Field(height, width), gate.normalization, gate.gamma, gate.beta};
  const double sy = static_cast<double>(src.height()) / height;
  const double sx = static_cast<double>(src.width()) / width;
  auto coord = [](double pos, int n, int& lo, int& hi, double& t) {
    pos = std::clamp(pos, 0.0, static_cast<double>(n - 1));
    lo = static_cast<int>(std::floor(pos));
    hi = std::min(lo + 1, n - 1);
    t = pos - lo;
  };
  for (int i = 0; i < height; ++i) {
    int r0, r1;
    double ty;
    coord((i + 0.5) * sy - 0.5, src.height(), r0, r1, ty);
    for (int j = 0; j < width; ++j) {
      int c0, c1;
      double tx;
      coord((j + 0.5) * sx - 0.5, src.width(), c0, c1, tx);
      const double top = (1.0 - tx) * src(r0, c0) + tx * src(r0, c1);
      const double bottom = (1.0 - tx) * src(r1, c0) + tx * src(r1, c1);
      out.values(i, j) = (1.0 - ty) * top + ty * bottom;
    }
  }
  if (gate.normalization == Normalization::SampleWise) {
    const double mean = out.values.mean();
    for (double& v : out.values.values()) v /= mean;
  }
  return out;
}

}  // namespace gch
