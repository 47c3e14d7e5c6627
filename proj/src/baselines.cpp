#include "gch/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "gch/error.hpp"
#include "gch/sampler.hpp"

namespace gch {

MaskField inverted_dropout_mask(const GridSpec& grid, double q, RandomStream& rng) {
  if (!(q > 0.0 && q <= 1.0)) throw ParameterError("inverted_dropout_mask: q must be in (0, 1]");
  MaskField mask{Field(grid.height(), grid.width()), q, 1.0 / q, false};
  std::size_t kept = 0;
  for (double& v : mask.values.values()) {
    if (rng.bernoulli(q)) {
      v = mask.scale;
      ++kept;
    }
  }
  mask.degenerate = kept == 0;
  return mask;
}

MaskField block_mask(const GridSpec& grid, double p, int block_size, RandomStream& rng) {
  if (!(p > 0.0 && p < 1.0)) throw ParameterError("block_mask: p must be in (0, 1)");
  if (block_size < 1 || block_size > std::min(grid.height(), grid.width())) {
    throw ParameterError("block_mask: block_size must be in [1, min(H, W)]");
  }
  const int h = grid.height();
  const int w = grid.width();
  const int b = block_size;
  const double n = static_cast<double>(grid.size());
  const double n_valid = static_cast<double>(h - b + 1) * static_cast<double>(w - b + 1);
  const double rate = p * n / (static_cast<double>(b) * b * n_valid);
  if (rate > 1.0) throw ParameterError("block_mask: p too large for this block size and grid");

  Field keep(h, w, 1.0);
  for (int i = 0; i + b <= h; ++i) {
    for (int j = 0; j + b <= w; ++j) {
      if (!rng.bernoulli(rate)) continue;
      for (int di = 0; di < b; ++di)
        for (int dj = 0; dj < b; ++dj) keep(i + di, j + dj) = 0.0;
    }
  }
  std::size_t kept = 0;
  for (double v : keep.values()) kept += v > 0.0 ? 1 : 0;

  MaskField mask{Field(h, w), 1.0 - p, 0.0, kept == 0};
  if (kept == 0) return mask;
  mask.scale = n / static_cast<double>(kept);
  for (std::size_t i = 0; i < keep.size(); ++i) mask.values[i] = keep[i] * mask.scale;
  return mask;
}

Field additive_iid_gaussian(const GridSpec& grid, double sigma, RandomStream& rng) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw ParameterError("additive_iid_gaussian: sigma must be > 0");
  }
  Field out(grid.height(), grid.width());
  rng.fill_normal(out.values());
  for (double& v : out.values()) v *= sigma;
  return out;
}

Field additive_correlated_gaussian(const SpectralPlan& plan, double scale, RandomStream& rng) {
  if (!(scale >= 0.0) || !std::isfinite(scale)) {
    throw ParameterError("additive_correlated_gaussian: scale must be >= 0");
  }
  Field psi = sample_gff_spectral(plan, rng);
  for (double& v : psi.values()) v *= scale;
  return psi;
}

double energy_match_sigma(const SpectralPlan& plan, double gamma) {
  if (gamma == 0.0 || !std::isfinite(gamma)) {
    throw ParameterError("energy_match_sigma: gamma must be nonzero");
  }
  const Field& v = plan.variance();
  double acc = 0.0;
  for (double vx : v.values()) acc += std::expm1(gamma * gamma * vx);
  return std::sqrt(acc / static_cast<double>(v.size()));
}

}  // namespace gch
