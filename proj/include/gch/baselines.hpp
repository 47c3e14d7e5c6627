#pragma once

#include "gch/field.hpp"
#include "gch/grid.hpp"
#include "gch/random.hpp"

namespace gch {

class SpectralPlan;

/// Binary mask with entries in {0, scale}.
struct MaskField {
  Field values;
  /// Nominal keep probability.
  double keep_prob = 1.0;
  /// Nonzero entry value.
  double scale = 1.0;
  /// Set when every site was dropped; values are then all zero.
  bool degenerate = false;
};

/// Inverted dropout: each site independently 1/q with probability q, else 0.
MaskField inverted_dropout_mask(const GridSpec& grid, double q, RandomStream& rng);

/// Block-structured hard mask. Block anchors are drawn i.i.d. over the
/// (H-b+1)(W-b+1) positions where a full b x b block fits, at the rate
/// p n / (b^2 n_valid) so the expected dropped fraction is about p. Kept
/// sites are rescaled by n / kept so each sample has spatial mean one.
/// block_size == 1 reduces to per-site Bernoulli(1-p) masking.
MaskField block_mask(const GridSpec& grid, double p, int block_size, RandomStream& rng);

/// i.i.d. N(0, sigma^2) field.
Field additive_iid_gaussian(const GridSpec& grid, double sigma, RandomStream& rng);

/// scale * psi with psi drawn from the plan's log-field law.
Field additive_correlated_gaussian(const SpectralPlan& plan, double scale, RandomStream& rng);

/// sigma with sigma^2 = mean_x (exp(gamma^2 v(x)) - 1): matches the mean
/// per-site variance of the exact gate's deviation from one.
double energy_match_sigma(const SpectralPlan& plan, double gamma);

}  // namespace gch
