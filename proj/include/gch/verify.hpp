#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gch/field.hpp"
#include "gch/grid.hpp"

namespace gch::verify {

/// Parameters shared by every check. Statistical checks draw `samples`
/// Monte Carlo replicates in fixed-size chunks; chunk c of run r of the
/// check with ordinal o uses RandomStream(seed, derive_id({o, r, c})), and
/// chunk results are merged in chunk order, so reports do not depend on
/// `workers`.
struct CheckConfig {
  int height = 4;
  int width = 4;
  /// At most one of beta and eps may be set; beta defaults to 1.
  std::optional<double> beta;
  std::optional<double> eps;
  double mass = 0.0;
  double gamma = 0.5;
  double q = 0.7;
  std::size_t samples = 200000;
  /// Tolerance multiplier: statistical checks pass when |emp - theo| <= k se.
  double k = 4.0;
  std::uint64_t seed = 20240917;
  int workers = 1;

  void validate() const;
  double resolved_beta() const;
  GridSpec grid() const;
};

struct VerificationReport {
  std::string check;
  std::string anchor;
  double empirical = 0.0;
  double theoretical = 0.0;
  double se = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  /// Deliberately perturbed target; the check is healthy when pass is false.
  bool negative_control = false;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double wall_ms = 0.0;

  bool ok() const noexcept { return negative_control ? !pass : pass; }
};

using ReportList = std::vector<VerificationReport>;

/// Absolute tolerance for algebraic identities.
inline constexpr double kIdentityTolerance = 1e-10;

ReportList check_energy_budget(const CheckConfig& cfg);
ReportList check_gff_covariance(const CheckConfig& cfg);
/// Every multiset of sites of size 1..max_order.
ReportList check_exact_gate_moments(const CheckConfig& cfg, int max_order = 4);
ReportList check_tau_sufficiency(const CheckConfig& cfg);
ReportList check_small_gamma(const CheckConfig& cfg);
ReportList check_logratio_law(const CheckConfig& cfg, Site x, Site y);
ReportList check_ranking_law(const CheckConfig& cfg, std::span<const double> margins);
ReportList check_intrinsic_budget(const CheckConfig& cfg, const Field& h);
ReportList check_dropout_inflation(const CheckConfig& cfg, const Field& h);
ReportList check_mask_singularity(const CheckConfig& cfg);
ReportList check_sandwich_and_oscillation(const CheckConfig& cfg);
ReportList check_cycle_fracture(const CheckConfig& cfg, int n);
ReportList check_samplewise_mean_one(const CheckConfig& cfg);
ReportList check_residual_interpolation(const CheckConfig& cfg);

/// Exact expectation of E_int(m_q h) by enumerating all 2^n masks (n <= 20).
double enumerate_dropout_energy(const GridSpec& grid, const Field& h, double q);

/// Deterministic positive test field with entries in [0.5, 2).
Field positive_test_field(const GridSpec& grid, std::uint64_t seed, std::uint64_t tag);

/// Names accepted by run_check, in canonical run_all order.
const std::vector<std::string>& check_names();
bool is_check_name(const std::string& name);
/// Runs a named check with its default arguments; throws ParameterError for
/// unknown names.
ReportList run_check(const std::string& name, const CheckConfig& cfg);
ReportList run_all(const CheckConfig& cfg);

/// True when every regular report passes and every negative control fails.
bool all_ok(const ReportList& reports);

/// One JSON object per report. With include_timing false the wall time is
/// written as 0 so that repeated runs are byte-identical.
std::string to_json_line(const VerificationReport& report, bool include_timing = true);
/// Column order: check, anchor, empirical, theoretical, se, tol, pass, N, seed, ms.
std::string csv_header();
std::string to_csv_row(const VerificationReport& report, bool include_timing = true);

}  // namespace gch::verify
