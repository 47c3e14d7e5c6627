#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gch::cli {

/// Settings shared by every subcommand. Read from a flat `key = value` file
/// (`#` starts a comment) and overlaid by command-line flags.
///
/// Keys: grid (HxW), beta, budget_eps, gamma, tau, q, alpha, mass, n, seed,
/// out, normalization, workers, k.
struct RunConfig {
  std::optional<std::pair<int, int>> grid;
  std::optional<double> beta;
  std::optional<double> budget_eps;
  std::optional<double> gamma;
  std::optional<double> tau;
  std::optional<double> q;
  std::optional<double> alpha;
  std::optional<double> mass;
  std::optional<std::size_t> n;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> normalization;
  std::optional<int> workers;
  std::optional<double> k;

  /// Throws ConfigError on unknown keys, duplicate keys, malformed lines or
  /// values, and when both beta and budget_eps are present.
  static RunConfig parse(std::string_view text);
  static RunConfig load(const std::filesystem::path& path);

  /// Fields set in `flags` replace those here.
  void overlay(const RunConfig& flags);

  /// Seed from the config, else GCH_SEED, else `fallback`.
  std::uint64_t resolved_seed(std::uint64_t fallback) const;

  /// Beta from exactly one of beta / budget_eps; ConfigError otherwise.
  double required_beta() const;
};

/// "HxW" with positive integers.
std::pair<int, int> parse_grid(std::string_view text);

/// Entry point. Returns the process exit code: 0 on success, 1 when a verify
/// run has failing reports or a command fails, 2 on usage errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace gch::cli
