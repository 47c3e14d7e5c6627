#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "gch/cli.hpp"
#include "gch/error.hpp"
#include "gch/grid.hpp"
#include "gch/sampler.hpp"

namespace gch::cli {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError("config: bad value for '" + std::string(key) + "': " + std::string(text));
  }
  return value;
}

double parse_double(std::string_view key, std::string_view text) {
  const std::string s(text);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw ConfigError("config: bad value for '" + std::string(key) + "': " + s);
  }
  return v;
}

}  // namespace

std::pair<int, int> parse_grid(std::string_view text) {
  const auto x = text.find_first_of("xX");
  if (x == std::string_view::npos) throw ConfigError("grid must be HxW, got '" + std::string(text) + "'");
  const int h = parse_number<int>("grid", text.substr(0, x));
  const int w = parse_number<int>("grid", text.substr(x + 1));
  if (h < 1 || w < 1) throw ConfigError("grid dims must be >= 1");
  return {h, w};
}

RunConfig RunConfig::parse(std::string_view text) {
  RunConfig cfg;
  using Setter = std::function<void(std::string_view, std::string_view)>;
  const std::map<std::string, Setter, std::less<>> setters = {
      {"grid", [&](auto, auto v) { cfg.grid = parse_grid(v); }},
      {"beta", [&](auto k, auto v) { cfg.beta = parse_double(k, v); }},
      {"budget_eps", [&](auto k, auto v) { cfg.budget_eps = parse_double(k, v); }},
      {"gamma", [&](auto k, auto v) { cfg.gamma = parse_double(k, v); }},
      {"tau", [&](auto k, auto v) { cfg.tau = parse_double(k, v); }},
      {"q", [&](auto k, auto v) { cfg.q = parse_double(k, v); }},
      {"alpha", [&](auto k, auto v) { cfg.alpha = parse_double(k, v); }},
      {"mass", [&](auto k, auto v) { cfg.mass = parse_double(k, v); }},
      {"n", [&](auto k, auto v) { cfg.n = parse_number<std::size_t>(k, v); }},
      {"seed", [&](auto k, auto v) { cfg.seed = parse_number<std::uint64_t>(k, v); }},
      {"out", [&](auto, auto v) { cfg.out = std::string(v); }},
      {"normalization", [&](auto, auto v) { cfg.normalization = std::string(v); }},
      {"workers", [&](auto k, auto v) { cfg.workers = parse_number<int>(k, v); }},
      {"k", [&](auto k, auto v) { cfg.k = parse_double(k, v); }},
  };

  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError("config: unknown key '" + std::string(key) + "'");
    if (!seen.insert(std::string(key)).second) {
      throw ConfigError("config: duplicate key '" + std::string(key) + "'");
    }
    if (value.empty()) throw ConfigError("config: empty value for '" + std::string(key) + "'");
    it->second(key, value);
  }
  if (cfg.beta && cfg.budget_eps) throw ConfigError("config: give beta or budget_eps, not both");
  return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void RunConfig::overlay(const RunConfig& f) {
  // A flag for one side of the beta/eps pair replaces the other side too.
  if (f.beta || f.budget_eps) {
    beta = f.beta;
    budget_eps = f.budget_eps;
  }
  if (f.gamma || f.tau) {
    gamma = f.gamma;
    tau = f.tau;
  }
  if (f.grid) grid = f.grid;
  if (f.q) q = f.q;
  if (f.alpha) alpha = f.alpha;
  if (f.mass) mass = f.mass;
  if (f.n) n = f.n;
  if (f.seed) seed = f.seed;
  if (f.out) out = f.out;
  if (f.normalization) normalization = f.normalization;
  if (f.workers) workers = f.workers;
  if (f.k) k = f.k;
}

std::uint64_t RunConfig::resolved_seed(std::uint64_t fallback) const {
  if (seed) return *seed;
  if (const char* env = std::getenv("GCH_SEED"); env != nullptr && *env != '\0') {
    return parse_number<std::uint64_t>("GCH_SEED", env);
  }
  return fallback;
}

double RunConfig::required_beta() const {
  if (beta && budget_eps) throw ConfigError("give --beta or --budget-eps, not both");
  if (beta) {
    if (!(*beta > 0.0)) throw ConfigError("beta must be > 0");
    return *beta;
  }
  if (budget_eps) {
    if (!grid) throw ConfigError("--budget-eps needs --grid");
    if (!(*budget_eps > 0.0)) throw ConfigError("budget_eps must be > 0");
    return beta_from_budget(GridSpec(grid->first, grid->second, mass.value_or(0.0)), *budget_eps);
  }
  throw ConfigError("exactly one of --beta or --budget-eps is required");
}

}  // namespace gch::cli
