#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "gch/cli.hpp"
#include "gch/error.hpp"
#include "gch/field_file.hpp"
#include "gch/gates.hpp"
#include "gch/random.hpp"
#include "gch/sampler.hpp"
#include "gch/sine_transform.hpp"
#include "gch/verify.hpp"

namespace gch::cli {
namespace {

constexpr std::uint64_t kDefaultSeed = 20240917;
constexpr double kDefaultGamma = 0.5;

// Flags shared by subcommands. Each is copied into a RunConfig only when it
// was given, so that file values survive.
struct CommonFlags {
  std::string config_path;
  std::string grid;
  double beta = 0.0, budget_eps = 0.0, gamma = 0.0, tau = 0.0, q = 0.0, alpha = 0.0, mass = 0.0, k = 0.0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::string out, normalization;
  int workers = 0;
  std::map<std::string, CLI::Option*> options;

  void add(CLI::App* app, const std::string& name, auto& target, const std::string& help) {
    options[name] = app->add_option("--" + name, target, help);
  }

  bool given(const std::string& name) const {
    const auto it = options.find(name);
    return it != options.end() && it->second->count() > 0;
  }

  RunConfig resolve() const {
    RunConfig cfg = config_path.empty() ? RunConfig{} : RunConfig::load(config_path);
    RunConfig f;
    if (given("grid")) f.grid = parse_grid(grid);
    if (given("beta")) f.beta = beta;
    if (given("budget-eps")) f.budget_eps = budget_eps;
    if (given("gamma")) f.gamma = gamma;
    if (given("tau")) f.tau = tau;
    if (given("q")) f.q = q;
    if (given("alpha")) f.alpha = alpha;
    if (given("mass")) f.mass = mass;
    if (given("n")) f.n = n;
    if (given("seed")) f.seed = seed;
    if (given("out")) f.out = out;
    if (given("normalization")) f.normalization = normalization;
    if (given("workers")) f.workers = workers;
    if (given("k")) f.k = k;
    cfg.overlay(f);
    return cfg;
  }
};

CLI::Option* add_budget(CLI::App* app, CommonFlags& f) {
  f.add(app, "beta", f.beta, "inverse temperature (> 0)");
  f.add(app, "budget-eps", f.budget_eps, "energy budget eps; beta = n/(2 eps)");
  return f.options["beta"]->excludes(f.options["budget-eps"]);
}

void add_strength(CLI::App* app, CommonFlags& f) {
  f.add(app, "gamma", f.gamma, "gate strength (default 0.5)");
  f.add(app, "tau", f.tau, "effective strength gamma^2/beta; overrides --gamma");
  f.options["gamma"]->excludes(f.options["tau"]);
}

GridSpec grid_of(const RunConfig& cfg) {
  if (!cfg.grid) throw ConfigError("--grid HxW is required");
  return GridSpec(cfg.grid->first, cfg.grid->second, cfg.mass.value_or(0.0));
}

double gamma_of(const RunConfig& cfg, double beta) {
  if (cfg.gamma && cfg.tau) throw ConfigError("give gamma or tau, not both");
  if (cfg.tau) {
    if (!(*cfg.tau >= 0.0)) throw ConfigError("tau must be >= 0");
    return std::sqrt(*cfg.tau * beta);
  }
  return cfg.gamma.value_or(kDefaultGamma);
}

std::filesystem::path out_dir(const RunConfig& cfg) {
  if (!cfg.out) throw ConfigError("--out DIR is required");
  std::filesystem::create_directories(*cfg.out);
  return *cfg.out;
}

int cmd_sample(const RunConfig& cfg, std::ostream& out) {
  const GridSpec grid = grid_of(cfg);
  const double beta = cfg.required_beta();
  const double gamma = gamma_of(cfg, beta);
  const std::string norm = cfg.normalization.value_or("exact");
  if (norm != "exact" && norm != "samplewise" && norm != "latent") {
    throw ConfigError("normalization must be exact, samplewise or latent");
  }
  const std::optional<double> alpha = cfg.alpha;
  if (alpha && !(*alpha > 0.0 && *alpha <= 1.0)) throw ConfigError("alpha must be in (0, 1]");
  const std::size_t count = cfg.n.value_or(1);
  const std::uint64_t seed = cfg.resolved_seed(kDefaultSeed);
  const auto dir = out_dir(cfg);
  const SpectralPlan plan(grid, beta);

  for (std::size_t i = 0; i < count; ++i) {
    RandomStream rng(seed, i);
    Field field = sample_gff_spectral(plan, rng);
    if (norm != "latent") {
      field = norm == "exact" ? exact_wick_gate(plan, field, gamma).values
                              : samplewise_gate(field, gamma, beta).values;
      // The multiplier a residual injection would apply.
      if (alpha) {
        for (double& v : field.values()) v = 1.0 + *alpha * (v - 1.0);
      }
    }
    char name[64];
    std::snprintf(name, sizeof name, "sample_%06zu.gchf", i);
    write_field_file(dir / name, field);
  }
  out << "wrote " << count << " " << norm << " field(s) of " << grid.height() << "x" << grid.width()
      << " to " << dir.string() << "\n";
  return 0;
}

void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path.string());
  char buf[32];
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", m(r, c));
      f << (c ? "," : "") << buf;
    }
    f << "\n";
  }
}

int cmd_kernel(const RunConfig& cfg, std::ostream& out) {
  const GridSpec grid = grid_of(cfg);
  const double beta = cfg.required_beta();
  const double tau = cfg.tau ? *cfg.tau : effective_tau(gamma_of(cfg, beta), beta);
  const auto dir = out_dir(cfg);
  const Eigen::MatrixXd green = green_matrix(grid);
  const Eigen::Index n = green.rows();
  Eigen::MatrixXd metric(n, n);
  Eigen::MatrixXd gate(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      metric(a, b) = a == b ? 0.0 : std::max(green(a, a) + green(b, b) - 2.0 * green(a, b), 0.0);
      gate(a, b) = std::exp(tau * green(a, b));
    }
  }
  const Field v = variance_map(grid, beta);
  Eigen::MatrixXd var(grid.height(), grid.width());
  for (int r = 0; r < grid.height(); ++r)
    for (int c = 0; c < grid.width(); ++c) var(r, c) = v(r, c);
  write_matrix_csv(dir / "green.csv", green);
  write_matrix_csv(dir / "green_metric.csv", metric);
  write_matrix_csv(dir / "variance.csv", var);
  write_matrix_csv(dir / "gate_kernel.csv", gate);
  out << "wrote green.csv, green_metric.csv, variance.csv, gate_kernel.csv to " << dir.string() << "\n";
  return 0;
}

int cmd_verify(const RunConfig& cfg, const std::vector<std::string>& checks, bool json,
               const std::string& csv_path, bool timing, std::ostream& out, std::ostream& err) {
  for (const auto& name : checks) {
    if (!verify::is_check_name(name)) {
      err << "unknown check '" << name << "'; known checks:";
      for (const auto& known : verify::check_names()) err << " " << known;
      err << "\n";
      return 2;
    }
  }
  verify::CheckConfig cc;
  if (cfg.grid) {
    cc.height = cfg.grid->first;
    cc.width = cfg.grid->second;
  }
  cc.mass = cfg.mass.value_or(cc.mass);
  if (cfg.beta && cfg.budget_eps) throw ConfigError("give beta or budget_eps, not both");
  cc.beta = cfg.beta;
  cc.eps = cfg.budget_eps;
  if (cfg.tau || cfg.gamma) cc.gamma = gamma_of(cfg, cc.resolved_beta());
  cc.q = cfg.q.value_or(cc.q);
  cc.samples = cfg.n.value_or(cc.samples);
  cc.k = cfg.k.value_or(cc.k);
  cc.seed = cfg.resolved_seed(cc.seed);
  cc.workers = cfg.workers.value_or(cc.workers);
  cc.validate();

  verify::ReportList reports;
  if (checks.empty()) {
    reports = verify::run_all(cc);
  } else {
    for (const auto& name : checks) {
      auto part = verify::run_check(name, cc);
      reports.insert(reports.end(), part.begin(), part.end());
    }
  }

  if (json) {
    for (const auto& r : reports) out << verify::to_json_line(r, timing) << "\n";
  } else {
    std::size_t failed = 0;
    char buf[256];
    auto print = [&](const verify::VerificationReport& r) {
      std::snprintf(buf, sizeof buf, "%-4s %-48s emp=%-14.8g theo=%-14.8g tol=%.3g\n",
                    r.ok() ? "ok" : "FAIL", r.check.c_str(), r.empirical, r.theoretical, r.tolerance);
      out << buf;
      failed += !r.ok();
    };
    for (const auto& r : reports)
      if (!r.negative_control) print(r);
    out << "negative controls (expected to fail their own tolerance):\n";
    for (const auto& r : reports)
      if (r.negative_control) print(r);
    out << reports.size() - failed << "/" << reports.size() << " reports ok\n";
  }
  if (!csv_path.empty()) {
    std::ofstream f(csv_path);
    if (!f) throw Error("cannot write " + csv_path);
    f << verify::csv_header() << "\n";
    for (const auto& r : reports) f << verify::to_csv_row(r, timing) << "\n";
  }
  return verify::all_ok(reports) ? 0 : 1;
}

template <typename Fn>
double time_us(int reps, Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) fn();
  const std::chrono::duration<double, std::micro> d = std::chrono::steady_clock::now() - start;
  return d.count() / reps;
}

int cmd_bench(const RunConfig& cfg, const std::vector<int>& sizes, int reps, int naive_max,
              std::ostream& out) {
  if (reps < 1) throw ConfigError("--reps must be >= 1");
  const std::uint64_t seed = cfg.resolved_seed(kDefaultSeed);
  out << "grid,n,fast_us,naive_us,speedup,samples_per_sec\n";
  for (int s : sizes) {
    if (s < 1) throw ConfigError("bench sizes must be >= 1");
    const GridSpec grid(s, s);
    RandomStream rng(seed, static_cast<std::uint64_t>(s));
    Field input(s, s);
    rng.fill_normal(input.values());
    const SineTransform2D fast(s, s, TransformMethod::Fast);
    volatile double sink = 0.0;
    const double fast_us = time_us(reps, [&] { sink = sink + fast.apply(input)[0]; });
    double naive_us = std::nan("");
    if (s <= naive_max) {
      const SineTransform2D naive(s, s, TransformMethod::Naive);
      naive_us = time_us(1, [&] { sink = sink + naive.apply(input)[0]; });
    }
    const SpectralPlan plan(grid, 1.0);
    const double sample_us = time_us(reps, [&] { sink = sink + sample_gff_spectral(plan, rng)[0]; });
    char buf[256];
    std::snprintf(buf, sizeof buf, "%dx%d,%d,%.3f,%.3f,%.3f,%.1f\n", s, s, s * s, fast_us, naive_us,
                  naive_us / fast_us, 1e6 / sample_us);
    out << buf;
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gaussian chaos noise: field sampling, kernels and verification"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "gch 0.1.0");

  CommonFlags sf, kf, vf, bf;
  auto add_config = [](CLI::App* sub, CommonFlags& f) {
    sub->add_option("--config", f.config_path, "key = value run configuration file");
  };

  CLI::App* sample = app.add_subcommand("sample", "write latent-field or gate samples as .gchf files");
  add_config(sample, sf);
  sf.add(sample, "grid", sf.grid, "interior grid HxW");
  add_budget(sample, sf);
  add_strength(sample, sf);
  sf.add(sample, "mass", sf.mass, "mass term mu >= 0");
  sf.add(sample, "normalization", sf.normalization, "exact | samplewise | latent (default exact)");
  sf.options["normalization"]->check(CLI::IsMember({"exact", "samplewise", "latent"}));
  sf.add(sample, "alpha", sf.alpha, "write residual multipliers 1 + alpha (xi - 1)");
  sf.add(sample, "n", sf.n, "number of samples (default 1)");
  sf.add(sample, "seed", sf.seed, "master seed (fallback: GCH_SEED)");
  sf.add(sample, "out", sf.out, "output directory");

  CLI::App* kernel = app.add_subcommand("kernel", "export Green kernel, metric, variance and gate kernel as CSV");
  add_config(kernel, kf);
  kf.add(kernel, "grid", kf.grid, "interior grid HxW");
  add_budget(kernel, kf);
  add_strength(kernel, kf);
  kf.add(kernel, "mass", kf.mass, "mass term mu >= 0");
  kf.add(kernel, "out", kf.out, "output directory");

  std::vector<std::string> checks;
  bool json = false;
  bool no_timing = false;
  std::string csv_path;
  CLI::App* ver = app.add_subcommand("verify", "run the verification suite");
  add_config(ver, vf);
  ver->add_option("--check", checks, "check name (repeatable; default all)");
  ver->add_flag("--json", json, "one JSON report per line");
  ver->add_option("--csv", csv_path, "also write a CSV summary");
  ver->add_flag("--no-timing", no_timing, "write wall time as 0");
  vf.add(ver, "grid", vf.grid, "interior grid HxW (default 4x4)");
  add_budget(ver, vf);
  add_strength(ver, vf);
  vf.add(ver, "q", vf.q, "dropout keep probability (default 0.7)");
  vf.add(ver, "mass", vf.mass, "mass term mu >= 0");
  vf.add(ver, "n", vf.n, "Monte Carlo samples per check (default 200000)");
  vf.add(ver, "k", vf.k, "tolerance multiplier (default 4)");
  vf.add(ver, "seed", vf.seed, "master seed (fallback: GCH_SEED)");
  vf.add(ver, "workers", vf.workers, "worker threads (default 1)");

  std::vector<int> sizes = {16, 32, 64, 128};
  int reps = 20;
  int naive_max = 128;
  CLI::App* bench = app.add_subcommand("bench", "time fast and naive sine transforms and sampling");
  add_config(bench, bf);
  bench->add_option("--sizes", sizes, "square grid sides")->delimiter(',');
  bench->add_option("--reps", reps, "repetitions of the fast path");
  bench->add_option("--naive-max", naive_max, "largest side timed with the naive transform");
  bf.add(bench, "seed", bf.seed, "seed for the input fields");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << app.version() << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 2;
  }

  try {
    if (sample->parsed()) return cmd_sample(sf.resolve(), out);
    if (kernel->parsed()) return cmd_kernel(kf.resolve(), out);
    if (ver->parsed()) return cmd_verify(vf.resolve(), checks, json, csv_path, !no_timing, out, err);
    if (bench->parsed()) return cmd_bench(bf.resolve(), sizes, reps, naive_max, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace gch::cli
