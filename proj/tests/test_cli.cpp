#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gch/cli.hpp"
#include "gch/error.hpp"
#include "gch/field_file.hpp"

using namespace gch;
using namespace gch::cli;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("gch_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::vector<double>> read_csv(const fs::path& p) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(slurp(p));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_CASE("run config parsing") {
  const RunConfig cfg = RunConfig::parse(
      "# comment\n"
      "grid = 4x6\n"
      "beta=2.5   # trailing comment\n"
      "\n"
      "gamma = 0.3\n"
      "n = 12\n"
      "seed = 123\n"
      "out = some/dir\n"
      "normalization = samplewise\n");
  REQUIRE(cfg.grid);
  CHECK(cfg.grid->first == 4);
  CHECK(cfg.grid->second == 6);
  CHECK(*cfg.beta == 2.5);
  CHECK(*cfg.gamma == 0.3);
  CHECK(*cfg.n == 12);
  CHECK(*cfg.seed == 123);
  CHECK(*cfg.out == "some/dir");
  CHECK(*cfg.normalization == "samplewise");
  CHECK_FALSE(cfg.budget_eps);

  CHECK_THROWS_AS(RunConfig::parse("colour = red\n"), ConfigError);
  CHECK_THROWS_AS(RunConfig::parse("beta = 1\nbudget_eps = 2\n"), ConfigError);
  CHECK_THROWS_AS(RunConfig::parse("beta = 1\nbeta = 2\n"), ConfigError);
  CHECK_THROWS_AS(RunConfig::parse("beta 1\n"), ConfigError);
  CHECK_THROWS_AS(RunConfig::parse("beta = fast\n"), ConfigError);
  CHECK_THROWS_AS(RunConfig::parse("grid = 4by4\n"), ConfigError);
  CHECK_THROWS_AS(RunConfig::parse("grid = 0x4\n"), ConfigError);
  CHECK_THROWS_AS(RunConfig::parse("n = -3\n"), ConfigError);
}

TEST_CASE("run config overlay and budget") {
  RunConfig base = RunConfig::parse("grid = 8x8\nbeta = 2\ngamma = 0.4\n");
  RunConfig flags;
  flags.budget_eps = 8.0;
  flags.seed = 5;
  base.overlay(flags);
  CHECK_FALSE(base.beta);
  CHECK(base.required_beta() == doctest::Approx(4.0));
  CHECK(*base.gamma == 0.4);
  CHECK(base.resolved_seed(0) == 5);

  RunConfig none = RunConfig::parse("grid = 2x2\n");
  CHECK_THROWS_AS(none.required_beta(), ConfigError);

  ::setenv("GCH_SEED", "4242", 1);
  CHECK(none.resolved_seed(1) == 4242);
  ::unsetenv("GCH_SEED");
  CHECK(none.resolved_seed(1) == 1);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(call({}).code == 2);
  CHECK(call({"frobnicate"}).code == 2);
  CHECK(call({"verify", "--check", "no_such_check"}).code == 2);
  CHECK(call({"sample", "--grid", "2x2", "--beta", "1", "--budget-eps", "1", "--out", "x"}).code == 2);
  CHECK(call({"sample", "--grid", "2x2", "--out", scratch("nobeta").string()}).code == 2);
  CHECK(call({"--help"}).code == 0);
}

TEST_CASE("sample writes deterministic files") {
  const fs::path a = scratch("sample_a"), b = scratch("sample_b");
  const std::vector<std::string> common = {"sample", "--grid", "5x4", "--beta", "1.5", "--gamma", "0.6", "--n", "3", "--seed", "11"};
  auto with_out = [&](const fs::path& dir, std::vector<std::string> extra = {}) {
    auto args = common;
    args.insert(args.end(), extra.begin(), extra.end());
    args.push_back("--out");
    args.push_back(dir.string());
    return call(args);
  };
  REQUIRE(with_out(a).code == 0);
  REQUIRE(with_out(b).code == 0);
  for (const char* name : {"sample_000000.gchf", "sample_000001.gchf", "sample_000002.gchf"}) {
    CHECK(slurp(a / name) == slurp(b / name));
    const Field f = read_field_file(a / name);
    CHECK(f.height() == 5);
    CHECK(f.width() == 4);
    CHECK(f.min() > 0.0);
  }
  CHECK(slurp(a / "sample_000000.gchf") != slurp(a / "sample_000001.gchf"));

  const fs::path sw = scratch("sample_sw");
  REQUIRE(with_out(sw, {"--normalization", "samplewise"}).code == 0);
  for (int i = 0; i < 3; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "sample_%06d.gchf", i);
    CHECK(std::abs(read_field_file(sw / name).mean() - 1.0) <= 1e-12);
  }

  const fs::path ones = scratch("sample_ones");
  REQUIRE(call({"sample", "--grid", "3x3", "--budget-eps", "2", "--gamma", "0", "--out", ones.string()}).code == 0);
  for (const auto held = read_field_file(ones / "sample_000000.gchf"); double v : held.values()) CHECK(v == 1.0);

  const fs::path latent = scratch("sample_latent");
  REQUIRE(with_out(latent, {"--normalization", "latent"}).code == 0);
  CHECK(read_field_file(latent / "sample_000000.gchf").min() < 0.0);
}

TEST_CASE("sample reads a config file and flags override it") {
  const fs::path dir = scratch("sample_cfg");
  fs::create_directories(dir);
  {
    std::ofstream cfg(dir / "run.cfg");
    cfg << "grid = 2x3\nbeta = 1\ngamma = 0.5\nn = 2\nseed = 3\nout = " << (dir / "out").string() << "\n";
  }
  REQUIRE(call({"sample", "--config", (dir / "run.cfg").string()}).code == 0);
  CHECK(fs::exists(dir / "out" / "sample_000001.gchf"));
  REQUIRE(call({"sample", "--config", (dir / "run.cfg").string(), "--grid", "4x4", "--out", (dir / "out2").string()}).code == 0);
  CHECK(read_field_file(dir / "out2" / "sample_000000.gchf").height() == 4);
  {
    std::ofstream cfg(dir / "bad.cfg");
    cfg << "grid = 2x3\nwat = 1\n";
  }
  CHECK(call({"sample", "--config", (dir / "bad.cfg").string()}).code == 2);
}

TEST_CASE("kernel export") {
  const fs::path one = scratch("kernel_one");
  REQUIRE(call({"kernel", "--grid", "1x1", "--beta", "1", "--out", one.string()}).code == 0);
  const auto g1 = read_csv(one / "green.csv");
  REQUIRE(g1.size() == 1);
  CHECK(g1[0][0] == doctest::Approx(0.25));

  const fs::path two = scratch("kernel_two");
  REQUIRE(call({"kernel", "--grid", "2x1", "--beta", "2", "--tau", "0.5", "--out", two.string()}).code == 0);
  const auto g = read_csv(two / "green.csv");
  CHECK(g[0][0] == doctest::Approx(4.0 / 15.0));
  CHECK(g[0][1] == doctest::Approx(1.0 / 15.0));
  CHECK(g[0][1] == g[1][0]);
  CHECK(read_csv(two / "green_metric.csv")[0][1] == doctest::Approx(0.4));
  CHECK(read_csv(two / "variance.csv")[1][0] == doctest::Approx(2.0 / 15.0));
  CHECK(read_csv(two / "gate_kernel.csv")[0][1] == doctest::Approx(std::exp(0.5 / 15.0)));

  const fs::path six = scratch("kernel_six");
  REQUIRE(call({"kernel", "--grid", "6x6", "--beta", "1", "--out", six.string()}).code == 0);
  const auto g6 = read_csv(six / "green.csv");
  for (std::size_t a = 0; a < 36; ++a)
    for (std::size_t b = 0; b < 36; ++b) CHECK(g6[a][b] == g6[b][a]);
}

TEST_CASE("verify exit codes and report formats") {
  const std::vector<std::string> base = {"verify", "--grid", "3x3", "--n", "20000", "--seed", "5", "--no-timing"};
  auto args = base;
  args.push_back("--json");
  const Result ok = call(args);
  CHECK(ok.code == 0);
  std::istringstream lines(ok.out);
  std::string line;
  std::size_t count = 0, controls = 0;
  while (std::getline(lines, line)) {
    const auto j = nlohmann::json::parse(line);
    CHECK(j.contains("anchor"));
    CHECK(j["ms"] == 0.0);
    controls += j["negative_control"].get<bool>();
    ++count;
  }
  CHECK(count > 40);
  CHECK(controls >= 10);

  CHECK(call(args).out == ok.out);
  auto workers = args;
  workers.insert(workers.end(), {"--workers", "4"});
  CHECK(call(workers).out == ok.out);

  auto strict = base;
  strict.insert(strict.end(), {"--k", "1"});
  CHECK(call(strict).code == 1);

  const fs::path dir = scratch("verify_csv");
  fs::create_directories(dir);
  auto csv = base;
  csv.insert(csv.end(), {"--check", "cycle_fracture", "--check", "mask_singularity", "--csv", (dir / "r.csv").string()});
  const Result human = call(csv);
  CHECK(human.code == 0);
  CHECK(human.out.find("negative controls") != std::string::npos);
  const std::string text = slurp(dir / "r.csv");
  CHECK(text.rfind("check,anchor,empirical,theoretical,se,tol,pass,N,seed,ms\n", 0) == 0);
  CHECK(text.find("cycle_fracture.n4,") != std::string::npos);
}

TEST_CASE("bench emits the fixed schema") {
  const Result r = call({"bench", "--sizes", "4,8", "--reps", "2"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string header, row;
  std::getline(in, header);
  CHECK(header == "grid,n,fast_us,naive_us,speedup,samples_per_sec");
  std::getline(in, row);
  CHECK(row.rfind("4x4,16,", 0) == 0);
}
