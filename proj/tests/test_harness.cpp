#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "strichartz/harness.hpp"

using namespace strichartz::harness;
namespace fs = std::filesystem;

namespace {

ExperimentConfig parse(const std::string& exp, const std::string& text) {
  std::istringstream in(text);
  return parse_config(exp, in);
}

const char* kGrid = "grid.n = 1024\ngrid.x_min = -20\ngrid.x_max = 20\n";

}  // namespace

TEST_CASE("experiment names") {
  const auto& names = experiment_names();
  CHECK(names.size() == 8);
  for (const auto& n : names) CHECK(is_experiment(n));
  CHECK_FALSE(is_experiment("sharp"));
  CHECK_THROWS_AS(default_config("nope"), UsageError);
}

TEST_CASE("defaults serialize and parse back") {
  for (const auto& n : experiment_names()) {
    const auto c = default_config(n);
    CAPTURE(n);
    CHECK(c.experiment == n);
    CHECK_NOTHROW(validate(c));
    std::istringstream in(serialize(c));
    CHECK(parse_config(n, in) == c);
  }
  const auto c = default_config("sharp-constant");
  CHECK(c.integer("grid.n") == 1024);
  CHECK(c.number("grid.x_min") == -20.0);
  CHECK(c.seed() == 1);
  CHECK(default_config("bilinear-sweep").list("sweep.N_list") == std::vector<double>{4, 8, 16, 32, 64});
}

TEST_CASE("config parsing rejects malformed input") {
  const std::string g = kGrid;
  CHECK_NOTHROW(parse("sharp-constant", g + "# comment\nseed = 3  # trailing\n"));
  CHECK(parse("sharp-constant", g + "seed = 3\n").seed() == 3);
  CHECK(parse("sharp-constant", g + "time.nodes = 129\n").integer("time.nodes") == 129);

  CHECK_THROWS_AS(parse("sharp-constant", "grid.x_min = -20\ngrid.x_max = 20\n"), UsageError);
  CHECK_THROWS_AS(parse("sharp-constant", g + "grid.wibble = 3\n"), UsageError);
  CHECK_THROWS_AS(parse("sharp-constant", g + "seed = 1\nseed = 2\n"), UsageError);
  CHECK_THROWS_AS(parse("sharp-constant", g + "seed =\n"), UsageError);
  CHECK_THROWS_AS(parse("sharp-constant", g + "no equals sign\n"), UsageError);
  CHECK_THROWS_AS(parse("sharp-constant", g + "experiment = iterate\n"), UsageError);
  CHECK_NOTHROW(parse("sharp-constant", g + "experiment = sharp-constant\n"));
  CHECK_THROWS_AS(parse("sharp-constant", "grid.n = 1000\ngrid.x_min = -20\ngrid.x_max = 20\n"), UsageError);
  CHECK_THROWS_AS(parse("sharp-constant", "grid.n = 1024\ngrid.x_min = 5\ngrid.x_max = -5\n"), UsageError);
  CHECK_THROWS_AS(parse("sharp-constant", g + "time.scale = -1\n"), UsageError);
  CHECK_THROWS_AS(parse("sharp-constant", g + "time.nodes = abc\n"), UsageError);
  CHECK_THROWS_AS(parse("iterate", g + "iterate.profile = triangle\n"), UsageError);
  CHECK_THROWS_AS(parse("power-sums", "power.kmax = 2\n"), UsageError);
  CHECK_THROWS_AS(parse("decay-report", g + "decay.s = 1\n"), UsageError);
  CHECK_THROWS_AS(parse("decay-report", g + "decay.eps_list = 1,2\n"), UsageError);
  CHECK_THROWS_AS(parse("no-such", g), UsageError);
  // sweep and power sums build their own grids
  CHECK_NOTHROW(parse("power-sums", ""));
  CHECK_THROWS_AS(parse("power-sums", g), UsageError);
}

TEST_CASE("reports are deterministic") {
  for (const char* n : {"power-sums", "foundations", "sharp-constant"}) {
    const auto c = default_config(n);
    const auto a = run(c);
    const auto b = run(c);
    CAPTURE(n);
    CHECK(a.body() == b.body());
    CHECK(a.passed());
    const auto j = nlohmann::json::parse(a.body());
    CHECK(j["experiment"] == n);
    CHECK(j["checks_passed"] == true);
    CHECK(j["checks"].size() == a.checks.size());
    CHECK_FALSE(j.contains("wall_seconds"));
    const auto t = nlohmann::json::parse(a.timing("out"));
    CHECK(t["wall_seconds"].get<double>() >= 0.0);
  }
}

TEST_CASE("passed() needs every check") {
  ExperimentReport r;
  CHECK(r.passed());
  r.checks.push_back({"AC6", "x", true, 0.0, 0.0, "=="});
  CHECK(r.passed());
  r.runtime_checks.push_back({"AC6", "runtime", false, 2.0, 1.0, "<"});
  CHECK_FALSE(r.passed());
  r.runtime_checks.back().passed = true;
  r.checks.push_back({"AC6", "y", false, 0.0, 0.0, "=="});
  CHECK_FALSE(r.passed());
}

TEST_CASE("outputs land in the directory") {
  const fs::path dir = fs::temp_directory_path() / "strichartz_harness_test";
  fs::remove_all(dir);
  auto c = default_config("power-sums");
  c.values["power.kmax"] = "40";
  const auto rep = run(c);
  write_outputs(rep, dir);
  for (const char* f : {"report.json", "timing.json", "config.txt", "power_sums.csv"}) {
    CAPTURE(f);
    CHECK(fs::exists(dir / f));
  }
  std::ifstream in(dir / "config.txt");
  CHECK(parse_config("power-sums", in) == c);
  std::ifstream rj(dir / "report.json");
  std::stringstream ss;
  ss << rj.rdbuf();
  CHECK(ss.str() == rep.body());
  fs::remove_all(dir);
}
