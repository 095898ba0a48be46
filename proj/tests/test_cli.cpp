#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "duhamel/config.hpp"
#include "duhamel/runner.hpp"

using namespace duhamel;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("config: preset with defaults") {
  const RunConfig cfg = parse_config_text(R"({"preset": "finite-speed-burgers"})");
  CHECK(cfg.scenario.name == "finite-speed-burgers");
  CHECK(cfg.scenario.phi_kind == "zero");
  CHECK(cfg.scenario.n == 2000);
  CHECK(cfg.scenario.inequalities == std::vector<std::string>{"thm2.7"});
}

TEST_CASE("config: override grid and times") {
  const RunConfig cfg = parse_config_text(
      R"({"preset": "stefan-tempered-headline",
          "grid": {"n": 500}, "verify_times": [0.25, 0.5], "seed": 7})");
  CHECK(cfg.scenario.n == 500);
  CHECK(cfg.scenario.verify_times.size() == 2);
  CHECK(cfg.scenario.seed == 7);
}

TEST_CASE("config: alpha out of range is rejected") {
  try {
    (void)parse_config_text(
        R"({"preset": "linear-duhamel-cauchy", "alpha": 2.5,
            "measure": {"kind": "stable-fractional", "alpha": 2.5}})");
    FAIL("expected a config error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::config_error);
    CHECK(std::string(e.what()).find("alpha out of") != std::string::npos);
  }
}

TEST_CASE("config: partial-Duhamel family needs a tempered measure") {
  try {
    (void)parse_config_text(
        R"({"preset": "stefan-tempered-headline",
            "measure": {"kind": "stable", "alpha": 1.0, "c": 1.0}})");
    FAIL("expected a config error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("tempered measure") != std::string::npos);
  }
}

TEST_CASE("config: every violation is reported at once") {
  try {
    (void)parse_config_text(
        R"({"preset": "stefan-tempered-headline",
            "grid": {"x_min": 5, "x_max": -5, "n": 1},
            "horizon": -1.0, "threads": 0})");
    FAIL("expected a config error");
  } catch (const Error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("x_min") != std::string::npos);
    CHECK(msg.find("n must be at least") != std::string::npos);
    CHECK(msg.find("horizon") != std::string::npos);
    CHECK(msg.find("threads") != std::string::npos);
  }
}

TEST_CASE("config: enlarged balls must fit the domain") {
  try {
    (void)parse_config_text(
        R"({"preset": "stefan-tempered-headline", "balls": [[0.0, 7.0]]})");
    FAIL("expected a config error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("BallExceedsDomain") != std::string::npos);
  }
}

TEST_CASE("config: tabulated measure from csv") {
  const fs::path dir = fs::temp_directory_path() / "duhamel_cli_test";
  fs::create_directories(dir);
  {
    std::ofstream os(dir / "measure.csv");
    os << "-1.0,0.2\n-0.1,1.0\n0.1,1.0\n1.0,0.2\n";
  }
  std::ostringstream cfg;
  cfg << R"({"preset": "stefan-tempered-headline",
             "measure": {"kind": "table", "file": "measure.csv", "decay_rate": 3.0}})";
  const RunConfig rc = parse_config_text(cfg.str(), dir.string());
  CHECK(rc.scenario.measure.kind == "table");
  CHECK(rc.scenario.measure.nodes.size() == 4);
  CHECK(rc.scenario.measure.decay_rate == 3.0);
}

TEST_CASE("cmd_verify writes deterministic artifacts and exit code") {
  const fs::path out1 = fs::temp_directory_path() / "duhamel_out1";
  const fs::path out2 = fs::temp_directory_path() / "duhamel_out2";
  fs::remove_all(out1);
  fs::remove_all(out2);

  RunConfig cfg = parse_config_text(
      R"({"preset": "finite-speed-burgers", "grid": {"n": 400},
          "seed": 5, "n_random_test_functions": 2})");
  cfg.out_dir = out1.string();
  CHECK(cmd_verify(cfg) == 0);
  cfg.out_dir = out2.string();
  CHECK(cmd_verify(cfg) == 0);

  for (const char* f : {"manifest.json", "reports.json", "reports.csv"}) {
    CAPTURE(f);
    CHECK(fs::exists(out1 / f));
    CHECK(slurp(out1 / f) == slurp(out2 / f));
  }
  CHECK(fs::exists(out1 / "traj_u" / "manifest.json"));
  CHECK(slurp(out1 / "traj_u" / "snap_0000.csv") == slurp(out2 / "traj_u" / "snap_0000.csv"));
}

TEST_CASE("cmd_sweep emits the convergence table") {
  const fs::path out = fs::temp_directory_path() / "duhamel_sweep";
  fs::remove_all(out);
  RunConfig cfg = parse_config_text(R"({"preset": "finite-speed-burgers"})");
  cfg.out_dir = out.string();
  CHECK(cmd_sweep(cfg, {200, 400}) == 0);
  CHECK(fs::exists(out / "sweep.csv"));
  CHECK(fs::exists(out / "plotdata" / "margin_vs_n.csv"));
  const std::string table = slurp(out / "sweep.csv");
  CHECK(table.find("max_violation") != std::string::npos);
}

TEST_CASE("sweep of a constants-only scenario has zero margins at every n") {
  const fs::path out = fs::temp_directory_path() / "duhamel_sweep_const";
  fs::remove_all(out);
  // identical constant data on both sides: both sides of the bound vanish
  RunConfig cfg = parse_config_text(
      R"({"preset": "finite-speed-burgers",
          "initial": {"base": 0.2, "height": 0.0}})");
  cfg.out_dir = out.string();
  CHECK(cmd_sweep(cfg, {100, 200}) == 0);
  std::stringstream table(slurp(out / "sweep.csv"));
  std::string line;
  std::getline(table, line);  // header
  while (std::getline(table, line)) {
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    CHECK(std::stod(line.substr(c1 + 1, c2 - c1 - 1)) == 0.0);  // max_violation
  }
  CHECK_THROWS_AS((void)cmd_sweep(cfg, {200, 100}), Error);
}

TEST_CASE("exit codes map error classes") {
  CHECK(exit_code_for(Error(Errc::config_error, "x")) == 2);
  CHECK(exit_code_for(Error(Errc::ball_exceeds_domain, "x")) == 2);
  CHECK(exit_code_for(Error(Errc::cfl_violation, "x")) == 3);
  CHECK(exit_code_for(Error(Errc::numerical_failure, "x")) == 3);
}
