// Command-line entry point: solve the Cauchy problem, solve the dual
// problem, sample stable heat kernels, and run or sweep the inequality
// verification batteries described by a JSON config (see README).

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "duhamel/runner.hpp"

namespace {

duhamel::RunConfig load(const std::string& config_path, const std::string& preset,
                        const std::string& out_dir, long long seed, int threads) {
  duhamel::RunConfig cfg;
  if (!config_path.empty()) {
    cfg = duhamel::parse_config(config_path);
  } else if (!preset.empty()) {
    cfg.scenario = duhamel::preset_description(preset);
  } else {
    duhamel::fail(duhamel::Errc::config_error, "need --config or --preset");
  }
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  if (seed >= 0) cfg.scenario.seed = static_cast<std::uint64_t>(seed);
  if (threads > 0) cfg.threads = threads;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"degenerate convection-diffusion laboratory"};
  app.require_subcommand(1);

  std::string config_path, preset, out_dir;
  long long seed = -1;
  int threads = 0;
  std::vector<int> sweep_ns;
  app.add_option("--config", config_path, "JSON config path");
  app.add_option("--preset", preset, "scenario preset name");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "seed for randomized test-function sweeps");
  app.add_option("--threads", threads, "worker threads for independent reports");

  auto* c_solve = app.add_subcommand("solve", "solve the scenario pair, write trajectories");
  auto* c_dual = app.add_subcommand("dual", "solve the dual problem, write the certificate");
  auto* c_kernel = app.add_subcommand("kernel", "sample the stable heat kernel");
  auto* c_verify = app.add_subcommand("verify", "run the inequality battery");
  auto* c_sweep = app.add_subcommand("sweep", "verify across resolutions");
  c_sweep->add_option("--n", sweep_ns, "resolutions (ascending)");

  CLI11_PARSE(app, argc, argv);

  const std::string record_dir = out_dir.empty() ? "out" : out_dir;
  try {
    const duhamel::RunConfig cfg = load(config_path, preset, out_dir, seed, threads);
    if (c_solve->parsed()) return duhamel::cmd_solve(cfg);
    if (c_dual->parsed()) return duhamel::cmd_dual(cfg);
    if (c_kernel->parsed()) return duhamel::cmd_kernel(cfg);
    if (c_verify->parsed()) {
      const int rc = duhamel::cmd_verify(cfg);
      std::printf("%s\n", rc == 0 ? "all inequalities hold within tolerance"
                                  : "verification failure (see reports.csv)");
      return rc;
    }
    if (c_sweep->parsed()) return duhamel::cmd_sweep(cfg, sweep_ns);
  } catch (const duhamel::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    const int rc = duhamel::exit_code_for(e);
    duhamel::write_failure_record(record_dir, duhamel::errc_name(e.code()), e.what(), rc);
    return rc;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    duhamel::write_failure_record(record_dir, "Unexpected", e.what(), 3);
    return 3;
  }
  return 2;
}
