#pragma once

#include <string>
#include <vector>

#include "duhamel/config.hpp"

namespace duhamel {

struct RunOutcome {
  std::vector<ContractionReport> reports;
  bool all_pass() const {
    for (const auto& r : reports)
      if (!r.pass) return false;
    return true;
  }
};

/// Execute every inequality the scenario requests (solves the pair, the dual
/// problem when needed, and the randomized test-function sweep).
RunOutcome run_verification(const Scenario& sc, int threads = 1);

/// Subcommand bodies; all write artifacts under cfg.out_dir and return the
/// process exit code (0 pass, 1 verification failure).
int cmd_verify(const RunConfig& cfg);
int cmd_sweep(const RunConfig& cfg, std::vector<int> ns_override = {});
int cmd_solve(const RunConfig& cfg);
int cmd_dual(const RunConfig& cfg);
int cmd_kernel(const RunConfig& cfg);

/// Map an Error onto the CLI exit code: 2 for configuration/usage problems,
/// 3 for numerical failures.
int exit_code_for(const Error& e);

/// Best-effort machine-readable failure record at <out_dir>/failure.json.
void write_failure_record(const std::string& out_dir, const std::string& kind,
                          const std::string& message, int exit_code);

}  // namespace duhamel
