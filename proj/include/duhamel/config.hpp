#pragma once

#include <string>
#include <vector>

#include "duhamel/scenario.hpp"

namespace duhamel {

struct RunConfig {
  ScenarioDescription scenario;
  std::string out_dir = "out";
  int threads = 1;
  std::vector<int> sweep_ns;

  // kernel subcommand parameters
  double kernel_alpha = 2.0;
  double kernel_t = 0.1;
  int kernel_widen = 4;
};

/// Parse and validate a JSON config. Validation reports every violation at
/// once (ConfigError aggregates the list). A config names a preset and may
/// override any of its fields:
///
/// {
///   "preset": "stefan-tempered-headline",
///   "grid": {"x_min": -8, "x_max": 8, "n": 2000},
///   "horizon": 0.5, "split_r": 0.0,
///   "verify_times": [0.5], "balls": [[0.0, 1.0]],
///   "flux": {"kind": "burgers"}, "phi": {"kind": "stefan", "a": -0.1, "b": 0.1},
///   "operator": "nonlocal",
///   "measure": {"kind": "tempered", "alpha": 1, "lambda": 2, "c": 1},
///   "initial": {"base": 0.3, "center": 0, "radius": 0.5, "height": 0.6},
///   "source_u": {"kind": "bump", "amp": 0.3, ...},
///   "dual": {"radius": 0.4, "height": 2.07, "snapshots": 64,
///            "delta": 0.1, "epsilon": 0.1, "exp_rate": 1, "reach": 6},
///   "inequalities": ["thm2.9", "kato"],
///   "seed": 1, "threads": 1, "out": "out",
///   "sweep_ns": [1000, 2000]
/// }
RunConfig parse_config(const std::string& path);

/// As above, from an in-memory JSON string (used by tests).
RunConfig parse_config_text(const std::string& text, const std::string& base_dir = ".");

}  // namespace duhamel
