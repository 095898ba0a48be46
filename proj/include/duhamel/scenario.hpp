#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "duhamel/verify.hpp"

namespace duhamel {

struct DualParams {
  BumpSpec bump{0.0, 0.4, 1.0 / (0.4 * 1.2069003224378762)};  // unit mass
  int n_snapshots = 64;
  double delta = 0.1;
  double epsilon = 0.1;
  double exp_rate = 1.0;  // tempering rate certified for the barrier
  double reach = 6.0;     // half-width of the dual grid
};

struct SourceDescription {
  std::string kind = "zero";  // zero | constant | bump
  double amp = 0.0;
  double xc = 0.0, xw = 1.0;
  double tc = 0.0, tw = 1.0;
};

struct MeasureDescription {
  std::string kind = "tempered";  // stable | stable-fractional | tempered | atomic | table
  double alpha = 1.0;
  double lambda = 2.0;
  double c = 1.0;
  std::vector<Atom> atoms;
  std::vector<double> nodes, densities;  // table
  double decay_rate = 0.0;
};

/// Plain-data description of a verification instance; presets provide
/// defaults, configs override fields, `build_scenario` turns it into
/// concrete objects.
struct ScenarioDescription {
  std::string name = "custom";
  double x_min = -8.0, x_max = 8.0;
  int n = 2000;
  double horizon = 0.5;
  double split_r = 0.0;  // 0 -> max(h, sqrt(h))
  std::vector<double> verify_times{0.5};
  std::vector<Ball> balls{{0.0, 1.0}};
  DualParams dual;
  double alpha = 2.0;  // kernel exponent for the linear Duhamel bound
  std::vector<std::string> inequalities{"thm2.7"};
  int n_test_functions = 20;
  std::uint64_t seed = 1;

  std::string flux_kind = "burgers";  // burgers | linear
  double flux_a = 1.0;
  std::string phi_kind = "zero";  // zero | identity | power | stefan
  double phi_m = 2.0;             // power exponent
  double phi_a = -0.1, phi_b = 0.1;
  std::string op_kind = "laplacian";  // laplacian | nonlocal
  MeasureDescription measure;

  double base = 0.2;                 // constant state of the pair
  BumpSpec data_bump{0.0, 0.5, 0.6};  // perturbation carried by u
  SourceDescription source_u, source_v;
};

struct Scenario {
  std::string name;
  ScenarioPair pair;
  Grid grid;
  double split_r = 0.0;
  std::vector<double> verify_times;
  std::vector<Ball> balls;
  DualParams dual;
  double alpha = 2.0;
  std::vector<std::string> inequalities;
  int n_test_functions = 20;
  std::uint64_t seed = 1;

  double resolved_split_r() const { return split_r > 0.0 ? split_r : default_split_r(grid.h); }
};

std::vector<std::string> scenario_presets();

/// Preset defaults. Presets cover the verification regimes: pure hyperbolic
/// ("finite-speed-burgers", "finite-speed-sourced"), linear local/fractional
/// diffusion ("linear-duhamel-local", "linear-duhamel-cauchy"), and the
/// strongly degenerate local/nonlocal cases ("stefan-local-headline",
/// "stefan-tempered-headline").
ScenarioDescription preset_description(const std::string& preset);

LevyMeasure build_measure(const MeasureDescription& d);
SourceSpec build_source(const SourceDescription& d);

Scenario build_scenario(const ScenarioDescription& desc, int n_override = 0);

inline Scenario make_scenario(const std::string& preset, int n) {
  return build_scenario(preset_description(preset), n);
}

/// Dual solution for the scenario (adjoint operator, kernel-form grid).
DualSolution scenario_dual(const Scenario& sc);

/// A bump-over-constant pair on the given grid: v = base everywhere,
/// u = base + bump. The workhorse of the non-integrable-data scenarios.
ScenarioPair bump_over_constant_pair(const Grid& grid, const FluxSpec& flux, const PhiSpec& phi,
                                     const OperatorKind& op, double base, const BumpSpec& bump,
                                     double horizon, const SourceSpec& gu = SourceSpec::zero(),
                                     const SourceSpec& gv = SourceSpec::zero());

}  // namespace duhamel
