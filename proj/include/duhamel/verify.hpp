#pragma once

#include <optional>
#include <string>
#include <vector>

#include "duhamel/dual.hpp"
#include "duhamel/solver.hpp"

namespace duhamel {

/// One evaluated inequality instance: both sides, the margin rhs - lhs, and
/// the printed first-order tolerance budget. pass <=> margin >= -tolerance.
struct ContractionReport {
  std::string inequality_id;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  double tolerance = 0.0;
  int n = 0;
  double h = 0.0;
  double dt = 0.0;
  double x0 = 0.0;
  double ball_radius = 0.0;
  double t = 0.0;
  bool pass = false;
  std::string tolerance_formula;
  /// Secondary quantity where an item defines one (e.g. the simplified
  /// global BV bound, or a measured residual maximum).
  double extra = 0.0;

  void finalize() {
    margin = rhs - lhs;
    pass = margin >= -tolerance;
  }
};

/// Two problems sharing flux, nonlinearity and operator; data and sources
/// may differ.
struct ScenarioPair {
  ProblemSpec u;
  ProblemSpec v;
  std::string relationship;
};

struct PairTrajectories {
  Trajectory u;
  Trajectory v;
};

/// Solve the pair with one shared time step and shared snapshots.
PairTrajectories solve_scenario(const ScenarioPair& pair, double split_r,
                                std::vector<double> snapshot_times, double safety = 0.9);

/// Lipschitz constants on the union of the two certified data ranges.
double pair_lipschitz_flux(const ScenarioPair& pair);
double pair_lipschitz_phi(const ScenarioPair& pair);

/// Hyperbolic finite-speed contraction (phi = 0):
///   int_{B(x0,M)} (u-v)^+(t) <= int_{B(x0,M+L_f t)} (u0-v0)^+
///     + int_0^t int_{B(x0,M+L_f(t-s))} (g-h)^+.
ContractionReport verify_finite_speed(const ScenarioPair& pair, const PairTrajectories& trajs,
                                      double x0, double ball_radius, double t);

/// Linear Duhamel contraction (phi = id, fractional/local Laplacian): the
/// finite-speed bound with the initial and source gaps smoothed by the
/// alpha-stable kernel.
ContractionReport verify_duhamel_linear(const ScenarioPair& pair, const PairTrajectories& trajs,
                                        double alpha, double x0, double ball_radius, double t,
                                        const HeatKernelOptions& kopts = {});

/// Non-linear partial Duhamel contraction: gaps smoothed by the reflected
/// dual solution at phi-rescaled times, balls enlarged by 1:
///   int_{B(x0,M)} (u-v)^+(t) <= int_{B(x0,M+1+L_f t)} Phi(-.,L_phi t)*(u0-v0)^+ + ...
/// Needs a bump of unit mass or more supported in a ball of radius < 1, and
/// a measure with some finite positive exponential moment.
ContractionReport verify_duhamel_nonlinear(const ScenarioPair& pair, const PairTrajectories& trajs,
                                           const DualSolution& dual, double x0, double ball_radius,
                                           double t);

/// Consequences a)-e):
///  a) two-sided L1 contraction (absolute values),
///  b) L1 bound against the zero solution,
///  c) comparison principle (exact ordering),
///  d) maximum principle (exact interval bounds),
///  e) BV bound via shifted-solution quotients (shifts h, 2h, 4h); `extra`
///     carries the simplified bound ||Phi(.,L_phi t)||_1 |u0|_BV.
ContractionReport verify_corollary_a(const ScenarioPair& pair, const PairTrajectories& trajs,
                                     const DualSolution& dual, double x0, double ball_radius,
                                     double t);
ContractionReport verify_corollary_b(const ProblemSpec& prob, const Trajectory& traj,
                                     const DualSolution& dual, double x0, double ball_radius,
                                     double t);
ContractionReport verify_corollary_c(const ScenarioPair& pair, const PairTrajectories& trajs);
ContractionReport verify_corollary_d(const ProblemSpec& prob, const Trajectory& traj);
ContractionReport verify_corollary_e(const ProblemSpec& prob, const Trajectory& traj,
                                     const DualSolution& dual, double x0, double ball_radius,
                                     double t);

/// Integrated Kato inequality against a nonnegative space-time test function:
///   iint (u-v)^+ psi_t + sgn(u-v)^+[f(u)-f(v)] psi_x
///        + (phi(u)-phi(v))^+ L*psi + (g-h)^+ psi  >= -tolerance.
ContractionReport kato_residual(const ScenarioPair& pair, const PairTrajectories& trajs,
                                const SpaceTimeTestFn& psi);

/// The time-endpoint inequality with the constructed test function
/// Gamma = K_delta * gamma (the internal step the partial Duhamel bound
/// follows from):
///   int (u-v)^+(tau) Gamma(tau) <= int (u0-v0)^+ Gamma(0) + iint (g-h)^+ Gamma.
ContractionReport reduced_dual_check(const ScenarioPair& pair, const PairTrajectories& trajs,
                                     const DualSolution& dual, const MollifierSpec& moll,
                                     double tau, double x0, double ball_radius);

}  // namespace duhamel
