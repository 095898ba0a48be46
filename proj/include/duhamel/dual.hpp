#pragma once

#include <string>
#include <vector>

#include "duhamel/mollifier.hpp"
#include "duhamel/operator.hpp"
#include "duhamel/solver.hpp"

namespace duhamel {

/// Discrete solution of d(Phi)/dt = (L* Phi)^+, nonnegative and pointwise
/// nondecreasing in time, with zero far fields.
struct DualSolution {
  std::vector<double> times;
  std::vector<GridFunction> states;
  OperatorKind op = OperatorKind::laplacian();  // the adjoint operator used
  BumpSpec bump;
  double T_tilde = 0.0;
  double dt_used = 0.0;
  double split_r = 0.0;

  double snapshot_spacing() const;
  /// Linear interpolation between snapshots; constant initial extension for
  /// t <= 0. Times beyond the last snapshot are out of range.
  GridFunction at_time(double t) const;
};

/// Explicit monotone scheme Phi <- Phi + dt max(A Phi, 0) (drift upwinded)
/// under the diffusion-only step bound, snapshots at n_snapshots+1 evenly
/// spaced times. The operator must carry the adjoint flag.
DualSolution solve_dual(const BumpSpec& bump, const OperatorKind& op, const Grid& grid,
                        double T_tilde, int n_snapshots, double split_r, double safety = 0.9);

struct HeatKernelOptions {
  int widen_factor = 4;      // periodic extension factor for the transform
  double alias_tol = 1e-4;   // pointwise aliasing bound; DomainTooSmall beyond
};

struct HeatKernelStats {
  double torus_mass = 0.0;       // discrete mass over the full periodic domain
  double window_mass = 0.0;      // mass restricted to the requested grid
  double exterior_estimate = 0.0;  // analytic tail mass outside the window
  double alias_estimate = 0.0;     // pointwise periodization error bound
  double min_before_clamp = 0.0;
};

/// Fundamental solution of the alpha-stable evolution, sampled by an inverse
/// discrete transform of exp(-t |2 pi xi|^alpha) on a widened periodic
/// domain and restricted to the (0-symmetric) requested grid. Even by
/// construction; the transform conserves unit mass exactly on the torus.
/// Negative ringing above -1e-9 is clamped, worse raises SpectralNegativity.
GridFunction heat_kernel(double alpha, double t, const Grid& grid,
                         const HeatKernelOptions& opts = {}, HeatKernelStats* stats = nullptr);

struct ExpBoundReport {
  SupersolutionConstants consts;
  double max_violation = 0.0;  // max over snapshots/cells of Phi - C e^{Kt} e^{-k|x-c|}
  double tolerance = 0.0;
  double C_spec = 0.0;
  std::string formula;
  bool pass = false;
};

/// Certify Phi(x,t) <= C e^{Kt} e^{-k|x - center|} within a first-order
/// consistency budget.
ExpBoundReport exp_supersolution_check(const DualSolution& sol, const SupersolutionConstants& c);

/// K_delta(x,t) = [Phi * rho_delta](x, L_phi (tau - t)): space-time
/// mollification of Phi at the reversed, phi-rescaled time. The time profile
/// of rho looks backward over (0, delta^2); Phi is extended by its initial
/// datum for negative times.
GridFunction k_delta(const DualSolution& sol, double tau, double L_phi, double t,
                     const MollifierSpec& moll);

struct GammaTestFunction {
  std::vector<double> times;
  std::vector<GridFunction> snapshots;  // Gamma(., t_k)
  double residual_max = 0.0;            // max of dGamma/dt + L_f|DGamma| + L_phi (L* Gamma)^+
  double residual_tol = 0.0;
  std::string formula;
};

/// Gamma(., t) = K_delta(., t) * gamma(., t) with the discrete subsolution
/// residual reported against an O(h + dt + delta) budget.
GammaTestFunction gamma_test_function(const std::vector<double>& times,
                                      const std::vector<GridFunction>& kd,
                                      const std::vector<GridFunction>& gamma, double L_f,
                                      double L_phi, const OperatorWeights& adjoint_weights,
                                      double delta);

}  // namespace duhamel
