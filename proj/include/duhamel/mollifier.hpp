#pragma once

#include <vector>

#include "duhamel/grid.hpp"

namespace duhamel {

/// Compactly supported even mollifier profile on [-1,1] with unit mass:
/// w(s) = (315/256)(1-s^2)^4. Polynomial rather than the classical
/// exponential bump: the closed-form antiderivative keeps one-sided residual
/// checks exact at machine precision, and C^4 regularity is enough for every
/// first/second-difference quadrature in this project.
double std_mollifier(double s);

/// int_{-1}^{s} std_mollifier, clamped to [0,1].
double std_mollifier_antideriv(double s);

/// Unnormalized bump profile (1-s^2)^4 (peak 1) and its integral over [-1,1].
double poly_bump(double s);
inline constexpr double kPolyBumpMass = 256.0 / 315.0;
/// int_{-1}^{s} poly_bump.
double poly_bump_antideriv(double s);

/// Smooth compactly supported initial bump
///   height * exp(1 - 1/(1 - ((x-center)/radius)^2)) inside the ball,
/// 0 outside; values in [0, height].
struct BumpSpec {
  double center = 0.0;
  double radius = 1.0;
  double height = 1.0;

  double operator()(double x) const;
  double mass() const;       // closed form: height * radius * integral of the profile
  double sup() const { return height; }
  double lipschitz() const;  // sup |d/dx|
};

/// Mollification scales: epsilon in space (w_eps), delta for the space-time
/// kernel rho_delta(y,s) = delta^{-3} w(y/delta) theta(s/delta^2) with theta
/// a unit-mass profile supported in (0,1) (the mollification looks backward
/// in time).
struct MollifierSpec {
  double epsilon = 0.1;
  double delta = 0.1;
};

/// [1_(-inf,R] * w_eps](r): 1 below R-eps, 0 above R+eps, smooth monotone
/// transition in between. Exact closed form.
double smoothed_indicator(double r, double R, double eps);

/// The shrinking smoothed cutoff
///   gamma(x,t) = [1_(-inf,R] * w_eps](sqrt(tilde_delta^2 + (x-x0)^2) + L_f t),
/// equal to 1 for |x-x0| + L_f t <= R - eps - tilde_delta and 0 beyond R + eps.
double gamma_value(double x, double t, double x0, double R, double L_f, double eps,
                   double tilde_delta);
GridFunction gamma_cutoff(double x0, double R, double L_f, double eps, double tilde_delta,
                          double t, const Grid& grid);

/// Max over grid points of the one-sided transport residual
///   (gamma(x,t+dt)-gamma(x,t))/dt + L_f max(D^- gamma, -D^+ gamma, 0)
/// with the matched step dt = h / L_f. Nonpositive up to rounding.
double gamma_transport_residual(double x0, double R, double L_f, double eps, double tilde_delta,
                                double t, const Grid& grid);

/// Symmetric kernel-form grid: centers at 0, +-h, ..., +-Mh with M =
/// ceil(reach/h). Convolutions against functions sampled on any grid of the
/// same spacing then run exactly on the index lattice.
Grid kernel_grid(double h, double reach);

/// w_eps sampled on a kernel-form grid and normalized to unit discrete mass.
GridFunction discrete_space_mollifier(double h, double eps);

}  // namespace duhamel
