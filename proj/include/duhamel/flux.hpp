#pragma once

#include <vector>

#include "duhamel/errors.hpp"

namespace duhamel {

/// Convective flux f with a certified Lipschitz bound on a data range and an
/// Engquist-Osher monotone numerical flux
///   F(a,b) = f(0) + int_0^a max(f',0) + int_0^b min(f',0).
/// Closed forms for burgers/linear; piecewise-linear tabulation otherwise
/// (tabulated fluxes are normalized so f(0) = 0 and extended with their end
/// slopes).
class FluxSpec {
 public:
  enum class Kind { burgers, linear, tabulated };

  static FluxSpec burgers();
  static FluxSpec linear(double a);
  static FluxSpec tabulated(std::vector<double> u_nodes, std::vector<double> f_values);

  Kind kind() const { return kind_; }
  double wave_speed() const { return a_; }  // linear only

  double operator()(double u) const;
  double lipschitz_on(double lo, double hi) const;
  /// Engquist-Osher flux; nondecreasing in a, nonincreasing in b, F(u,u)=f(u).
  double eo(double a, double b) const;

 private:
  FluxSpec(Kind k, double a) : kind_(k), a_(a) {}
  Kind kind_;
  double a_ = 0.0;
  std::vector<double> u_, f_;
  std::vector<double> pos_, neg_;  // EO cumulative parts at the nodes
  double eval_pos(double u) const;
  double eval_neg(double u) const;
};

/// Nondecreasing diffusion nonlinearity phi with phi(0) = 0.
class PhiSpec {
 public:
  enum class Kind { zero, identity, power, stefan };

  static PhiSpec zero();
  static PhiSpec identity();
  /// phi(u) = |u|^{m-1} u, m >= 1.
  static PhiSpec power(double m);
  /// phi == 0 on the plateau [a,b] (a <= 0 <= b), slope one outside.
  static PhiSpec stefan(double a, double b);

  Kind kind() const { return kind_; }
  double plateau_lo() const { return a_; }
  double plateau_hi() const { return b_; }

  double operator()(double u) const;
  double lipschitz_on(double lo, double hi) const;

 private:
  PhiSpec(Kind k, double a, double b) : kind_(k), a_(a), b_(b) {}
  Kind kind_;
  double a_ = 0.0, b_ = 0.0;  // power exponent in a_ / plateau in (a_, b_)
};

}  // namespace duhamel
