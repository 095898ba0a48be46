#pragma once

#include <functional>

namespace duhamel {

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;  // estimated
  int panels = 0;
  bool converged = false;
};

/// Adaptive Gauss-Kronrod (G7/K15) quadrature on a finite interval.
/// Worst-panel bisection until the summed error estimate meets
/// max(rel_tol*|value|, abs_tol). Node evaluation never touches the
/// endpoints, so integrable endpoint singularities are admissible.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double rel_tol = 1e-11, double abs_tol = 0.0,
                                    int max_panels = 4000);

/// Convenience wrapper returning just the value.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-11, double abs_tol = 0.0);

}  // namespace duhamel
