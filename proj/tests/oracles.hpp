#pragma once

// Test-side oracles, kept independent of the library's integration and
// discretization paths: adaptive Simpson quadrature, closed-form kernels,
// and a direct-summation DFT for spectral checks.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace oracle {

inline double simpson_panel(const std::function<double(double)>& f, double a, double b) {
  return (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
}

inline double simpson_rec(const std::function<double(double)>& f, double a, double b, double whole,
                          double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double left = simpson_panel(f, a, m);
  const double right = simpson_panel(f, m, b);
  const double diff = left + right - whole;
  if (std::abs(diff) < 15.0 * tol || depth > 60) return left + right + diff / 15.0;
  return simpson_rec(f, a, m, left, 0.5 * tol, depth + 1) +
         simpson_rec(f, m, b, right, 0.5 * tol, depth + 1);
}

/// Adaptive Simpson on [a,b].
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12) {
  if (a == b) return 0.0;
  return simpson_rec(f, a, b, simpson_panel(f, a, b), tol, 0);
}

/// Adaptive Simpson toward an integrable endpoint singularity at a: dyadic
/// panels approaching a, with the remaining geometric tail completed from
/// the ratio of the last two panels (exact for power-law singularities).
inline double integrate_singular_left(const std::function<double(double)>& f, double a, double b,
                                      double tol = 1e-12) {
  double total = 0.0;
  double hi = b;
  double width = (b - a);
  double prev_panel = 0.0;
  double panel = 0.0;
  for (int k = 0; k < 400 && width > 1e-300; ++k) {
    width *= 0.5;
    const double lo = a + width;
    prev_panel = panel;
    panel = integrate(f, lo, hi, tol * 0.01);
    total += panel;
    hi = lo;
    if (std::abs(panel) < tol * 1e-4 && k > 2) break;
    if (k > 4 && prev_panel != 0.0) {
      const double r = panel / prev_panel;
      if (r > 0.0 && r < 0.95 && std::abs(panel) * r / (1.0 - r) < tol * 1e-3) {
        total += panel * r / (1.0 - r);
        return total;
      }
    }
  }
  if (prev_panel != 0.0 && panel != 0.0) {
    const double r = panel / prev_panel;
    if (r > 0.0 && r < 0.99) total += panel * r / (1.0 - r);
  }
  return total;
}

/// Gauss kernel (alpha = 2 fundamental solution).
inline double gauss_kernel(double x, double t) {
  return std::exp(-x * x / (4.0 * t)) / std::sqrt(4.0 * M_PI * t);
}

/// Poisson kernel (alpha = 1 fundamental solution).
inline double poisson_kernel(double x, double t) { return t / (M_PI * (t * t + x * x)); }

/// Heat semigroup applied to exp(-x^2): closed form.
inline double gauss_evolved(double x, double t) {
  const double s = 1.0 + 4.0 * t;
  return std::exp(-x * x / s) / std::sqrt(s);
}

/// Direct O(N^2) periodic spectral application of the Fourier multiplier
/// -|2 pi xi|^alpha to samples f on a uniform grid of spacing h (periodic
/// extension of the sampled window).
inline std::vector<double> spectral_fractional_laplacian(const std::vector<double>& f, double h,
                                                         double alpha) {
  const std::size_t n = f.size();
  const double W = n * h;
  std::vector<std::complex<double>> coef(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double ph = -2.0 * M_PI * static_cast<double>(k * j % n) / static_cast<double>(n);
      s += f[j] * std::complex<double>(std::cos(ph), std::sin(ph));
    }
    coef[k] = s;
  }
  std::vector<double> out(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    std::complex<double> s = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double freq = (k <= n / 2 ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(n)) / W;
      const double mult = -std::pow(std::abs(2.0 * M_PI * freq), alpha);
      const double ph = 2.0 * M_PI * static_cast<double>(k * j % n) / static_cast<double>(n);
      s += mult * coef[k] * std::complex<double>(std::cos(ph), std::sin(ph));
    }
    out[j] = s.real() / static_cast<double>(n);
  }
  return out;
}

}  // namespace oracle
