#include "duhamel/mollifier.hpp"

#include <algorithm>
#include <cmath>

namespace duhamel {

namespace {
constexpr double kMollNorm = 315.0 / 256.0;
// integral of exp(1 - 1/(1-s^2)) over [-1,1] and sup of its derivative
constexpr double kExpBumpMass = 1.2069003224378762;
constexpr double kExpBumpMaxSlope = 2.1703570857353043;
}  // namespace

double poly_bump(double s) {
  if (s <= -1.0 || s >= 1.0) return 0.0;
  const double q = 1.0 - s * s;
  const double q2 = q * q;
  return q2 * q2;
}

double poly_bump_antideriv(double s) {
  if (s <= -1.0) return 0.0;
  if (s >= 1.0) return kPolyBumpMass;
  const double s2 = s * s;
  const double odd =
      s * (1.0 + s2 * (-4.0 / 3.0 + s2 * (6.0 / 5.0 + s2 * (-4.0 / 7.0 + s2 * (1.0 / 9.0)))));
  return odd + 0.5 * kPolyBumpMass;
}

double std_mollifier(double s) { return kMollNorm * poly_bump(s); }

double std_mollifier_antideriv(double s) {
  const double v = kMollNorm * poly_bump_antideriv(s);
  return std::clamp(v, 0.0, 1.0);
}

double BumpSpec::operator()(double x) const {
  const double s = (x - center) / radius;
  if (s <= -1.0 || s >= 1.0) return 0.0;
  return height * std::exp(1.0 - 1.0 / (1.0 - s * s));
}

double BumpSpec::mass() const { return height * radius * kExpBumpMass; }

double BumpSpec::lipschitz() const { return height / radius * kExpBumpMaxSlope; }

double smoothed_indicator(double r, double R, double eps) {
  return 1.0 - std_mollifier_antideriv((r - R) / eps);
}

double gamma_value(double x, double t, double x0, double R, double L_f, double eps,
                   double tilde_delta) {
  const double dx = x - x0;
  const double rho = std::sqrt(tilde_delta * tilde_delta + dx * dx);
  return smoothed_indicator(rho + L_f * t, R, eps);
}

GridFunction gamma_cutoff(double x0, double R, double L_f, double eps, double tilde_delta,
                          double t, const Grid& grid) {
  if (!(eps > 0.0 && eps < 1.0)) fail(Errc::bad_argument, "gamma cutoff: eps must lie in (0,1)");
  if (!(R > 0.0)) fail(Errc::bad_argument, "gamma cutoff: R must be positive");
  return GridFunction::sample(
      grid, [&](double x) { return gamma_value(x, t, x0, R, L_f, eps, tilde_delta); }, 0.0, 0.0);
}

double gamma_transport_residual(double x0, double R, double L_f, double eps, double tilde_delta,
                                double t, const Grid& grid) {
  if (L_f <= 0.0) return 0.0;  // gamma is static in time and L_f |D gamma| = 0
  const double h = grid.h;
  const double dt = h / L_f;
  auto g = [&](double x, double tt) { return gamma_value(x, tt, x0, R, L_f, eps, tilde_delta); };
  double worst = -1e300;
  for (int i = 0; i < grid.n; ++i) {
    const double x = grid.center(i);
    const double gl = g(x - h, t), gc = g(x, t), gr = g(x + h, t);
    const double grad = std::max({(gc - gl) / h, (gc - gr) / h, 0.0});
    const double dtg = (g(x, t + dt) - gc) / dt;
    worst = std::max(worst, dtg + L_f * grad);
  }
  return worst;
}

Grid kernel_grid(double h, double reach) {
  int M = static_cast<int>(std::ceil(reach / h));
  M = std::max(M, 1);
  return Grid::make(-(M + 0.5) * h, (M + 0.5) * h, 2 * M + 1);
}

GridFunction discrete_space_mollifier(double h, double eps) {
  if (!(eps > 0.0)) fail(Errc::bad_argument, "mollifier: eps must be positive");
  Grid g = kernel_grid(h, eps + h);
  GridFunction w = GridFunction::sample(
      g, [&](double x) { return std_mollifier(x / eps) / eps; }, 0.0, 0.0);
  double mass = 0.0;
  for (int i = 0; i < g.n; ++i) mass += w[i];
  mass *= h;
  if (!(mass > 0.0)) fail(Errc::bad_argument, "mollifier: unresolved on this grid");
  for (int i = 0; i < g.n; ++i) w[i] /= mass;
  return w;
}

}  // namespace duhamel
