#include "duhamel/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace duhamel {

namespace {

// QUADPACK dqk15 nodes/weights, positive half of [-1,1].
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
  double a, b;
  double value;
  double error;
};

Panel kronrod15(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  double fv[15];
  for (int j = 0; j < 7; ++j) {
    fv[j] = f(center - half * kXgk[j]);
    fv[14 - j] = f(center + half * kXgk[j]);
  }
  fv[7] = f(center);

  double result_gauss = 0.0;
  double result_kronrod = 0.0;
  for (int j = 0; j < 7; ++j) {
    result_kronrod += kWgk[j] * (fv[j] + fv[14 - j]);
    if (j % 2 == 1) result_gauss += kWg[j / 2] * (fv[j] + fv[14 - j]);
  }
  result_kronrod += kWgk[7] * fv[7];
  result_gauss += kWg[3] * fv[7];

  Panel p;
  p.a = a;
  p.b = b;
  p.value = result_kronrod * half;
  p.error = std::abs((result_kronrod - result_gauss) * half);
  return p;
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double rel_tol, double abs_tol, int max_panels) {
  QuadratureResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }

  std::vector<Panel> panels;
  panels.push_back(kronrod15(f, a, b));

  auto totals = [&panels]() {
    double v = 0.0, e = 0.0;
    for (const Panel& p : panels) {
      v += p.value;
      e += p.error;
    }
    return std::pair<double, double>(v, e);
  };

  for (;;) {
    auto [value, error] = totals();
    const double target = std::max(rel_tol * std::abs(value), abs_tol);
    if (error <= target || static_cast<int>(panels.size()) >= max_panels) {
      out.value = value;
      out.abs_error = error;
      out.panels = static_cast<int>(panels.size());
      out.converged = error <= target;
      return out;
    }
    // Bisect the panel with the largest error estimate. Ties resolve to the
    // lowest index, which keeps the refinement deterministic.
    std::size_t worst = 0;
    for (std::size_t i = 1; i < panels.size(); ++i)
      if (panels[i].error > panels[worst].error) worst = i;
    Panel p = panels[worst];
    const double mid = 0.5 * (p.a + p.b);
    if (mid <= p.a || mid >= p.b) {
      // Interval is at rounding resolution; accept the estimate as is.
      out.value = value;
      out.abs_error = error;
      out.panels = static_cast<int>(panels.size());
      out.converged = true;
      return out;
    }
    panels[worst] = kronrod15(f, p.a, mid);
    panels.push_back(kronrod15(f, mid, p.b));
  }
}

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol,
                 double abs_tol) {
  return integrate_adaptive(f, a, b, rel_tol, abs_tol).value;
}

}  // namespace duhamel
