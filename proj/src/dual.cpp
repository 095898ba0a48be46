#include "duhamel/dual.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <vector>

namespace duhamel {

namespace {
constexpr double kPi = 3.141592653589793238462643383279;

double stable_tail_constant(double alpha) {
  // K(x,t) ~ t * c_alpha |x|^{-1-alpha}; c_alpha matches the generator's
  // Levy density constant.
  return std::tgamma(1.0 + alpha) * std::sin(kPi * alpha / 2.0) / kPi;
}
}  // namespace

double DualSolution::snapshot_spacing() const {
  double m = 0.0;
  for (std::size_t k = 0; k + 1 < times.size(); ++k) m = std::max(m, times[k + 1] - times[k]);
  return m;
}

GridFunction DualSolution::at_time(double t) const {
  if (times.empty()) fail(Errc::bad_argument, "dual solution is empty");
  if (t <= times.front()) return states.front();  // constant initial extension
  if (t > times.back() + 1e-10 * std::max(1.0, times.back()))
    fail(Errc::time_out_of_range, "dual solution queried beyond its horizon");
  if (t >= times.back()) return states.back();
  std::size_t lo = 0, hi = times.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    (times[mid] <= t ? lo : hi) = mid;
  }
  const double w = (t - times[lo]) / (times[hi] - times[lo]);
  const GridFunction& a = states[lo];
  const GridFunction& b = states[hi];
  std::vector<double> v(a.values());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = (1.0 - w) * v[i] + w * b[static_cast<int>(i)];
  return GridFunction(a.grid(), std::move(v), 0.0, 0.0);
}

DualSolution solve_dual(const BumpSpec& bump, const OperatorKind& op, const Grid& grid,
                        double T_tilde, int n_snapshots, double split_r, double safety) {
  if (!op.local() && !op.adjoint)
    fail(Errc::bad_argument, "dual equation runs on the adjoint operator");
  if (!(T_tilde >= 0.0)) fail(Errc::bad_argument, "dual horizon must be nonnegative");
  if (bump.center - bump.radius < grid.x_min || bump.center + bump.radius > grid.x_max)
    fail(Errc::bad_argument, "dual bump support must sit inside the grid");
  if (n_snapshots < 1) n_snapshots = 1;

  const OperatorWeights w = discretize(op, grid, split_r);
  const double h = grid.h;
  const double denom = 2.0 * w.local_coeff / (h * h) + w.total_jump_mass + std::abs(w.drift) / h;
  const double dt_max = denom > 0.0 ? safety / denom : (T_tilde > 0.0 ? T_tilde : 1.0);

  DualSolution sol;
  sol.op = op;
  sol.bump = bump;
  sol.T_tilde = T_tilde;
  sol.dt_used = dt_max;
  sol.split_r = split_r;

  GridFunction phi = GridFunction::sample(grid, [&](double x) { return bump(x); }, 0.0, 0.0);
  sol.times.push_back(0.0);
  sol.states.push_back(phi);
  if (T_tilde == 0.0) return sol;

  for (int s = 1; s <= n_snapshots; ++s) {
    const double t0 = T_tilde * (s - 1) / n_snapshots;
    const double t1 = T_tilde * s / n_snapshots;
    const double seg = t1 - t0;
    const int nsub = std::max(1, static_cast<int>(std::ceil(seg / dt_max - 1e-12)));
    const double dt = seg / nsub;
    for (int j = 0; j < nsub; ++j) {
      const GridFunction a = apply_upwind(w, phi);
      for (int i = 0; i < grid.n; ++i) phi[i] += dt * std::max(a[i], 0.0);
    }
    for (int i = 0; i < grid.n; ++i)
      if (!std::isfinite(phi[i])) fail(Errc::numerical_failure, "dual solution lost finiteness");
    sol.times.push_back(t1);
    sol.states.push_back(phi);
  }
  return sol;
}

// ---------------------------------------------------------------------------

GridFunction heat_kernel(double alpha, double t, const Grid& grid, const HeatKernelOptions& opts,
                         HeatKernelStats* stats) {
  if (!(alpha > 0.0 && alpha <= 2.0)) fail(Errc::bad_argument, "heat kernel: alpha in (0,2]");
  if (!(t > 0.0)) fail(Errc::bad_argument, "heat kernel: t must be positive");
  if (opts.widen_factor < 1) fail(Errc::bad_argument, "heat kernel: widen factor >= 1");
  const double span = grid.x_max - grid.x_min;
  if (std::abs(grid.x_min + grid.x_max) > 1e-9 * span)
    fail(Errc::bad_argument, "heat kernel: grid must be symmetric about 0");

  const int n = grid.n;
  const double h = grid.h;
  const int pad = static_cast<int>(std::ceil(0.5 * n * (opts.widen_factor - 1)));
  const int N = n + 2 * pad;
  const double W = N * h;
  const double R = 0.5 * span;  // window half-width; nearest alias sits at distance >= W - R

  // Tail estimates (known orders: Gaussian for alpha = 2, power otherwise).
  double exterior, alias;
  if (alpha == 2.0) {
    exterior = std::erfc(R / (2.0 * std::sqrt(t)));
    alias = std::exp(-(W - R) * (W - R) / (4.0 * t)) / std::sqrt(4.0 * kPi * t);
  } else {
    const double c = stable_tail_constant(alpha);
    exterior = 2.0 * t * c / (alpha * std::pow(R, alpha));
    alias = 2.0 * t * c / std::pow(W - R, 1.0 + alpha);
  }
  if (alias > opts.alias_tol)
    fail(Errc::domain_too_small, "periodic extension too narrow for the requested kernel fidelity");

  // Inverse transform of the multiplier, phase-shifted onto the cell centers.
  const double x0 = grid.x_min - pad * h + 0.5 * h;
  std::vector<std::complex<double>> in(static_cast<std::size_t>(N)), out(static_cast<std::size_t>(N));
  for (int k = 0; k < N; ++k) {
    const double freq = (k <= N / 2 ? k : k - N) / W;
    const double mult = std::exp(-t * std::pow(std::abs(2.0 * kPi * freq), alpha));
    const double phase = 2.0 * kPi * freq * x0;
    in[static_cast<std::size_t>(k)] =
        std::complex<double>(mult * std::cos(phase), mult * std::sin(phase)) / W;
  }
  // FFTW planning is not thread-safe; execution on a private plan is.
  static std::mutex plan_mutex;
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(plan_mutex);
    plan = fftw_plan_dft_1d(N, reinterpret_cast<fftw_complex*>(in.data()),
                            reinterpret_cast<fftw_complex*>(out.data()), FFTW_BACKWARD,
                            FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(plan_mutex);
    fftw_destroy_plan(plan);
  }

  std::vector<double> full(static_cast<std::size_t>(N));
  for (int j = 0; j < N; ++j) full[static_cast<std::size_t>(j)] = out[static_cast<std::size_t>(j)].real();
  // Exact even symmetry: mirror the upper half onto the lower.
  for (int j = 0; j < N / 2; ++j) full[static_cast<std::size_t>(j)] = full[static_cast<std::size_t>(N - 1 - j)];

  double torus_mass = 0.0, mn = full[0];
  for (double v : full) {
    torus_mass += v;
    mn = std::min(mn, v);
  }
  torus_mass *= h;
  if (mn < -1e-9)
    fail(Errc::spectral_negativity, "kernel ringing exceeds the clamp threshold");
  for (double& v : full) v = std::max(v, 0.0);

  std::vector<double> window(full.begin() + pad, full.begin() + pad + n);
  double window_mass = 0.0;
  for (double v : window) window_mass += v;
  window_mass *= h;

  if (stats) {
    stats->torus_mass = torus_mass;
    stats->window_mass = window_mass;
    stats->exterior_estimate = exterior;
    stats->alias_estimate = alias;
    stats->min_before_clamp = mn;
  }
  return GridFunction(grid, std::move(window), 0.0, 0.0);
}

// ---------------------------------------------------------------------------

ExpBoundReport exp_supersolution_check(const DualSolution& sol, const SupersolutionConstants& c) {
  ExpBoundReport rep;
  rep.consts = c;
  const Grid& g = sol.states.front().grid();
  double worst = -1e300;
  for (std::size_t k = 0; k < sol.times.size(); ++k) {
    const double growth = c.C * std::exp(c.K * sol.times[k]);
    const GridFunction& phi = sol.states[k];
    for (int i = 0; i < g.n; ++i) {
      const double wv = growth * std::exp(-c.k * std::abs(g.center(i) - sol.bump.center));
      worst = std::max(worst, phi[i] - wv);
    }
  }
  rep.max_violation = worst;
  rep.C_spec = 4.0 * c.C * std::exp(c.K * sol.T_tilde) * (1.0 + c.k) * (1.0 + c.k) * (1.0 + c.k) *
               std::max(sol.T_tilde, 1.0);
  rep.tolerance = rep.C_spec * (g.h + sol.dt_used);
  rep.pass = rep.max_violation <= rep.tolerance;
  rep.formula = "tol = C_spec (h + dt), C_spec = 4 C e^{K Ttilde} (1+k)^3 max(Ttilde, 1)";
  return rep;
}

GridFunction k_delta(const DualSolution& sol, double tau, double L_phi, double t,
                     const MollifierSpec& moll) {
  if (!(t >= 0.0 && t <= tau + 1e-12)) fail(Errc::time_out_of_range, "k_delta needs 0 <= t <= tau");
  if (L_phi * tau > sol.T_tilde + 1e-12)
    fail(Errc::time_out_of_range, "k_delta needs L_phi tau <= dual horizon");
  const double delta = moll.delta;
  const double theta = L_phi * (tau - t);
  const Grid& g = sol.states.front().grid();

  // Space part of rho_delta on the kernel lattice (normalized).
  GridFunction wspace = discrete_space_mollifier(g.h, delta);

  // Backward-in-time profile: theta_prof(s) on (0, delta^2), midpoint rule,
  // normalized to unit total weight.
  const int Q = 32;
  std::vector<double> wq(Q);
  double wsum = 0.0;
  for (int q = 0; q < Q; ++q) {
    const double frac = (q + 0.5) / Q;
    wq[static_cast<std::size_t>(q)] = std_mollifier(2.0 * frac - 1.0);
    wsum += wq[static_cast<std::size_t>(q)];
  }
  for (double& v : wq) v /= wsum;

  std::vector<double> acc(static_cast<std::size_t>(g.n), 0.0);
  for (int q = 0; q < Q; ++q) {
    const double s = (q + 0.5) / Q * delta * delta;
    const GridFunction slice = sol.at_time(theta - s);  // <= 0 reads the initial bump
    const GridFunction sm = convolve(slice, wspace);
    for (int i = 0; i < g.n; ++i) acc[static_cast<std::size_t>(i)] += wq[static_cast<std::size_t>(q)] * sm[i];
  }
  return GridFunction(g, std::move(acc), 0.0, 0.0);
}

GammaTestFunction gamma_test_function(const std::vector<double>& times,
                                      const std::vector<GridFunction>& kd,
                                      const std::vector<GridFunction>& gamma, double L_f,
                                      double L_phi, const OperatorWeights& adjoint_weights,
                                      double delta) {
  if (times.size() != kd.size() || times.size() != gamma.size() || times.empty())
    fail(Errc::snapshot_mismatch, "gamma test function needs matching snapshot lists");

  GammaTestFunction out;
  out.times = times;
  out.snapshots.reserve(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) out.snapshots.push_back(convolve(gamma[k], kd[k]));

  const Grid& g = out.snapshots.front().grid();
  const double h = g.h;
  double worst = -1e300;
  double w1 = 0.0, w2 = 0.0, opb = 0.0;
  for (std::size_t k = 0; k + 1 < times.size(); ++k) {
    const double dt = times[k + 1] - times[k];
    const GridFunction& G = out.snapshots[k];
    const GridFunction AG = apply(adjoint_weights, G);
    for (int i = 0; i < g.n; ++i) {
      const double dg = (out.snapshots[k + 1][i] - G[i]) / dt;
      const double grad = std::max({(G[i] - G.at_index(i - 1)) / h, (G[i] - G.at_index(i + 1)) / h, 0.0});
      const double r = dg + L_f * grad + L_phi * std::max(AG[i], 0.0);
      worst = std::max(worst, r);
      w1 = std::max({w1, std::abs(grad), std::abs(dg)});
      w2 = std::max(w2, std::abs(G.at_index(i + 1) - 2.0 * G[i] + G.at_index(i - 1)) / (h * h));
      opb = std::max(opb, std::abs(AG[i]));
    }
  }
  const double max_dt = [&] {
    double m = 0.0;
    for (std::size_t k = 0; k + 1 < times.size(); ++k) m = std::max(m, times[k + 1] - times[k]);
    return m;
  }();
  out.residual_max = worst;
  const double C = 4.0 * ((1.0 + L_f) * (1.0 + w1) + L_phi * (1.0 + opb) + w2);
  out.residual_tol = C * (h + max_dt + delta);
  out.formula = "tol = 4((1+L_f)(1+W1) + L_phi(1+|A*G|) + W2)(h + dt + delta)";
  return out;
}

}  // namespace duhamel
