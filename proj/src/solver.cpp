#include "duhamel/solver.hpp"

#include <algorithm>
#include <cmath>

namespace duhamel {

namespace {

double sgn_plus(double x) { return x > 0.0 ? 1.0 : 0.0; }

std::vector<double> normalize_targets(std::vector<double> ts, double horizon) {
  ts.push_back(0.0);
  ts.push_back(horizon);
  std::sort(ts.begin(), ts.end());
  std::vector<double> out;
  for (double t : ts) {
    if (t < -1e-12 || t > horizon + 1e-12)
      fail(Errc::time_out_of_range, "snapshot time outside [0, horizon]");
    t = std::clamp(t, 0.0, horizon);
    if (out.empty() || t - out.back() > 1e-12 * std::max(1.0, horizon)) out.push_back(t);
  }
  return out;
}

}  // namespace

CflInfo cfl_dt(const ProblemSpec& prob, const OperatorWeights& w, double h, double safety) {
  if (!(safety > 0.0 && safety <= 1.0)) fail(Errc::bad_argument, "cfl: safety must lie in (0,1]");
  CflInfo info;
  info.safety = safety;
  info.range_lo = prob.range_lo();
  info.range_hi = prob.range_hi();
  info.L_f = prob.flux.lipschitz_on(info.range_lo, info.range_hi);
  info.L_phi = prob.phi.lipschitz_on(info.range_lo, info.range_hi);
  info.denom = 2.0 * info.L_f / h +
               info.L_phi * (2.0 * w.local_coeff / (h * h) + w.total_jump_mass + std::abs(w.drift) / h);
  if (info.denom == 0.0) {
    info.degenerate = true;
    info.dt = prob.horizon > 0.0 ? prob.horizon : 1.0;
  } else {
    info.dt = safety / info.denom;
  }
  return info;
}

GridFunction step(const GridFunction& u, double t, double dt, const ProblemSpec& prob,
                  const OperatorWeights& w, const CflInfo* cfl) {
  if (cfl && dt > cfl->dt * (1.0 + 1e-9))
    fail(Errc::cfl_violation, "time step exceeds the monotonicity bound");
  const Grid& g = u.grid();
  const int n = g.n;
  const double h = g.h;
  const double lam = dt / h;

  std::vector<double> out(n);
  const bool diffusive = prob.phi.kind() != PhiSpec::Kind::zero;
  GridFunction lphi;
  if (diffusive) {
    const GridFunction phi_u = map_values(u, [&](double v) { return prob.phi(v); });
    lphi = apply_upwind(w, phi_u);
  }

  // Face fluxes F_{i-1/2} = F(u_{i-1}, u_i), i = 0..n.
  std::vector<double> face(n + 1);
  for (int i = 0; i <= n; ++i) face[i] = prob.flux.eo(u.at_index(i - 1), u.at_index(i));

  const bool sourced = !prob.source.trivial();
  for (int i = 0; i < n; ++i) {
    double v = u[i] - lam * (face[i + 1] - face[i]);
    if (diffusive) v += dt * lphi[i];
    if (sourced) v += dt * prob.source(g.center(i), t);
    out[i] = v;
  }
  double fl = u.far_left();
  double fr = u.far_right();
  if (sourced) {
    fl += dt * prob.source(g.x_min, t);
    fr += dt * prob.source(g.x_max, t);
  }
  return GridFunction(g, std::move(out), fl, fr);
}

const GridFunction& Trajectory::at_time(double t) const { return states[index_of_time(t)]; }

std::size_t Trajectory::index_of_time(double t) const {
  for (std::size_t k = 0; k < times.size(); ++k)
    if (std::abs(times[k] - t) <= 1e-10 * std::max(1.0, std::abs(t))) return k;
  fail(Errc::time_out_of_range, "time is not a stored snapshot");
}

namespace {

Trajectory march(const ProblemSpec& prob, const OperatorWeights& weights, const CflInfo& cfl,
                 double split_r, const std::vector<double>& targets) {
  Trajectory traj;
  traj.weights = weights;
  traj.cfl = cfl;
  traj.dt_used = cfl.dt;
  traj.split_r = split_r;

  GridFunction state = prob.initial;
  traj.times.push_back(0.0);
  traj.states.push_back(state);
  for (std::size_t k = 1; k < targets.size(); ++k) {
    const double t0 = targets[k - 1];
    const double seg = targets[k] - t0;
    const int nsub = std::max(1, static_cast<int>(std::ceil(seg / cfl.dt - 1e-12)));
    const double dt_sub = seg / nsub;
    for (int j = 0; j < nsub; ++j) state = step(state, t0 + j * dt_sub, dt_sub, prob, weights, &cfl);
    for (int i = 0; i < state.n(); ++i)
      if (!std::isfinite(state[i])) fail(Errc::numerical_failure, "solution lost finiteness");
    traj.times.push_back(targets[k]);
    traj.states.push_back(state);
  }
  const double phi_range =
      std::max(std::abs(prob.phi(prob.range_lo())), std::abs(prob.phi(prob.range_hi())));
  traj.leakage_bound = weights.neglected_tail_mass * prob.horizon * phi_range;
  for (const GridFunction& u : traj.states) {
    double s = 0.0;
    for (int i = 0; i + 1 < u.n(); ++i) {
      const double d = prob.phi(u[i + 1]) - prob.phi(u[i]);
      s += d * d;
    }
    traj.phi_h1_estimate = std::max(traj.phi_h1_estimate, s / u.h());
  }
  return traj;
}

}  // namespace

Trajectory solve(const ProblemSpec& prob, double split_r, std::vector<double> snapshot_times,
                 double safety) {
  const Grid& grid = prob.initial.grid();
  const OperatorWeights weights = discretize(prob.op, grid, split_r);
  const CflInfo cfl = cfl_dt(prob, weights, grid.h, safety);
  return march(prob, weights, cfl, split_r, normalize_targets(std::move(snapshot_times), prob.horizon));
}

std::pair<Trajectory, Trajectory> solve_pair(const ProblemSpec& pu, const ProblemSpec& pv,
                                             double split_r, std::vector<double> snapshot_times,
                                             double safety) {
  if (!(pu.initial.grid() == pv.initial.grid()))
    fail(Errc::grid_mismatch, "pair must share one grid");
  if (std::abs(pu.horizon - pv.horizon) > 1e-12)
    fail(Errc::bad_argument, "pair must share the horizon");
  const Grid& grid = pu.initial.grid();
  const OperatorWeights weights = discretize(pu.op, grid, split_r);
  CflInfo cu = cfl_dt(pu, weights, grid.h, safety);
  CflInfo cv = cfl_dt(pv, weights, grid.h, safety);
  // One shared step keeps the pair's update maps identical; each trajectory
  // keeps its own certified range.
  const double dt = std::min(cu.dt, cv.dt);
  cu.dt = dt;
  cv.dt = dt;
  const auto targets = normalize_targets(std::move(snapshot_times), pu.horizon);
  Trajectory tu = march(pu, weights, cu, split_r, targets);
  Trajectory tv = march(pv, weights, cv, split_r, targets);
  return {std::move(tu), std::move(tv)};
}

SpaceTimeTestFn bump_test_function(double xc, double xw, double tc, double tw, double amp) {
  SpaceTimeTestFn f;
  f.x_lo = xc - xw;
  f.x_hi = xc + xw;
  f.t_lo = tc - tw;
  f.t_hi = tc + tw;
  f.space = [=](double x) { return amp * poly_bump((x - xc) / xw); };
  f.time = [=](double t) { return poly_bump((t - tc) / tw); };
  f.eval = [=](double x, double t) {
    return amp * poly_bump((x - xc) / xw) * poly_bump((t - tc) / tw);
  };
  return f;
}

ResidualReport entropy_residual(const Trajectory& traj, double k_level, const SpaceTimeTestFn& psi,
                                const ProblemSpec& prob, double split_r) {
  const Grid& grid = traj.states.front().grid();
  const double h = grid.h;
  const double margin = std::max(split_r, grid.h) + grid.h;
  if (psi.x_lo < grid.x_min + margin || psi.x_hi > grid.x_max - margin || psi.t_lo <= 0.0 ||
      psi.t_hi >= prob.horizon)
    fail(Errc::test_function_touches_boundary,
         "test function support must clear the domain boundary and (0,T)");

  const std::size_t K = traj.times.size();
  if (K < 2) fail(Errc::bad_argument, "need at least two snapshots");

  // Sample psi on grid x snapshots, factored when separable.
  std::vector<GridFunction> Psi;
  Psi.reserve(K);
  if (psi.separable()) {
    const GridFunction space_gf = GridFunction::sample(grid, psi.space, 0.0, 0.0);
    for (std::size_t k = 0; k < K; ++k) {
      const double tv = psi.time(traj.times[k]);
      Psi.push_back(map_values(space_gf, [tv](double s) { return s * tv; }));
    }
  } else {
    for (std::size_t k = 0; k < K; ++k)
      Psi.push_back(GridFunction::sample(
          grid, [&](double x) { return psi.eval(x, traj.times[k]); }, 0.0, 0.0));
  }

  const bool local = prob.op.local();
  OperatorWeights small_star, large_direct;
  double large_tail = 0.0;
  if (!local) {
    const LevyMeasure mu = prob.op.effective_measure();
    const LevyMeasure mu_star = mu.reflected();
    small_star = discretize_small_jump(mu_star, grid, split_r);
    small_star.drift += drift_correction(mu_star, split_r);
    large_direct = discretize_large_jump(mu, grid, split_r);
    large_tail = tail_mass(mu, split_r);
  }

  // The operator acting on psi factors through the space profile.
  std::optional<GridFunction> op_space;
  if (psi.separable()) {
    const GridFunction space_gf = GridFunction::sample(grid, psi.space, 0.0, 0.0);
    op_space = local ? second_difference(space_gf) : apply(small_star, space_gf);
  }

  const auto phi = [&](double v) { return prob.phi(v); };
  const double phi_k = prob.phi(k_level);

  double total = 0.0;
  double max_dt = 0.0;
  double op_psi_bound = 0.0;
  for (std::size_t k = 0; k + 1 < K; ++k) {
    const double dtk = traj.times[k + 1] - traj.times[k];
    max_dt = std::max(max_dt, dtk);
    const GridFunction& u = traj.states[k];
    const GridFunction& pk = Psi[k];
    const GridFunction phiu = map_values(u, phi);
    GridFunction op_psi, op_phiu;
    if (op_space) {
      const double tv = psi.time(traj.times[k]);
      op_psi = map_values(*op_space, [tv](double s) { return s * tv; });
    } else {
      op_psi = local ? second_difference(pk) : apply(small_star, pk);
    }
    if (!local) {
      op_phiu = apply(large_direct, phiu);
    }
    double slice = 0.0;
    for (int i = 0; i < grid.n; ++i) {
      const double du = u[i] - k_level;
      const double sg = sgn_plus(du);
      const double eta = std::max(du, 0.0);
      const double dps = (Psi[k + 1][i] - pk[i]) / dtk;
      const double dpsx = (pk.at_index(i + 1) - pk.at_index(i - 1)) / (2.0 * h);
      double r = eta * dps + sg * (prob.flux(u[i]) - prob.flux(k_level)) * dpsx;
      r += std::max(phiu[i] - phi_k, 0.0) * op_psi[i];
      if (!local) r += sg * op_phiu[i] * pk[i];
      if (!prob.source.trivial()) r += sg * prob.source(grid.center(i), traj.times[k]) * pk[i];
      slice += r;
      op_psi_bound = std::max(op_psi_bound, std::abs(op_psi[i]));
    }
    total += dtk * h * slice;
  }

  // First-order consistency budget from data and test-function bounds.
  double W0 = 0.0, W1 = 0.0, W2 = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    const GridFunction& pk = Psi[k];
    for (int i = 0; i < grid.n; ++i) {
      W0 = std::max(W0, std::abs(pk[i]));
      W1 = std::max(W1, std::abs(pk.at_index(i + 1) - pk[i]) / h);
      W2 = std::max(W2, std::abs(pk.at_index(i + 1) - 2.0 * pk[i] + pk.at_index(i - 1)) / (h * h));
    }
    if (k + 1 < K)
      for (int i = 0; i < grid.n; ++i)
        W1 = std::max(W1, std::abs(Psi[k + 1][i] - pk[i]) / (traj.times[k + 1] - traj.times[k]));
  }
  const double osc = traj.cfl.range_hi - traj.cfl.range_lo;
  const double vol = (psi.x_hi - psi.x_lo) * (psi.t_hi - psi.t_lo);
  const double op_scale = local ? W2 : (op_psi_bound + 2.0 * W0 * large_tail);
  ResidualReport rep;
  rep.C_spec = 8.0 * (osc + std::abs(k_level) + 1.0) *
               ((1.0 + traj.cfl.L_f) * (W0 + W1) + traj.cfl.L_phi * (W2 + op_scale) + 1.0) * vol;
  rep.tolerance = rep.C_spec * (h + max_dt);
  rep.value = total;
  rep.formula =
      "tol = C_spec (h + max snapshot spacing), C_spec = 8 (osc + |k| + 1) "
      "((1+L_f)(W0+W1) + L_phi (W2 + op_scale) + 1) |supp psi|";
  return rep;
}

}  // namespace duhamel
