#include "duhamel/verify.hpp"

#include <algorithm>
#include <cmath>

namespace duhamel {

namespace {

double sgn_plus(double x) { return x > 0.0 ? 1.0 : 0.0; }

GridFunction difference(const GridFunction& u, const GridFunction& v) {
  if (!(u.grid() == v.grid())) fail(Errc::grid_mismatch, "difference: grids differ");
  std::vector<double> d(static_cast<std::size_t>(u.n()));
  for (int i = 0; i < u.n(); ++i) d[static_cast<std::size_t>(i)] = u[i] - v[i];
  return GridFunction(u.grid(), std::move(d), u.far_left() - v.far_left(),
                      u.far_right() - v.far_right());
}

GridFunction positive_part(const GridFunction& f) {
  return map_values(f, [](double x) { return std::max(x, 0.0); });
}

GridFunction abs_values(const GridFunction& f) {
  return map_values(f, [](double x) { return std::abs(x); });
}

/// f(x + k h) as a grid function on f's grid.
GridFunction shift_cells(const GridFunction& f, int k) {
  std::vector<double> v(static_cast<std::size_t>(f.n()));
  for (int i = 0; i < f.n(); ++i) v[static_cast<std::size_t>(i)] = f.at_index(i + k);
  return GridFunction(f.grid(), std::move(v), f.far_left(), f.far_right());
}

double union_osc(const PairTrajectories& trajs) {
  const double lo = std::min(trajs.u.cfl.range_lo, trajs.v.cfl.range_lo);
  const double hi = std::max(trajs.u.cfl.range_hi, trajs.v.cfl.range_hi);
  return hi - lo;
}

double source_budget(const ScenarioPair& pair) {
  return pair.u.source.linf_time_integral(pair.u.horizon) +
         pair.v.source.linf_time_integral(pair.v.horizon);
}

GridFunction sample_source_gap_pos(const ScenarioPair& pair, const Grid& g, double t) {
  return GridFunction::sample(
      g, [&](double x) { return std::max(pair.u.source(x, t) - pair.v.source(x, t), 0.0); }, 0.0,
      0.0);
}

GridFunction sample_source_gap_abs(const ScenarioPair& pair, const Grid& g, double t) {
  return GridFunction::sample(
      g, [&](double x) { return std::abs(pair.u.source(x, t) - pair.v.source(x, t)); }, 0.0, 0.0);
}

void fill_grid_fields(ContractionReport& rep, const PairTrajectories& trajs) {
  const Grid& g = trajs.u.states.front().grid();
  rep.n = g.n;
  rep.h = g.h;
  rep.dt = trajs.u.dt_used;
}

/// Estimate of the dual solution's mass beyond its own grid (edge density
/// times span); enters tolerances of Phi-smoothed bounds.
double dual_edge_mass(const DualSolution& dual) {
  const GridFunction& last = dual.states.back();
  const int n = last.n();
  double edge = 0.0;
  for (int i = 0; i < std::min(3, n); ++i)
    edge = std::max({edge, std::abs(last[i]), std::abs(last[n - 1 - i])});
  return edge * (last.grid().x_max - last.grid().x_min);
}

// The ball enlargement by 1 presumes a unit-mass bump supported within a
// ball of radius below 1 around the origin.
void check_dual_bump(const DualSolution& dual) {
  if (dual.bump.mass() < 1.0 - 1e-9)
    fail(Errc::bad_argument, "dual bump mass must be at least one");
  if (std::abs(dual.bump.center) + dual.bump.radius >= 1.0)
    fail(Errc::bad_argument, "dual bump support must sit inside the unit ball");
}

void check_nonlinear_dual_inputs(const ScenarioPair& pair, const DualSolution& dual) {
  if (pair.u.op.local() != dual.op.local())
    fail(Errc::bad_argument, "dual solution solved for a different operator class");
  if (!dual.op.local() && !dual.op.adjoint)
    fail(Errc::bad_argument, "dual solution must use the adjoint operator");
  if (!pair.u.op.local()) {
    const LevyMeasure& mu = *pair.u.op.measure;
    if (std::holds_alternative<StableSpec>(mu.spec()))
      fail(Errc::not_tempered,
           "partial Duhamel bound needs a measure with a finite positive exponential moment");
  }
  check_dual_bump(dual);
}

}  // namespace

PairTrajectories solve_scenario(const ScenarioPair& pair, double split_r,
                                std::vector<double> snapshot_times, double safety) {
  auto [tu, tv] = solve_pair(pair.u, pair.v, split_r, std::move(snapshot_times), safety);
  return PairTrajectories{std::move(tu), std::move(tv)};
}

double pair_lipschitz_flux(const ScenarioPair& pair) {
  const double lo = std::min(pair.u.range_lo(), pair.v.range_lo());
  const double hi = std::max(pair.u.range_hi(), pair.v.range_hi());
  return pair.u.flux.lipschitz_on(lo, hi);
}

double pair_lipschitz_phi(const ScenarioPair& pair) {
  const double lo = std::min(pair.u.range_lo(), pair.v.range_lo());
  const double hi = std::max(pair.u.range_hi(), pair.v.range_hi());
  return pair.u.phi.lipschitz_on(lo, hi);
}

// ---------------------------------------------------------------------------

ContractionReport verify_finite_speed(const ScenarioPair& pair, const PairTrajectories& trajs,
                                      double x0, double ball_radius, double t) {
  if (pair.u.phi.kind() != PhiSpec::Kind::zero)
    fail(Errc::bad_argument, "finite-speed bound applies to the hyperbolic case only");
  const double L_f = pair_lipschitz_flux(pair);
  const Grid& g = trajs.u.states.front().grid();

  ContractionReport rep;
  rep.inequality_id = "thm2.7";
  rep.x0 = x0;
  rep.ball_radius = ball_radius;
  rep.t = t;
  fill_grid_fields(rep, trajs);

  const GridFunction gap_t = difference(trajs.u.at_time(t), trajs.v.at_time(t));
  rep.lhs = l1_positive_part(gap_t, Ball{x0, ball_radius});

  const GridFunction gap_0 = difference(trajs.u.states.front(), trajs.v.states.front());
  rep.rhs = l1_positive_part(gap_0, Ball{x0, ball_radius + L_f * t});

  const bool sourced = !pair.u.source.trivial() || !pair.v.source.trivial();
  if (sourced) {
    for (std::size_t k = 0; k + 1 < trajs.u.times.size(); ++k) {
      const double tk = trajs.u.times[k];
      if (tk >= t - 1e-14) break;
      const double dt = std::min(trajs.u.times[k + 1], t) - tk;
      const GridFunction sg = sample_source_gap_pos(pair, g, tk);
      rep.rhs += dt * l1_norm(sg, Ball{x0, ball_radius + L_f * (t - tk)});
    }
  }

  const double osc = union_osc(trajs);
  const double C = 4.0 * (osc + source_budget(pair)) * (1.0 + L_f) * (1.0 + t);
  rep.tolerance = C * (rep.h + rep.dt);
  rep.tolerance_formula = "tol = 4 (osc + src)(1+L_f)(1+t) (h + dt)";
  rep.finalize();
  return rep;
}

ContractionReport verify_duhamel_linear(const ScenarioPair& pair, const PairTrajectories& trajs,
                                        double alpha, double x0, double ball_radius, double t,
                                        const HeatKernelOptions& kopts) {
  if (pair.u.phi.kind() != PhiSpec::Kind::identity)
    fail(Errc::bad_argument, "linear Duhamel bound applies to phi = id");
  if ((alpha == 2.0) != pair.u.op.local())
    fail(Errc::bad_argument, "alpha = 2 pairs with the Laplacian, alpha < 2 with a stable measure");
  const double L_f = pair_lipschitz_flux(pair);
  const Grid& g = trajs.u.states.front().grid();

  ContractionReport rep;
  rep.inequality_id = "thm2.8";
  rep.x0 = x0;
  rep.ball_radius = ball_radius;
  rep.t = t;
  fill_grid_fields(rep, trajs);

  const GridFunction gap_t = difference(trajs.u.at_time(t), trajs.v.at_time(t));
  rep.lhs = l1_positive_part(gap_t, Ball{x0, ball_radius});

  // Kernel truncation: the sampled kernel misses its own tail beyond `reach`;
  // that only lowers the right-hand side, so it enters the budget one-sided.
  const double reach = 2.0 * (g.x_max - g.x_min);
  const Grid kg = kernel_grid(g.h, reach);
  HeatKernelStats kstats;
  const GridFunction kernel_t = heat_kernel(alpha, t, kg, kopts, &kstats);

  const GridFunction gap_0 = positive_part(difference(trajs.u.states.front(), trajs.v.states.front()));
  rep.rhs = l1_norm(convolve(gap_0, kernel_t), Ball{x0, ball_radius + L_f * t});

  double kernel_trunc = kstats.exterior_estimate;
  const bool sourced = !pair.u.source.trivial() || !pair.v.source.trivial();
  if (sourced) {
    for (std::size_t k = 0; k + 1 < trajs.u.times.size(); ++k) {
      const double tk = trajs.u.times[k];
      if (tk >= t - 1e-14) break;
      const double dt = std::min(trajs.u.times[k + 1], t) - tk;
      HeatKernelStats ks;
      const GridFunction kern = heat_kernel(alpha, t - tk, kg, kopts, &ks);
      kernel_trunc = std::max(kernel_trunc, ks.exterior_estimate);
      const GridFunction sg = sample_source_gap_pos(pair, g, tk);
      rep.rhs += dt * l1_norm(convolve(sg, kern), Ball{x0, ball_radius + L_f * (t - tk)});
    }
  }

  const double osc = union_osc(trajs);
  const double C = 4.0 * (osc + source_budget(pair)) * (1.0 + L_f) * (1.0 + t);
  const double trunc_term =
      kernel_trunc * (osc + source_budget(pair)) * 2.0 * (ball_radius + L_f * t + 1.0);
  rep.tolerance = C * (rep.h + rep.dt) + trunc_term;
  rep.tolerance_formula =
      "tol = 4 (osc + src)(1+L_f)(1+t)(h + dt) + kernel_tail (osc + src) |B(M+L_f t)| (one-sided)";
  rep.finalize();
  return rep;
}

ContractionReport verify_duhamel_nonlinear(const ScenarioPair& pair, const PairTrajectories& trajs,
                                           const DualSolution& dual, double x0, double ball_radius,
                                           double t) {
  check_nonlinear_dual_inputs(pair, dual);
  const double L_f = pair_lipschitz_flux(pair);
  const double L_phi = pair_lipschitz_phi(pair);
  if (L_phi * t > dual.T_tilde + 1e-12)
    fail(Errc::time_out_of_range, "dual solution horizon below L_phi * t");
  const Grid& g = trajs.u.states.front().grid();

  ContractionReport rep;
  rep.inequality_id = "thm2.9";
  rep.x0 = x0;
  rep.ball_radius = ball_radius;
  rep.t = t;
  fill_grid_fields(rep, trajs);

  const GridFunction gap_t = difference(trajs.u.at_time(t), trajs.v.at_time(t));
  rep.lhs = l1_positive_part(gap_t, Ball{x0, ball_radius});

  const GridFunction gap_0 = positive_part(difference(trajs.u.states.front(), trajs.v.states.front()));
  const GridFunction phi_refl = dual.at_time(L_phi * t).reflected();
  rep.rhs = l1_norm(convolve(gap_0, phi_refl), Ball{x0, ball_radius + 1.0 + L_f * t});

  const bool sourced = !pair.u.source.trivial() || !pair.v.source.trivial();
  if (sourced) {
    for (std::size_t k = 0; k + 1 < trajs.u.times.size(); ++k) {
      const double tk = trajs.u.times[k];
      if (tk >= t - 1e-14) break;
      const double dt = std::min(trajs.u.times[k + 1], t) - tk;
      const GridFunction kern = dual.at_time(L_phi * (t - tk)).reflected();
      const GridFunction sg = sample_source_gap_pos(pair, g, tk);
      rep.rhs += dt * l1_norm(convolve(sg, kern), Ball{x0, ball_radius + 1.0 + L_f * (t - tk)});
    }
  }

  const double osc = union_osc(trajs);
  const double leak = trajs.u.leakage_bound + trajs.v.leakage_bound + dual_edge_mass(dual);
  const double C = 4.0 * (osc + source_budget(pair)) * (1.0 + L_f + L_phi) * (1.0 + t);
  rep.tolerance = C * (rep.h + rep.dt + dual.snapshot_spacing()) +
                  leak * (osc + source_budget(pair)) * 2.0 * (ball_radius + 1.0 + L_f * t + 1.0);
  rep.tolerance_formula =
      "tol = 4 (osc+src)(1+L_f+L_phi)(1+t)(h + dt + dual spacing) + leakage (osc+src) |B(M+1+L_f t)|";
  rep.finalize();
  return rep;
}

// ---------------------------------------------------------------------------

ContractionReport verify_corollary_a(const ScenarioPair& pair, const PairTrajectories& trajs,
                                     const DualSolution& dual, double x0, double ball_radius,
                                     double t) {
  check_nonlinear_dual_inputs(pair, dual);
  const double L_f = pair_lipschitz_flux(pair);
  const double L_phi = pair_lipschitz_phi(pair);
  const Grid& g = trajs.u.states.front().grid();

  ContractionReport rep;
  rep.inequality_id = "cor3.1a";
  rep.x0 = x0;
  rep.ball_radius = ball_radius;
  rep.t = t;
  fill_grid_fields(rep, trajs);

  rep.lhs = l1_norm(difference(trajs.u.at_time(t), trajs.v.at_time(t)), Ball{x0, ball_radius});

  const GridFunction gap_0 = abs_values(difference(trajs.u.states.front(), trajs.v.states.front()));
  rep.rhs = l1_norm(convolve(gap_0, dual.at_time(L_phi * t).reflected()),
                    Ball{x0, ball_radius + 1.0 + L_f * t});
  const bool sourced = !pair.u.source.trivial() || !pair.v.source.trivial();
  if (sourced) {
    for (std::size_t k = 0; k + 1 < trajs.u.times.size(); ++k) {
      const double tk = trajs.u.times[k];
      if (tk >= t - 1e-14) break;
      const double dt = std::min(trajs.u.times[k + 1], t) - tk;
      const GridFunction kern = dual.at_time(L_phi * (t - tk)).reflected();
      rep.rhs += dt * l1_norm(convolve(sample_source_gap_abs(pair, g, tk), kern),
                              Ball{x0, ball_radius + 1.0 + L_f * (t - tk)});
    }
  }

  const double osc = union_osc(trajs);
  const double leak = trajs.u.leakage_bound + trajs.v.leakage_bound + dual_edge_mass(dual);
  const double C = 8.0 * (osc + source_budget(pair)) * (1.0 + L_f + L_phi) * (1.0 + t);
  rep.tolerance = C * (rep.h + rep.dt + dual.snapshot_spacing()) +
                  leak * (osc + source_budget(pair)) * 2.0 * (ball_radius + 2.0 + L_f * t);
  rep.tolerance_formula = "two-sided variant of the thm2.9 budget";
  rep.finalize();
  return rep;
}

ContractionReport verify_corollary_b(const ProblemSpec& prob, const Trajectory& traj,
                                     const DualSolution& dual, double x0, double ball_radius,
                                     double t) {
  check_dual_bump(dual);
  const double lo = prob.range_lo(), hi = prob.range_hi();
  const double L_f = prob.flux.lipschitz_on(std::min(lo, 0.0), std::max(hi, 0.0));
  const double L_phi = prob.phi.lipschitz_on(std::min(lo, 0.0), std::max(hi, 0.0));
  const Grid& g = traj.states.front().grid();

  ContractionReport rep;
  rep.inequality_id = "cor3.1b";
  rep.x0 = x0;
  rep.ball_radius = ball_radius;
  rep.t = t;
  rep.n = g.n;
  rep.h = g.h;
  rep.dt = traj.dt_used;

  rep.lhs = l1_norm(traj.at_time(t), Ball{x0, ball_radius});
  rep.rhs = l1_norm(convolve(abs_values(traj.states.front()), dual.at_time(L_phi * t).reflected()),
                    Ball{x0, ball_radius + 1.0 + L_f * t});
  if (!prob.source.trivial()) {
    for (std::size_t k = 0; k + 1 < traj.times.size(); ++k) {
      const double tk = traj.times[k];
      if (tk >= t - 1e-14) break;
      const double dt = std::min(traj.times[k + 1], t) - tk;
      const GridFunction kern = dual.at_time(L_phi * (t - tk)).reflected();
      const GridFunction sg = GridFunction::sample(
          g, [&](double x) { return std::abs(prob.source(x, tk)); }, 0.0, 0.0);
      rep.rhs += dt * l1_norm(convolve(sg, kern), Ball{x0, ball_radius + 1.0 + L_f * (t - tk)});
    }
  }

  const double osc = hi - lo + std::abs(hi) + std::abs(lo);
  const double leak = traj.leakage_bound + dual_edge_mass(dual);
  rep.tolerance = 8.0 * (osc + 1.0) * (1.0 + L_f + L_phi) * (1.0 + t) *
                      (rep.h + rep.dt + dual.snapshot_spacing()) +
                  leak * osc * 2.0 * (ball_radius + 2.0 + L_f * t);
  rep.tolerance_formula = "thm2.9 budget against the zero solution";
  rep.finalize();
  return rep;
}

ContractionReport verify_corollary_c([[maybe_unused]] const ScenarioPair& pair,
                                     const PairTrajectories& trajs) {
  // Preconditions: ordered initial data and sources.
  const GridFunction& u0 = trajs.u.states.front();
  const GridFunction& v0 = trajs.v.states.front();
  for (int i = 0; i < u0.n(); ++i)
    if (u0[i] > v0[i] + 1e-14)
      fail(Errc::bad_argument, "comparison check needs ordered initial data");

  ContractionReport rep;
  rep.inequality_id = "cor3.1c";
  fill_grid_fields(rep, trajs);
  rep.t = trajs.u.times.back();

  double viol = std::max(u0.far_left() - v0.far_left(), u0.far_right() - v0.far_right());
  for (std::size_t k = 0; k < trajs.u.times.size(); ++k) {
    const GridFunction& u = trajs.u.states[k];
    const GridFunction& v = trajs.v.states[k];
    for (int i = 0; i < u.n(); ++i) viol = std::max(viol, u[i] - v[i]);
    viol = std::max({viol, u.far_left() - v.far_left(), u.far_right() - v.far_right()});
  }
  rep.lhs = std::max(viol, 0.0);
  rep.rhs = 0.0;
  const double osc = union_osc(trajs);
  rep.tolerance = 1e-12 * std::max(1.0, osc);
  rep.tolerance_formula = "exact discrete ordering, rounding slack 1e-12 max(1, osc)";
  rep.finalize();
  return rep;
}

ContractionReport verify_corollary_d(const ProblemSpec& prob, const Trajectory& traj) {
  ContractionReport rep;
  rep.inequality_id = "cor3.1d";
  const Grid& g = traj.states.front().grid();
  rep.n = g.n;
  rep.h = g.h;
  rep.dt = traj.dt_used;
  rep.t = traj.times.back();

  const GridFunction& u0 = traj.states.front();
  const double lo0 = std::min({u0.min_value(), u0.far_left(), u0.far_right()});
  const double hi0 = std::max({u0.max_value(), u0.far_left(), u0.far_right()});

  double viol = 0.0;
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const double tk = traj.times[k];
    const double lo = lo0 + prob.source.inf_time_integral(tk);
    const double hi = hi0 + prob.source.sup_time_integral(tk);
    const GridFunction& u = traj.states[k];
    for (int i = 0; i < u.n(); ++i) viol = std::max({viol, u[i] - hi, lo - u[i]});
    viol = std::max({viol, u.far_left() - hi, lo - u.far_left(), u.far_right() - hi,
                     lo - u.far_right()});
  }
  rep.lhs = std::max(viol, 0.0);
  rep.rhs = 0.0;
  const double osc = hi0 - lo0;
  double slack = 1e-12 * std::max(1.0, osc);
  if (prob.source.kind() == SourceSpec::Kind::bump)
    slack += prob.source.time_lipschitz() * traj.dt_used * traj.times.back();
  rep.tolerance = slack;
  rep.tolerance_formula =
      "exact discrete interval bounds; time-varying sources add Lip_t(g) dt T";
  rep.finalize();
  return rep;
}

ContractionReport verify_corollary_e(const ProblemSpec& prob, const Trajectory& traj,
                                     const DualSolution& dual, double x0, double ball_radius,
                                     double t) {
  check_dual_bump(dual);
  const double lo = prob.range_lo(), hi = prob.range_hi();
  const double L_f = prob.flux.lipschitz_on(lo, hi);
  const double L_phi = prob.phi.lipschitz_on(lo, hi);
  const Grid& g = traj.states.front().grid();

  ContractionReport rep;
  rep.inequality_id = "cor3.1e";
  rep.x0 = x0;
  rep.ball_radius = ball_radius;
  rep.t = t;
  rep.n = g.n;
  rep.h = g.h;
  rep.dt = traj.dt_used;

  rep.lhs = bv_seminorm(traj.at_time(t), Ball{x0, ball_radius});

  const GridFunction& u0 = traj.states.front();
  double best = 0.0;
  for (int shift : {1, 2, 4}) {
    const double s = shift * g.h;
    GridFunction d0 = abs_values(difference(shift_cells(u0, shift), u0));
    double q = l1_norm(convolve(d0, dual.at_time(L_phi * t).reflected()),
                       Ball{x0, ball_radius + 1.0 + L_f * t});
    if (!prob.source.trivial()) {
      for (std::size_t k = 0; k + 1 < traj.times.size(); ++k) {
        const double tk = traj.times[k];
        if (tk >= t - 1e-14) break;
        const double dt = std::min(traj.times[k + 1], t) - tk;
        const GridFunction kern = dual.at_time(L_phi * (t - tk)).reflected();
        const GridFunction dg = GridFunction::sample(
            g, [&](double x) { return std::abs(prob.source(x + s, tk) - prob.source(x, tk)); },
            0.0, 0.0);
        q += dt * l1_norm(convolve(dg, kern), Ball{x0, ball_radius + 1.0 + L_f * (t - tk)});
      }
    }
    best = std::max(best, q / s);
  }
  rep.rhs = best;
  // Simplified global form: mass of Phi times the full BV seminorm.
  rep.extra = l1_norm(dual.at_time(L_phi * t)) * bv_seminorm(u0);

  const double leak = traj.leakage_bound + dual_edge_mass(dual);
  rep.tolerance = 4.0 * (bv_seminorm(u0) + 1.0) * (1.0 + L_f + L_phi) * (1.0 + t) *
                      (rep.h + rep.dt + dual.snapshot_spacing()) +
                  leak * bv_seminorm(u0) * 2.0 * (ball_radius + 2.0 + L_f * t);
  rep.tolerance_formula = "shifted-solution quotient budget, shifts {h, 2h, 4h}";
  rep.finalize();
  return rep;
}

// ---------------------------------------------------------------------------

ContractionReport kato_residual(const ScenarioPair& pair, const PairTrajectories& trajs,
                                const SpaceTimeTestFn& psi) {
  const Trajectory& TU = trajs.u;
  const Trajectory& TV = trajs.v;
  const Grid& grid = TU.states.front().grid();
  const double h = grid.h;
  const double split_r = TU.split_r;
  const double margin = std::max(split_r, h) + h;
  if (psi.x_lo < grid.x_min + margin || psi.x_hi > grid.x_max - margin || psi.t_lo <= 0.0 ||
      psi.t_hi >= pair.u.horizon)
    fail(Errc::test_function_touches_boundary,
         "test function support must clear the domain boundary and (0,T)");

  const std::size_t K = TU.times.size();
  std::vector<GridFunction> Psi;
  Psi.reserve(K);
  if (psi.separable()) {
    const GridFunction space_gf = GridFunction::sample(grid, psi.space, 0.0, 0.0);
    for (std::size_t k = 0; k < K; ++k) {
      const double tv = psi.time(TU.times[k]);
      Psi.push_back(map_values(space_gf, [tv](double s) { return s * tv; }));
    }
  } else {
    for (std::size_t k = 0; k < K; ++k)
      Psi.push_back(GridFunction::sample(
          grid, [&](double x) { return psi.eval(x, TU.times[k]); }, 0.0, 0.0));
  }

  const bool local = pair.u.op.local();
  OperatorWeights small_star, large_star;
  double tail_margin = 0.0;
  if (!local) {
    const LevyMeasure mu = pair.u.op.effective_measure();
    const LevyMeasure mu_star = mu.reflected();
    small_star = discretize_small_jump(mu_star, grid, split_r);
    small_star.drift += drift_correction(mu_star, split_r);
    large_star = discretize_large_jump(mu_star, grid, split_r);
    const double dist =
        std::min(psi.x_lo - grid.x_min, grid.x_max - psi.x_hi);
    tail_margin = tail_mass(mu, dist);
  }

  auto full_adjoint = [&](const GridFunction& f) {
    GridFunction out = local ? second_difference(f) : apply(small_star, f);
    if (!local) {
      const GridFunction lg = apply(large_star, f);
      for (int i = 0; i < grid.n; ++i) out[i] += lg[i];
    }
    return out;
  };
  std::optional<GridFunction> lpsi_space;
  if (psi.separable())
    lpsi_space = full_adjoint(GridFunction::sample(grid, psi.space, 0.0, 0.0));

  const auto phi = [&](double v) { return pair.u.phi(v); };

  double total = 0.0;
  double max_dt = 0.0;
  double W0 = 0.0, W1 = 0.0, W2 = 0.0, opb = 0.0;
  for (std::size_t k = 0; k + 1 < K; ++k) {
    const double dtk = TU.times[k + 1] - TU.times[k];
    max_dt = std::max(max_dt, dtk);
    const GridFunction& u = TU.states[k];
    const GridFunction& v = TV.states[k];
    const GridFunction& pk = Psi[k];
    GridFunction lpsi;
    if (lpsi_space) {
      const double tv = psi.time(TU.times[k]);
      lpsi = map_values(*lpsi_space, [tv](double s) { return s * tv; });
    } else {
      lpsi = full_adjoint(pk);
    }
    double slice = 0.0;
    for (int i = 0; i < grid.n; ++i) {
      const double du = u[i] - v[i];
      const double eta = std::max(du, 0.0);
      const double q = sgn_plus(du) * (pair.u.flux(u[i]) - pair.u.flux(v[i]));
      const double dps = (Psi[k + 1][i] - pk[i]) / dtk;
      const double dpsx = (pk.at_index(i + 1) - pk.at_index(i - 1)) / (2.0 * h);
      double r = eta * dps + q * dpsx;
      r += std::max(phi(u[i]) - phi(v[i]), 0.0) * lpsi[i];
      const double sgap = pair.u.source(grid.center(i), TU.times[k]) -
                          pair.v.source(grid.center(i), TU.times[k]);
      r += std::max(sgap, 0.0) * pk[i];
      slice += r;
      opb = std::max(opb, std::abs(lpsi[i]));
    }
    total += dtk * h * slice;
  }
  for (std::size_t k = 0; k < K; ++k) {
    const GridFunction& pk = Psi[k];
    for (int i = 0; i < grid.n; ++i) {
      W0 = std::max(W0, std::abs(pk[i]));
      W1 = std::max(W1, std::abs(pk.at_index(i + 1) - pk[i]) / h);
      W2 = std::max(W2, std::abs(pk.at_index(i + 1) - 2.0 * pk[i] + pk.at_index(i - 1)) / (h * h));
    }
    if (k + 1 < K)
      for (int i = 0; i < grid.n; ++i)
        W1 = std::max(W1, std::abs(Psi[k + 1][i] - pk[i]) / (TU.times[k + 1] - TU.times[k]));
  }

  ContractionReport rep;
  rep.inequality_id = "kato";
  fill_grid_fields(rep, trajs);
  rep.t = psi.t_hi;
  rep.lhs = -total;  // inequality: total >= -tol, i.e. rhs - lhs with rhs = 0
  rep.rhs = 0.0;
  const double osc = union_osc(trajs);
  const double L_f = pair_lipschitz_flux(pair);
  const double L_phi = pair_lipschitz_phi(pair);
  const double vol = (psi.x_hi - psi.x_lo) * (psi.t_hi - psi.t_lo);
  const double C = 8.0 * (osc + 1.0) *
                   ((1.0 + L_f) * (W0 + W1) + L_phi * (W2 + opb) + 1.0) * vol;
  rep.tolerance = C * (h + max_dt) +
                  osc * tail_margin * vol * W0;  // operator mass reaching past the domain
  rep.tolerance_formula =
      "tol = 8 (osc+1)((1+L_f)(W0+W1) + L_phi(W2+|L*psi|) + 1)|supp psi|(h+dt)"
      " + osc tail(dist) |supp psi| W0";
  rep.finalize();
  return rep;
}

ContractionReport reduced_dual_check(const ScenarioPair& pair, const PairTrajectories& trajs,
                                     const DualSolution& dual, const MollifierSpec& moll,
                                     double tau, double x0, double ball_radius) {
  check_nonlinear_dual_inputs(pair, dual);
  const double L_f = pair_lipschitz_flux(pair);
  const double L_phi = pair_lipschitz_phi(pair);
  const double T = pair.u.horizon;
  const double R = ball_radius + 1.0 + L_f * tau;
  if (!(R > L_f * T + 1.0))
    fail(Errc::bad_argument, "cutoff radius must exceed L_f T + 1");

  const Grid& g = trajs.u.states.front().grid();
  ContractionReport rep;
  rep.inequality_id = "cor4.3c";
  rep.x0 = x0;
  rep.ball_radius = ball_radius;
  rep.t = tau;
  fill_grid_fields(rep, trajs);

  // Gamma snapshots on the trajectory times up to tau.
  std::vector<double> times;
  std::vector<GridFunction> kd, gam;
  for (std::size_t k = 0; k < trajs.u.times.size(); ++k) {
    const double tk = trajs.u.times[k];
    if (tk > tau + 1e-12) break;
    times.push_back(tk);
    kd.push_back(k_delta(dual, tau, L_phi, tk, moll));
    gam.push_back(gamma_cutoff(x0, R, L_f, moll.epsilon, 0.0, tk, g));
  }
  if (std::abs(times.back() - tau) > 1e-10)
    fail(Errc::snapshot_mismatch, "trajectory snapshots must include tau");

  const OperatorWeights adj = discretize(pair.u.op.adjoint_of(), g, trajs.u.split_r);
  GammaTestFunction gtf =
      gamma_test_function(times, kd, gam, L_f, L_phi, adj, moll.delta);

  const GridFunction gap_tau = difference(trajs.u.at_time(tau), trajs.v.at_time(tau));
  rep.lhs = inner(positive_part(gap_tau), gtf.snapshots.back());

  const GridFunction gap_0 = positive_part(difference(trajs.u.states.front(), trajs.v.states.front()));
  rep.rhs = inner(gap_0, gtf.snapshots.front());
  const bool sourced = !pair.u.source.trivial() || !pair.v.source.trivial();
  if (sourced) {
    for (std::size_t k = 0; k + 1 < times.size(); ++k) {
      const double dt = times[k + 1] - times[k];
      rep.rhs += dt * inner(sample_source_gap_pos(pair, g, times[k]), gtf.snapshots[k]);
    }
  }

  // The inequality holds for exact subsolutions; the discrete Gamma may miss
  // by its measured residual, which enters the budget against the gap size.
  const double osc = union_osc(trajs);
  rep.tolerance = osc * tau * std::max(gtf.residual_max, 0.0) * 2.0 * (R + moll.epsilon) +
                  4.0 * (osc + source_budget(pair)) * (1.0 + L_f + L_phi) *
                      (rep.h + rep.dt + moll.delta) * (1.0 + tau);
  rep.extra = gtf.residual_max;
  rep.tolerance_formula =
      "tol = osc tau max(Gamma residual, 0) |supp gamma| + "
      "4 (osc+src)(1+L_f+L_phi)(h+dt+delta)(1+tau)";
  rep.finalize();
  return rep;
}

}  // namespace duhamel
