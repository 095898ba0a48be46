#include "duhamel/scenario.hpp"

#include <algorithm>
#include <cmath>

namespace duhamel {

std::vector<std::string> scenario_presets() {
  return {"finite-speed-burgers",  "finite-speed-sourced",  "linear-duhamel-local",
          "linear-duhamel-cauchy", "stefan-local-headline", "stefan-tempered-headline"};
}

ScenarioDescription preset_description(const std::string& preset) {
  ScenarioDescription d;
  d.name = preset;

  if (preset == "finite-speed-burgers" || preset == "finite-speed-sourced") {
    d.x_min = -4.0;
    d.x_max = 4.0;
    d.n = 2000;
    d.phi_kind = "zero";
    d.op_kind = "laplacian";  // inert: phi = 0
    d.base = 0.2;
    d.data_bump = BumpSpec{0.0, 0.5, 0.8};
    d.inequalities = {"thm2.7"};
    if (preset == "finite-speed-sourced")
      d.source_u = SourceDescription{"bump", 0.3, 0.5, 0.6, 0.25, 0.2};
    return d;
  }
  if (preset == "linear-duhamel-local" || preset == "linear-duhamel-cauchy") {
    d.x_min = -9.0;
    d.x_max = 9.0;
    d.n = 2000;
    d.phi_kind = "identity";
    if (preset == "linear-duhamel-local") {
      d.op_kind = "laplacian";
      d.alpha = 2.0;
    } else {
      d.op_kind = "nonlocal";
      d.measure.kind = "stable-fractional";
      d.measure.alpha = 1.0;
      d.alpha = 1.0;
    }
    d.base = 0.2;
    d.inequalities = {"thm2.8"};
    return d;
  }
  if (preset == "stefan-local-headline" || preset == "stefan-tempered-headline") {
    d.x_min = -8.0;
    d.x_max = 8.0;
    d.n = 2000;
    d.phi_kind = "stefan";
    d.phi_a = -0.1;
    d.phi_b = 0.1;
    if (preset == "stefan-local-headline") {
      d.op_kind = "laplacian";
    } else {
      d.op_kind = "nonlocal";
      d.measure = MeasureDescription{"tempered", 1.0, 2.0, 1.0, {}, {}, {}, 0.0};
    }
    d.base = 0.3;
    d.inequalities = {"thm2.9",  "kato",    "cor3.1a", "cor3.1b", "cor3.1c",
                      "cor3.1d", "cor3.1e", "expbound", "cor4.3c"};
    return d;
  }
  fail(Errc::config_error, "unknown scenario preset: " + preset);
}

LevyMeasure build_measure(const MeasureDescription& d) {
  if (d.kind == "stable") return LevyMeasure::stable(d.alpha, d.c);
  if (d.kind == "stable-fractional") return LevyMeasure::stable_fractional(d.alpha);
  if (d.kind == "tempered") return LevyMeasure::tempered(d.alpha, d.lambda, d.c);
  if (d.kind == "atomic") return LevyMeasure::atomic(d.atoms);
  if (d.kind == "table") return LevyMeasure::tabulated(d.nodes, d.densities, d.decay_rate);
  fail(Errc::config_error, "unknown measure kind: " + d.kind);
}

SourceSpec build_source(const SourceDescription& d) {
  if (d.kind == "zero") return SourceSpec::zero();
  if (d.kind == "constant") return SourceSpec::constant(d.amp);
  if (d.kind == "bump") return SourceSpec::bump(d.amp, d.xc, d.xw, d.tc, d.tw);
  fail(Errc::config_error, "unknown source kind: " + d.kind);
}

namespace {

FluxSpec build_flux(const ScenarioDescription& d) {
  if (d.flux_kind == "burgers") return FluxSpec::burgers();
  if (d.flux_kind == "linear") return FluxSpec::linear(d.flux_a);
  fail(Errc::config_error, "unknown flux kind: " + d.flux_kind);
}

PhiSpec build_phi(const ScenarioDescription& d) {
  if (d.phi_kind == "zero") return PhiSpec::zero();
  if (d.phi_kind == "identity") return PhiSpec::identity();
  if (d.phi_kind == "power") return PhiSpec::power(d.phi_m);
  if (d.phi_kind == "stefan") return PhiSpec::stefan(d.phi_a, d.phi_b);
  fail(Errc::config_error, "unknown phi kind: " + d.phi_kind);
}

}  // namespace

Scenario build_scenario(const ScenarioDescription& desc, int n_override) {
  Scenario sc;
  sc.name = desc.name;
  const int n = n_override > 0 ? n_override : desc.n;
  sc.grid = Grid::make(desc.x_min, desc.x_max, n);
  sc.split_r = desc.split_r;
  sc.verify_times = desc.verify_times;
  sc.balls = desc.balls;
  sc.dual = desc.dual;
  sc.alpha = desc.alpha;
  sc.inequalities = desc.inequalities;
  sc.n_test_functions = desc.n_test_functions;
  sc.seed = desc.seed;

  const FluxSpec flux = build_flux(desc);
  const PhiSpec phi = build_phi(desc);
  OperatorKind op = OperatorKind::laplacian();
  if (desc.op_kind == "nonlocal")
    op = OperatorKind::nonlocal(build_measure(desc.measure));
  else if (desc.op_kind != "laplacian")
    fail(Errc::config_error, "unknown operator kind: " + desc.op_kind);

  ScenarioPair pair;
  pair.u.flux = flux;
  pair.u.phi = phi;
  pair.u.op = op;
  pair.u.source = build_source(desc.source_u);
  pair.u.horizon = desc.horizon;
  pair.u.initial = GridFunction::sample(
      sc.grid, [&](double x) { return desc.base + desc.data_bump(x); }, desc.base, desc.base);
  pair.v = pair.u;
  pair.v.source = build_source(desc.source_v);
  pair.v.initial = GridFunction::constant(sc.grid, desc.base);
  pair.relationship = "compact bump over a constant state";
  sc.pair = std::move(pair);
  return sc;
}

ScenarioPair bump_over_constant_pair(const Grid& grid, const FluxSpec& flux, const PhiSpec& phi,
                                     const OperatorKind& op, double base, const BumpSpec& bump,
                                     double horizon, const SourceSpec& gu, const SourceSpec& gv) {
  ScenarioPair pair;
  pair.u.flux = flux;
  pair.u.phi = phi;
  pair.u.op = op;
  pair.u.source = gu;
  pair.u.horizon = horizon;
  pair.u.initial = GridFunction::sample(grid, [&](double x) { return base + bump(x); }, base, base);
  pair.v = pair.u;
  pair.v.source = gv;
  pair.v.initial = GridFunction::constant(grid, base);
  pair.relationship = "compact bump over a constant state";
  return pair;
}

DualSolution scenario_dual(const Scenario& sc) {
  const double L_phi = std::max(pair_lipschitz_phi(sc.pair), 1e-12);
  const double T = sc.pair.u.horizon;
  const double T_tilde = std::max(T, L_phi * T);
  const Grid dg = kernel_grid(sc.grid.h, sc.dual.reach);
  const OperatorKind dual_op =
      sc.pair.u.op.local() ? OperatorKind::laplacian() : sc.pair.u.op.adjoint_of();
  return solve_dual(sc.dual.bump, dual_op, dg, T_tilde, sc.dual.n_snapshots,
                    sc.split_r > 0.0 ? sc.split_r : default_split_r(dg.h));
}

}  // namespace duhamel
