#include "duhamel/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <random>
#include <sstream>

#include "json.hpp"

namespace duhamel {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Residual quadratures sample the trajectory on snapshot times; their
// spacing must refine along with the grid for first-order convergence.
int uniform_snapshot_count(const Scenario& sc) {
  return std::clamp(sc.grid.n / 20, 32, 128);
}

std::vector<double> snapshot_plan(const Scenario& sc) {
  std::vector<double> ts = sc.verify_times;
  const double T = sc.pair.u.horizon;
  const int count = uniform_snapshot_count(sc);
  for (int k = 1; k < count; ++k) ts.push_back(T * k / count);
  return ts;
}

bool wants(const Scenario& sc, const std::string& id) {
  return std::find(sc.inequalities.begin(), sc.inequalities.end(), id) != sc.inequalities.end();
}

bool dual_needed(const Scenario& sc) {
  for (const char* id : {"thm2.9", "cor3.1a", "cor3.1b", "cor3.1e", "expbound", "cor4.3c"})
    if (wants(sc, id)) return true;
  return false;
}

/// Randomized nonnegative space-time bumps clearing the residual margins.
std::vector<SpaceTimeTestFn> random_test_functions(const Scenario& sc, double split_r, int count) {
  std::mt19937_64 rng(sc.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double T = sc.pair.u.horizon;
  const double margin = std::max(split_r, sc.grid.h) + 2.0 * sc.grid.h;
  const double lo = sc.grid.x_min + margin;
  const double hi = sc.grid.x_max - margin;
  std::vector<SpaceTimeTestFn> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double xw = 0.4 + 1.2 * unit(rng);
    const double xc = lo + xw + (hi - lo - 2.0 * xw) * unit(rng);
    const double tc = T * (0.25 + 0.5 * unit(rng));
    const double tw = std::min(tc, T - tc) * (0.4 + 0.55 * unit(rng));
    out.push_back(bump_test_function(xc, xw, tc, tw, 1.0));
  }
  return out;
}

ContractionReport expbound_report(const Scenario& sc, const DualSolution& dual) {
  const OperatorKind dual_op =
      sc.pair.u.op.local() ? OperatorKind::laplacian() : sc.pair.u.op.adjoint_of();
  const SupersolutionConstants consts = supersolution_constants(
      dual_op, sc.dual.exp_rate, sc.dual.bump.height, sc.dual.bump.radius);
  const ExpBoundReport rep = exp_supersolution_check(dual, consts);
  ContractionReport out;
  out.inequality_id = "expbound";
  out.lhs = rep.max_violation;
  out.rhs = 0.0;
  out.tolerance = rep.tolerance;
  out.n = sc.grid.n;
  out.h = dual.states.front().grid().h;
  out.dt = dual.dt_used;
  out.t = dual.T_tilde;
  out.tolerance_formula = rep.formula;
  out.extra = consts.C_k;
  out.finalize();
  return out;
}

}  // namespace

namespace {

RunOutcome run_battery(const Scenario& sc, const PairTrajectories& trajs,
                       const DualSolution& dual, int threads) {
  const double split_r = sc.resolved_split_r();
  // Assemble report closures, then evaluate (optionally in parallel); the
  // output order is fixed by construction.
  std::vector<std::function<ContractionReport()>> tasks;
  for (const Ball& ball : sc.balls) {
    for (double t : sc.verify_times) {
      if (wants(sc, "thm2.7"))
        tasks.push_back([&, ball, t] { return verify_finite_speed(sc.pair, trajs, ball.center, ball.radius, t); });
      if (wants(sc, "thm2.8"))
        tasks.push_back([&, ball, t] {
          HeatKernelOptions ko;
          ko.widen_factor = sc.alpha < 2.0 ? 8 : 4;
          return verify_duhamel_linear(sc.pair, trajs, sc.alpha, ball.center, ball.radius, t, ko);
        });
      if (wants(sc, "thm2.9"))
        tasks.push_back([&, ball, t] { return verify_duhamel_nonlinear(sc.pair, trajs, dual, ball.center, ball.radius, t); });
      if (wants(sc, "cor3.1a"))
        tasks.push_back([&, ball, t] { return verify_corollary_a(sc.pair, trajs, dual, ball.center, ball.radius, t); });
      if (wants(sc, "cor3.1b"))
        tasks.push_back([&, ball, t] { return verify_corollary_b(sc.pair.u, trajs.u, dual, ball.center, ball.radius, t); });
      if (wants(sc, "cor3.1e"))
        tasks.push_back([&, ball, t] { return verify_corollary_e(sc.pair.u, trajs.u, dual, ball.center, ball.radius, t); });
      if (wants(sc, "cor4.3c"))
        tasks.push_back([&, ball, t] {
          MollifierSpec moll{sc.dual.epsilon, sc.dual.delta};
          return reduced_dual_check(sc.pair, trajs, dual, moll, t, ball.center, ball.radius);
        });
    }
  }
  if (wants(sc, "cor3.1c"))
    tasks.push_back([&] {
      // The preset pair carries u = v + bump >= v; check ordering as (v, u).
      ScenarioPair swapped{sc.pair.v, sc.pair.u, sc.pair.relationship};
      PairTrajectories ts{trajs.v, trajs.u};
      return verify_corollary_c(swapped, ts);
    });
  if (wants(sc, "cor3.1d"))
    tasks.push_back([&] { return verify_corollary_d(sc.pair.u, trajs.u); });
  if (wants(sc, "kato")) {
    const auto psis = random_test_functions(sc, split_r, sc.n_test_functions);
    for (std::size_t j = 0; j < psis.size(); ++j) {
      const SpaceTimeTestFn psi = psis[j];
      tasks.push_back([&, psi, j] {
        ContractionReport r = kato_residual(sc.pair, trajs, psi);
        r.inequality_id = "kato[" + std::to_string(j) + "]";
        return r;
      });
    }
  }
  if (wants(sc, "expbound")) tasks.push_back([&] { return expbound_report(sc, dual); });

  RunOutcome out;
  out.reports.resize(tasks.size());
  if (threads <= 1 || tasks.size() <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) out.reports[i] = tasks[i]();
  } else {
    std::vector<std::future<ContractionReport>> futs;
    futs.reserve(tasks.size());
    for (auto& task : tasks) futs.push_back(std::async(std::launch::async, task));
    for (std::size_t i = 0; i < futs.size(); ++i) out.reports[i] = futs[i].get();
  }
  return out;
}

}  // namespace

RunOutcome run_verification(const Scenario& sc, int threads) {
  const PairTrajectories trajs = solve_scenario(sc.pair, sc.resolved_split_r(), snapshot_plan(sc));
  DualSolution dual;
  if (dual_needed(sc)) dual = scenario_dual(sc);
  return run_battery(sc, trajs, dual, threads);
}

// ---------------------------------------------------------------------------
// Artifacts

namespace {

json report_to_json(const ContractionReport& r) {
  json j;
  j["inequality"] = r.inequality_id;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["margin"] = r.margin;
  j["tolerance"] = r.tolerance;
  j["n"] = r.n;
  j["h"] = r.h;
  j["dt"] = r.dt;
  j["x0"] = r.x0;
  j["ball_radius"] = r.ball_radius;
  j["t"] = r.t;
  j["pass"] = r.pass;
  j["tolerance_formula"] = r.tolerance_formula;
  j["extra"] = r.extra;
  return j;
}

void write_text_atomic(const fs::path& path, const std::string& text) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp);
    os << text;
  }
  fs::rename(tmp, path);
}

void write_reports(const fs::path& dir, const std::vector<ContractionReport>& reports) {
  json arr = json::array();
  for (const auto& r : reports) arr.push_back(report_to_json(r));
  write_text_atomic(dir / "reports.json", arr.dump(2) + "\n");

  std::ostringstream csv;
  csv << "inequality,n,h,dt,x0,ball_radius,t,lhs,rhs,margin,tolerance,pass\n";
  csv.precision(17);
  for (const auto& r : reports) {
    csv << r.inequality_id << ',' << r.n << ',' << r.h << ',' << r.dt << ',' << r.x0 << ','
        << r.ball_radius << ',' << r.t << ',' << r.lhs << ',' << r.rhs << ',' << r.margin << ','
        << r.tolerance << ',' << (r.pass ? 1 : 0) << '\n';
  }
  write_text_atomic(dir / "reports.csv", csv.str());
}

void write_trajectory(const fs::path& dir, const Trajectory& traj) {
  fs::create_directories(dir);
  json man;
  man["dt_used"] = traj.dt_used;
  man["cfl"] = {{"dt", traj.cfl.dt},       {"denom", traj.cfl.denom},
                {"L_f", traj.cfl.L_f},     {"L_phi", traj.cfl.L_phi},
                {"range_lo", traj.cfl.range_lo}, {"range_hi", traj.cfl.range_hi},
                {"safety", traj.cfl.safety}};
  man["leakage_bound"] = traj.leakage_bound;
  man["split_r"] = traj.split_r;
  man["neglected_tail_mass"] = traj.weights.neglected_tail_mass;
  man["phi_h1_estimate"] = traj.phi_h1_estimate;
  json times = json::array();
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof(name), "snap_%04zu.csv", k);
    traj.states[k].write_csv((dir / name).string());
    times.push_back({{"time", traj.times[k]}, {"file", name}});
  }
  man["snapshots"] = times;
  write_text_atomic(dir / "manifest.json", man.dump(2) + "\n");
}

void write_dual(const fs::path& dir, const Scenario& sc, const DualSolution& dual) {
  fs::create_directories(dir);
  json cert;
  cert["T_tilde"] = dual.T_tilde;
  cert["dt_used"] = dual.dt_used;
  cert["bump"] = {{"center", dual.bump.center}, {"radius", dual.bump.radius},
                  {"height", dual.bump.height}, {"mass", dual.bump.mass()}};
  try {
    const OperatorKind dual_op =
        sc.pair.u.op.local() ? OperatorKind::laplacian() : sc.pair.u.op.adjoint_of();
    const SupersolutionConstants consts = supersolution_constants(
        dual_op, sc.dual.exp_rate, sc.dual.bump.height, sc.dual.bump.radius);
    const ExpBoundReport rep = exp_supersolution_check(dual, consts);
    cert["k"] = consts.k;
    cert["K"] = consts.K;
    cert["C"] = consts.C;
    cert["C_k"] = consts.C_k;
    cert["max_violation"] = rep.max_violation;
    cert["tolerance"] = rep.tolerance;
    cert["tolerance_formula"] = rep.formula;
    cert["pass"] = rep.pass;
  } catch (const Error& e) {
    cert["certificate_unavailable"] = e.what();
  }
  for (std::size_t k = 0; k < dual.times.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof(name), "snap_%04zu.csv", k);
    dual.states[k].write_csv((dir / name).string());
  }
  write_text_atomic(dir / "certificate.json", cert.dump(2) + "\n");
}

json manifest_for(const RunConfig& cfg, const Scenario& sc, const PairTrajectories* trajs) {
  json man;
  man["scenario"] = sc.name;
  man["grid"] = {{"x_min", sc.grid.x_min}, {"x_max", sc.grid.x_max}, {"n", sc.grid.n}, {"h", sc.grid.h}};
  man["horizon"] = sc.pair.u.horizon;
  man["split_r"] = sc.resolved_split_r();
  man["seed"] = sc.seed;
  man["threads"] = cfg.threads;
  man["inequalities"] = sc.inequalities;
  man["L_f"] = pair_lipschitz_flux(sc.pair);
  man["L_phi"] = pair_lipschitz_phi(sc.pair);
  if (trajs) {
    man["dt_used"] = trajs->u.dt_used;
    man["cfl_denom"] = trajs->u.cfl.denom;
    man["leakage_bound"] = trajs->u.leakage_bound + trajs->v.leakage_bound;
  }
  if (dual_needed(sc)) {
    try {
      const OperatorKind dual_op =
          sc.pair.u.op.local() ? OperatorKind::laplacian() : sc.pair.u.op.adjoint_of();
      const SupersolutionConstants c = supersolution_constants(
          dual_op, sc.dual.exp_rate, sc.dual.bump.height, sc.dual.bump.radius);
      man["barrier"] = {{"k", c.k}, {"K", c.K}, {"C", c.C}, {"C_k", c.C_k}};
    } catch (const Error&) {
      // no certified barrier for this measure; the certificate records why
    }
  }
  man["tolerance_conventions"] = {
      "each report prints its own formula (tolerance_formula)",
      "time quadratures are left-endpoint on snapshot times",
      "balls select cells by center membership"};
  return man;
}

}  // namespace

namespace {

/// For kernel-smoothed runs, emit the sampled kernel next to its classical
/// closed form (gauss for alpha = 2, poisson for alpha = 1).
void write_kernel_comparison(const fs::path& dir, const Scenario& sc) {
  const double t = sc.verify_times.back();
  const Grid kg = kernel_grid(sc.grid.h, sc.grid.x_max - sc.grid.x_min);
  HeatKernelOptions opts;
  opts.widen_factor = sc.alpha < 2.0 ? 8 : 4;
  const GridFunction k = heat_kernel(sc.alpha, t, kg, opts);
  std::ostringstream csv;
  csv.precision(17);
  csv << "x,kernel,reference\n";
  for (int i = 0; i < kg.n; ++i) {
    const double x = kg.center(i);
    csv << x << ',' << k[i] << ',';
    if (sc.alpha == 2.0)
      csv << std::exp(-x * x / (4.0 * t)) / std::sqrt(4.0 * M_PI * t);
    else if (sc.alpha == 1.0)
      csv << t / (M_PI * (t * t + x * x));
    csv << '\n';
  }
  fs::create_directories(dir);
  write_text_atomic(dir / "kernel_oracle.csv", csv.str());
}

}  // namespace

int cmd_verify(const RunConfig& cfg) {
  const Scenario sc = build_scenario(cfg.scenario);
  const fs::path out(cfg.out_dir);
  fs::create_directories(out);

  const double split_r = sc.resolved_split_r();
  const PairTrajectories trajs = solve_scenario(sc.pair, split_r, snapshot_plan(sc));
  const RunOutcome outcome = run_verification(sc, cfg.threads);

  write_reports(out, outcome.reports);
  write_trajectory(out / "traj_u", trajs.u);
  write_trajectory(out / "traj_v", trajs.v);
  if (dual_needed(sc)) write_dual(out / "dual", sc, scenario_dual(sc));
  if (wants(sc, "thm2.8")) write_kernel_comparison(out / "plotdata", sc);
  write_text_atomic(out / "manifest.json", manifest_for(cfg, sc, &trajs).dump(2) + "\n");
  return outcome.all_pass() ? 0 : 1;
}

int cmd_sweep(const RunConfig& cfg, std::vector<int> ns_override) {
  std::vector<int> ns = ns_override.empty() ? cfg.sweep_ns : std::move(ns_override);
  if (ns.empty()) fail(Errc::config_error, "sweep needs sweep_ns (ascending)");
  for (std::size_t i = 1; i < ns.size(); ++i)
    if (ns[i] <= ns[i - 1]) fail(Errc::config_error, "sweep resolutions must increase strictly");
  const fs::path out(cfg.out_dir);
  fs::create_directories(out / "plotdata");

  std::ostringstream csv;
  csv.precision(17);
  csv << "n,inequality,lhs,rhs,margin,tolerance,violation\n";
  bool all_pass = true;
  std::vector<std::pair<int, double>> worst;  // per n: max violation
  for (int n : ns) {
    const Scenario sc = build_scenario(cfg.scenario, n);
    const RunOutcome outcome = run_verification(sc, cfg.threads);
    double w = 0.0;
    for (const auto& r : outcome.reports) {
      const double viol = std::max(0.0, -r.margin);
      w = std::max(w, viol);
      all_pass = all_pass && r.pass;
      csv << n << ',' << r.inequality_id << ',' << r.lhs << ',' << r.rhs << ',' << r.margin << ','
          << r.tolerance << ',' << viol << '\n';
    }
    worst.emplace_back(n, w);
  }
  write_text_atomic(out / "plotdata" / "margin_vs_n.csv", csv.str());

  std::ostringstream tab;
  tab.precision(17);
  tab << "n,max_violation,ratio_to_previous\n";
  for (std::size_t i = 0; i < worst.size(); ++i) {
    tab << worst[i].first << ',' << worst[i].second << ',';
    if (i > 0 && worst[i].second > 0.0)
      tab << worst[i - 1].second / worst[i].second;
    else
      tab << (i > 0 ? "inf" : "");
    tab << '\n';
  }
  write_text_atomic(out / "sweep.csv", tab.str());
  return all_pass ? 0 : 1;
}

int cmd_solve(const RunConfig& cfg) {
  const Scenario sc = build_scenario(cfg.scenario);
  const fs::path out(cfg.out_dir);
  fs::create_directories(out);
  const PairTrajectories trajs = solve_scenario(sc.pair, sc.resolved_split_r(), snapshot_plan(sc));
  write_trajectory(out / "traj_u", trajs.u);
  write_trajectory(out / "traj_v", trajs.v);
  write_text_atomic(out / "manifest.json", manifest_for(cfg, sc, &trajs).dump(2) + "\n");
  return 0;
}

int cmd_dual(const RunConfig& cfg) {
  const Scenario sc = build_scenario(cfg.scenario);
  const fs::path out(cfg.out_dir);
  fs::create_directories(out);
  write_dual(out / "dual", sc, scenario_dual(sc));
  write_text_atomic(out / "manifest.json", manifest_for(cfg, sc, nullptr).dump(2) + "\n");
  return 0;
}

int cmd_kernel(const RunConfig& cfg) {
  const Scenario sc = build_scenario(cfg.scenario);
  const fs::path out(cfg.out_dir);
  fs::create_directories(out);
  HeatKernelOptions opts;
  opts.widen_factor = cfg.kernel_widen;
  opts.alias_tol = 1e300;  // the kernel subcommand reports fidelity, not gates it
  HeatKernelStats stats;
  const GridFunction k = heat_kernel(cfg.kernel_alpha, cfg.kernel_t, sc.grid, opts, &stats);
  k.write_csv((out / "kernel.csv").string());
  json j;
  j["alpha"] = cfg.kernel_alpha;
  j["t"] = cfg.kernel_t;
  j["widen_factor"] = cfg.kernel_widen;
  j["torus_mass"] = stats.torus_mass;
  j["window_mass"] = stats.window_mass;
  j["exterior_estimate"] = stats.exterior_estimate;
  j["alias_estimate"] = stats.alias_estimate;
  j["min_before_clamp"] = stats.min_before_clamp;
  write_text_atomic(out / "kernel_stats.json", j.dump(2) + "\n");
  return 0;
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case Errc::cfl_violation:
    case Errc::numerical_failure:
    case Errc::spectral_negativity:
    case Errc::divergent_moment:
      return 3;
    default:
      return 2;
  }
}

void write_failure_record(const std::string& out_dir, const std::string& kind,
                          const std::string& message, int exit_code) {
  try {
    fs::create_directories(out_dir);
    json j;
    j["error"] = kind;
    j["message"] = message;
    j["exit_code"] = exit_code;
    write_text_atomic(fs::path(out_dir) / "failure.json", j.dump(2) + "\n");
  } catch (...) {
    // the exit status still carries the failure
  }
}

}  // namespace duhamel
