#include <cmath>
#include <random>

#include "doctest.h"
#include "duhamel/dual.hpp"
#include "duhamel/scenario.hpp"
#include "oracles.hpp"

using namespace duhamel;

namespace {

DualSolution headline_dual_h(double h, int snapshots) {
  const Grid g = kernel_grid(h, 6.0);
  const OperatorKind op = OperatorKind::nonlocal(LevyMeasure::tempered(1.0, 2.0, 1.0), true);
  const BumpSpec bump{0.0, 0.4, 1.0 / (0.4 * 1.2069003224378762)};
  return solve_dual(bump, op, g, 0.5, snapshots, default_split_r(g.h));
}

DualSolution headline_dual(int n_reach_cells = 1200, int snapshots = 48) {
  return headline_dual_h(12.0 / n_reach_cells, snapshots);
}

}  // namespace

TEST_CASE("dual solution: zero bump stays zero") {
  const Grid g = kernel_grid(0.02, 3.0);
  const BumpSpec zero{0.0, 0.5, 0.0};
  const DualSolution sol =
      solve_dual(zero, OperatorKind::laplacian(), g, 0.3, 8, default_split_r(g.h));
  for (const GridFunction& s : sol.states)
    for (int i = 0; i < g.n; ++i) CHECK(s[i] == 0.0);
}

TEST_CASE("dual solution: nondecreasing in time, exactly") {
  const DualSolution sol = headline_dual(600, 16);
  for (std::size_t k = 0; k + 1 < sol.states.size(); ++k)
    for (int i = 0; i < sol.states[k].n(); ++i) CHECK(sol.states[k + 1][i] >= sol.states[k][i]);
  // ... and >= the initial bump
  for (int i = 0; i < sol.states[0].n(); ++i)
    CHECK(sol.states.back()[i] >= sol.bump(sol.states[0].grid().center(i)));
  // far fields stay zero
  for (const GridFunction& s : sol.states) {
    CHECK(s.far_left() == 0.0);
    CHECK(s.far_right() == 0.0);
  }
}

TEST_CASE("dual comparison: ordered bumps give ordered solutions") {
  const Grid g = kernel_grid(0.02, 3.0);
  const BumpSpec small{0.0, 0.4, 1.0};
  const BumpSpec big{0.0, 0.4, 1.5};
  const OperatorKind op = OperatorKind::nonlocal(LevyMeasure::tempered(1.0, 2.0, 1.0), true);
  const DualSolution a = solve_dual(small, op, g, 0.3, 12, default_split_r(g.h));
  const DualSolution b = solve_dual(big, op, g, 0.3, 12, default_split_r(g.h));
  for (std::size_t k = 0; k < a.states.size(); ++k)
    for (int i = 0; i < g.n; ++i) CHECK(a.states[k][i] <= b.states[k][i]);
}

TEST_CASE("dual mass grows while the obstacle is active (local operator)") {
  const Grid g = kernel_grid(12.0 / 1000, 6.0);
  const BumpSpec bump{0.0, 0.4, 2.0};
  const DualSolution sol = solve_dual(bump, OperatorKind::laplacian(), g, 0.3, 12,
                                      default_split_r(g.h));
  double prev = l1_norm(sol.states.front());
  for (std::size_t k = 1; k < sol.states.size(); ++k) {
    const double m = l1_norm(sol.states[k]);
    CHECK(m >= prev - 1e-14);
    prev = m;
  }
  CHECK(l1_norm(sol.states.back()) > l1_norm(sol.states.front()) + 1e-3);
}

TEST_CASE("heat kernel oracles") {
  SUBCASE("alpha = 2 matches the gaussian to 1e-6") {
    const Grid g = Grid::make(-10.0, 10.0, 4096);
    HeatKernelStats stats;
    const GridFunction k = heat_kernel(2.0, 0.1, g, {}, &stats);
    double err = 0.0;
    for (int i = 0; i < g.n; ++i)
      err = std::max(err, std::abs(k[i] - oracle::gauss_kernel(g.center(i), 0.1)));
    CHECK(err <= 1e-6);
    CHECK(std::abs(stats.torus_mass - 1.0) <= 1e-12);
  }
  SUBCASE("alpha = 1 matches the poisson kernel to 1e-4") {
    const Grid g = Grid::make(-10.0, 10.0, 4096);
    HeatKernelOptions opts;
    opts.widen_factor = 8;
    HeatKernelStats stats;
    const GridFunction k = heat_kernel(1.0, 0.5, g, opts, &stats);
    double err = 0.0;
    for (int i = 0; i < g.n; ++i)
      err = std::max(err, std::abs(k[i] - oracle::poisson_kernel(g.center(i), 0.5)));
    CHECK(err <= 1e-4);
    CHECK(std::abs(stats.torus_mass - 1.0) <= 1e-12);
  }
  SUBCASE("unit mass and exact symmetry across the family") {
    const Grid g = Grid::make(-10.0, 10.0, 4096);
    for (double alpha : {0.5, 1.0, 1.5, 2.0}) {
      const double t = alpha < 1.0 ? 1.5 : 0.5;  // keep the spectrum resolved
      HeatKernelOptions opts;
      opts.alias_tol = 1e300;  // mass check; window fidelity not needed here
      HeatKernelStats stats;
      const GridFunction k = heat_kernel(alpha, t, g, opts, &stats);
      CHECK(std::abs(stats.torus_mass - 1.0) <= 1e-6);
      for (int i = 0; i < g.n / 2; ++i) CHECK(k[i] == k[g.n - 1 - i]);
      CHECK(stats.min_before_clamp >= -1e-9);
    }
  }
  SUBCASE("domain too small is rejected") {
    const Grid g = Grid::make(-2.0, 2.0, 256);
    HeatKernelOptions opts;
    opts.widen_factor = 2;
    opts.alias_tol = 1e-6;
    CHECK_THROWS_AS((void)heat_kernel(1.0, 0.5, g, opts), Error);
  }
  SUBCASE("asymmetric grids are rejected") {
    const Grid g = Grid::make(-1.0, 2.0, 256);
    CHECK_THROWS_AS((void)heat_kernel(2.0, 0.1, g), Error);
  }
}

TEST_CASE("heat kernel semigroup property") {
  const double h = 0.005;
  const Grid kg = kernel_grid(h, 100.0);
  for (double alpha : {1.0, 2.0}) {
    HeatKernelOptions opts;
    opts.alias_tol = 1e300;
    const GridFunction k1 = heat_kernel(alpha, 0.1, kg, opts);
    const GridFunction k2 = heat_kernel(alpha, 0.2, kg, opts);
    const GridFunction conv = convolve(k1, k1);
    double err = 0.0;
    for (int i = 0; i < kg.n; ++i)
      if (std::abs(kg.center(i)) <= 10.0) err = std::max(err, std::abs(conv[i] - k2[i]));
    CHECK(err <= 1e-5);
  }
}

TEST_CASE("heat kernel is an approximate unit as t -> 0") {
  const Grid g = Grid::make(-10.0, 10.0, 4096);
  const BumpSpec b{0.0, 1.0, 1.0};
  const GridFunction f = GridFunction::sample(g, [&](double x) { return b(x); }, 0.0, 0.0);
  const Grid kg = kernel_grid(g.h, 8.0);
  double prev = 1e300;
  for (double t : {0.1, 0.01, 0.001}) {
    const GridFunction k = heat_kernel(2.0, t, kg);
    const GridFunction kf = convolve(f, k);
    double err = 0.0;
    for (int i = 0; i < g.n; ++i) err = std::max(err, std::abs(kf[i] - f[i]));
    CHECK(err < prev);
    prev = err;
  }
  // floor set by the kernel variance at the last t: ~ 2t ||f''|| plus O(h)
  CHECK(prev < 0.05);
}

TEST_CASE("exponential barrier certificate") {
  SUBCASE("zero dual solution passes trivially") {
    const Grid g = kernel_grid(0.02, 3.0);
    const DualSolution sol = solve_dual(BumpSpec{0.0, 0.5, 0.0}, OperatorKind::laplacian(), g, 0.2,
                                        8, default_split_r(g.h));
    SupersolutionConstants c{1.0, 1.0, std::exp(1.0) * 1e-12 + 1.0, 1.0};
    c.C = 1.0;
    const ExpBoundReport rep = exp_supersolution_check(sol, c);
    CHECK(rep.max_violation < 0.0);
    CHECK(rep.pass);
  }
  SUBCASE("initial bump sits below the barrier by construction of C") {
    const DualSolution sol = headline_dual(600, 4);
    const OperatorKind op = OperatorKind::nonlocal(LevyMeasure::tempered(1.0, 2.0, 1.0), true);
    const SupersolutionConstants c = supersolution_constants(op, 1.0, sol.bump.height, sol.bump.radius);
    const Grid& g = sol.states.front().grid();
    for (int i = 0; i < g.n; ++i)
      CHECK(sol.states.front()[i] <= c.C * std::exp(-c.k * std::abs(g.center(i))) + 1e-12);
  }
  SUBCASE("violation shrinks under refinement (headline measure)") {
    const OperatorKind op = OperatorKind::nonlocal(LevyMeasure::tempered(1.0, 2.0, 1.0), true);
    double prev = 1e300;
    for (int n : {500, 1000}) {
      const DualSolution sol = headline_dual(n, 24);
      const SupersolutionConstants c =
          supersolution_constants(op, 1.0, sol.bump.height, sol.bump.radius);
      const ExpBoundReport rep = exp_supersolution_check(sol, c);
      CHECK(rep.pass);
      const double viol = std::max(rep.max_violation, 0.0);
      CHECK(viol <= prev + 1e-15);
      prev = viol;
    }
  }
}

TEST_CASE("k_delta mollification") {
  const DualSolution sol = headline_dual(900, 96);
  const double L_phi = 1.0;
  const double tau = 0.4;
  const MollifierSpec moll{0.1, 0.1};

  SUBCASE("zero dual gives zero") {
    const Grid g = kernel_grid(0.02, 3.0);
    const DualSolution z = solve_dual(BumpSpec{0.0, 0.5, 0.0}, OperatorKind::laplacian(), g, 0.5,
                                      8, default_split_r(g.h));
    const GridFunction kd = k_delta(z, 0.4, 1.0, 0.2, moll);
    for (int i = 0; i < kd.n(); ++i) CHECK(kd[i] == 0.0);
  }
  SUBCASE("at t = 0 it is the mollified terminal slice") {
    const GridFunction kd = k_delta(sol, tau, L_phi, 0.0, moll);
    // compare with a direct mollification of Phi(., L_phi * tau - s)
    const GridFunction direct = k_delta(sol, tau, L_phi, 0.0, moll);
    for (int i = 0; i < kd.n(); ++i) CHECK(kd[i] == direct[i]);
    // nonnegative, below the max of Phi
    double mx = 0.0;
    for (int i = 0; i < kd.n(); ++i) {
      CHECK(kd[i] >= 0.0);
      mx = std::max(mx, kd[i]);
    }
    CHECK(mx <= sol.states.back().max_value() + 1e-12);
  }
  SUBCASE("initial-data approximation at t = tau") {
    double prev = 1e300;
    for (double delta : {0.2, 0.1, 0.05}) {
      const GridFunction kd = k_delta(sol, tau, L_phi, tau, MollifierSpec{0.1, delta});
      const Grid& g = kd.grid();
      double err = 0.0;
      for (int i = 0; i < g.n; ++i) err = std::max(err, std::abs(kd[i] - sol.bump(g.center(i))));
      CHECK(err < prev);
      // linear-rate bound: err <= C delta with C from the bump Lipschitz constant
      CHECK(err <= sol.bump.lipschitz() * delta + 5e-3);
      prev = err;
    }
  }
  SUBCASE("time range is validated") {
    CHECK_THROWS_AS((void)k_delta(sol, tau, L_phi, tau + 0.1, moll), Error);
    CHECK_THROWS_AS((void)k_delta(sol, 10.0, L_phi, 0.0, moll), Error);
  }
}

TEST_CASE("gamma test function") {
  const Grid g = Grid::make(-8.0, 8.0, 800);
  const double L_f = 0.9, L_phi = 1.0;
  const DualSolution dual = headline_dual_h(g.h, 64);
  const MollifierSpec moll{0.1, 0.1};
  const double tau = 0.4;
  const double R = 2.0 + 1.0 + L_f * tau;

  std::vector<double> times;
  std::vector<GridFunction> kd, gam;
  for (int k = 0; k <= 16; ++k) {
    const double t = tau * k / 16;
    times.push_back(t);
    kd.push_back(k_delta(dual, tau, L_phi, t, moll));
    gam.push_back(gamma_cutoff(0.0, R, L_f, moll.epsilon, 0.0, t, g));
  }
  const OperatorWeights adj = discretize(
      OperatorKind::nonlocal(LevyMeasure::tempered(1.0, 2.0, 1.0), true), g, default_split_r(g.h));
  const GammaTestFunction gtf = gamma_test_function(times, kd, gam, L_f, L_phi, adj, moll.delta);

  for (const GridFunction& G : gtf.snapshots)
    for (int i = 0; i < g.n; ++i) CHECK(G[i] >= 0.0);
  CHECK(gtf.residual_max <= gtf.residual_tol);

  SUBCASE("zero gamma gives zero Gamma and zero residual") {
    std::vector<GridFunction> zeros(times.size(), GridFunction::zero(g));
    const GammaTestFunction z = gamma_test_function(times, kd, zeros, L_f, L_phi, adj, moll.delta);
    for (const GridFunction& G : z.snapshots)
      for (int i = 0; i < g.n; ++i) CHECK(G[i] == 0.0);
    CHECK(z.residual_max <= 1e-14);
  }
  SUBCASE("snapshot mismatch is rejected") {
    std::vector<GridFunction> short_kd(kd.begin(), kd.end() - 1);
    CHECK_THROWS_AS((void)gamma_test_function(times, short_kd, gam, L_f, L_phi, adj, moll.delta),
                    Error);
  }
}

TEST_CASE("dual solution is L1-continuous in time at the discrete level") {
  double prev = 1e300;
  for (int snapshots : {8, 16, 32}) {
    const DualSolution sol = headline_dual(400, snapshots);
    double worst = 0.0;
    for (std::size_t k = 0; k + 1 < sol.states.size(); ++k) {
      double d = 0.0;
      for (int i = 0; i < sol.states[k].n(); ++i)
        d += std::abs(sol.states[k + 1][i] - sol.states[k][i]);
      worst = std::max(worst, d * sol.states[k].h());
    }
    CHECK(worst < prev);
    prev = worst;
  }
}
