#include <cmath>
#include <random>

#include "doctest.h"
#include "duhamel/mollifier.hpp"
#include "duhamel/solver.hpp"
#include "oracles.hpp"

using namespace duhamel;

namespace {

ProblemSpec make_problem(const Grid& g, FluxSpec flux, PhiSpec phi, OperatorKind op,
                         std::function<double(double)> u0, double fl, double fr, double T,
                         SourceSpec src = SourceSpec::zero()) {
  ProblemSpec p;
  p.flux = std::move(flux);
  p.phi = std::move(phi);
  p.op = std::move(op);
  p.source = src;
  p.initial = GridFunction::sample(g, u0, fl, fr);
  p.horizon = T;
  return p;
}

GridFunction random_grid_data(const Grid& g, std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(static_cast<std::size_t>(g.n));
  for (double& x : v) x = d(rng);
  return GridFunction(g, std::move(v), d(rng), d(rng));
}

}  // namespace

TEST_CASE("engquist-osher flux") {
  const FluxSpec burgers = FluxSpec::burgers();
  // consistency F(u,u) = f(u)
  for (int k = 0; k < 50; ++k) {
    const double u = -2.0 + 4.0 * k / 49.0;
    CHECK(burgers.eo(u, u) == doctest::Approx(burgers(u)).epsilon(1e-14));
  }
  CHECK(burgers.eo(1.0, -1.0) == doctest::Approx(1.0).epsilon(1e-15));

  const FluxSpec lin = FluxSpec::linear(1.0);
  CHECK(lin.eo(2.0, 7.0) == doctest::Approx(2.0).epsilon(1e-15));

  // tabulated burgers approximation behaves like the closed form
  std::vector<double> us, fs;
  for (int k = 0; k <= 400; ++k) {
    const double u = -2.0 + 4.0 * k / 400.0;
    us.push_back(u);
    fs.push_back(0.5 * u * u);
  }
  const FluxSpec tab = FluxSpec::tabulated(us, fs);
  CHECK(tab(0.0) == doctest::Approx(0.0).epsilon(1e-14));
  for (double u : {-1.3, -0.2, 0.7, 1.9})
    CHECK(tab.eo(u, u) == doctest::Approx(tab(u)).epsilon(1e-12));
  CHECK(tab.eo(1.0, -1.0) == doctest::Approx(1.0).epsilon(1e-3));
  // monotone: nondecreasing in a, nonincreasing in b
  CHECK(tab.eo(1.0, 0.3) >= tab.eo(0.9, 0.3) - 1e-14);
  CHECK(tab.eo(1.0, 0.3) >= tab.eo(1.0, 0.4) - 1e-14);

  // Lipschitz certification by dense difference quotients
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(-1.5, 1.5);
  for (const FluxSpec* f : {&burgers, &lin, &tab}) {
    const double L = f->lipschitz_on(-1.5, 1.5);
    for (int k = 0; k < 500; ++k) {
      const double a = d(rng), b = d(rng);
      if (a == b) continue;
      CHECK(std::abs(((*f)(a) - (*f)(b)) / (a - b)) <= L + 1e-10);
    }
  }
}

TEST_CASE("phi specs") {
  const PhiSpec stefan = PhiSpec::stefan(-0.1, 0.1);
  CHECK(stefan(0.05) == 0.0);
  CHECK(stefan(0.3) == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(stefan(-0.5) == doctest::Approx(-0.4).epsilon(1e-14));
  CHECK(stefan.lipschitz_on(-0.05, 0.08) == 0.0);
  CHECK(stefan.lipschitz_on(0.0, 0.5) == 1.0);

  const PhiSpec pw = PhiSpec::power(2.0);
  CHECK(pw(-0.5) == doctest::Approx(-0.25).epsilon(1e-14));
  CHECK(pw.lipschitz_on(-1.0, 0.5) == doctest::Approx(2.0).epsilon(1e-14));

  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int k = 0; k < 500; ++k) {
    const double a = d(rng), b = d(rng);
    if (a == b) continue;
    CHECK(std::abs((pw(a) - pw(b)) / (a - b)) <= pw.lipschitz_on(-1.0, 1.0) + 1e-10);
    CHECK((stefan(a) - stefan(b)) * (a - b) >= 0.0);  // nondecreasing
  }
}

TEST_CASE("cfl bound") {
  SUBCASE("pure advection") {
    const Grid g = Grid::make(0.0, 1.0, 100);  // h = 0.01
    ProblemSpec p = make_problem(g, FluxSpec::linear(1.0), PhiSpec::zero(),
                                 OperatorKind::laplacian(), [](double) { return 0.5; }, 0.5, 0.5,
                                 1.0);
    const OperatorWeights w = discretize(p.op, g, 0.0);
    const CflInfo c = cfl_dt(p, w, g.h, 1.0);
    CHECK(c.dt == doctest::Approx(0.005).epsilon(1e-12));
  }
  SUBCASE("pure local diffusion") {
    const Grid g = Grid::make(0.0, 1.0, 10);  // h = 0.1
    ProblemSpec p = make_problem(g, FluxSpec::linear(0.0), PhiSpec::identity(),
                                 OperatorKind::laplacian(), [](double) { return 0.5; }, 0.5, 0.5,
                                 1.0);
    const OperatorWeights w = discretize(p.op, g, 0.0);
    const CflInfo c = cfl_dt(p, w, g.h, 1.0);
    CHECK(c.dt == doctest::Approx(0.005).epsilon(1e-12));
  }
  SUBCASE("degenerate: no flux, no diffusion") {
    const Grid g = Grid::make(0.0, 1.0, 10);
    ProblemSpec p = make_problem(g, FluxSpec::linear(0.0), PhiSpec::zero(),
                                 OperatorKind::laplacian(), [](double) { return 0.5; }, 0.5, 0.5,
                                 2.0);
    const OperatorWeights w = discretize(p.op, g, 0.0);
    const CflInfo c = cfl_dt(p, w, g.h, 0.9);
    CHECK(c.degenerate);
    CHECK(c.dt == 2.0);
  }
}

TEST_CASE("step: exactness and monotonicity") {
  const Grid g = Grid::make(-2.0, 2.0, 100);
  const LevyMeasure mu = LevyMeasure::tempered(1.0, 2.0, 1.0);
  ProblemSpec p = make_problem(g, FluxSpec::burgers(), PhiSpec::identity(),
                               OperatorKind::nonlocal(mu), [](double) { return 0.7; }, 0.7, 0.7,
                               1.0);
  const OperatorWeights w = discretize(p.op, g, default_split_r(g.h));
  const CflInfo c = cfl_dt(p, w, g.h);

  SUBCASE("constant state is a fixed point") {
    const GridFunction out = step(p.initial, 0.0, c.dt, p, w);
    for (int i = 0; i < g.n; ++i) CHECK(out[i] == 0.7);
    CHECK(out.far_left() == 0.7);
  }
  SUBCASE("cfl violation raises") {
    CHECK_THROWS_AS((void)step(p.initial, 0.0, 1e9, p, w, &c), Error);
  }
  SUBCASE("monotone in the initial data") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> lift(0.0, 0.3);
    for (int trial = 0; trial < 40; ++trial) {
      GridFunction a = random_grid_data(g, rng, -0.5, 0.5);
      GridFunction b = a;
      for (int i = 0; i < g.n; ++i) b[i] += lift(rng);
      b.set_far_fields(a.far_left() + lift(rng), a.far_right() + lift(rng));
      ProblemSpec pa = p;
      pa.initial = a;
      ProblemSpec pb = p;
      pb.initial = b;
      const CflInfo cc = cfl_dt(pa, w, g.h);
      const GridFunction sa = step(a, 0.0, cc.dt, pa, w);
      const GridFunction sb = step(b, 0.0, cc.dt, pb, w);
      for (int i = 0; i < g.n; ++i) CHECK(sa[i] <= sb[i] + 1e-14);
    }
  }
}

TEST_CASE("burgers riemann shock travels at the rankine-hugoniot speed") {
  const Grid g = Grid::make(-2.0, 3.0, 1000);
  ProblemSpec p = make_problem(g, FluxSpec::burgers(), PhiSpec::zero(), OperatorKind::laplacian(),
                               [](double x) { return x < 0.0 ? 1.0 : 0.0; }, 1.0, 0.0, 1.0);
  const Trajectory traj = solve(p, 0.0, {1.0});
  const GridFunction& u = traj.at_time(1.0);
  // shock speed (f(1)-f(0))/(1-0) = 1/2; front position where u crosses 1/2
  double front = g.x_min;
  for (int i = 0; i + 1 < g.n; ++i)
    if (u[i] >= 0.5 && u[i + 1] < 0.5) {
      front = 0.5 * (g.center(i) + g.center(i + 1));
      break;
    }
  CHECK(std::abs(front - 0.5) <= 2.0 * g.h);
}

TEST_CASE("solve: degenerate horizons and snapshots") {
  const Grid g = Grid::make(-1.0, 1.0, 50);
  ProblemSpec p = make_problem(g, FluxSpec::burgers(), PhiSpec::zero(), OperatorKind::laplacian(),
                               [](double x) { return std::sin(x); }, 0.0, 0.0, 0.0);
  const Trajectory traj = solve(p, 0.0, {});
  CHECK(traj.times.size() == 1);
  CHECK(traj.times[0] == 0.0);
}

TEST_CASE("linear advection translates compact bumps") {
  double prev_err = 1e300;
  for (int n : {500, 1000}) {
    const Grid g = Grid::make(-4.0, 4.0, n);
    const BumpSpec b{-1.0, 0.6, 1.0};
    ProblemSpec p = make_problem(g, FluxSpec::linear(1.0), PhiSpec::zero(),
                                 OperatorKind::laplacian(), [&](double x) { return b(x); }, 0.0,
                                 0.0, 1.0);
    const Trajectory traj = solve(p, 0.0, {1.0});
    const GridFunction& u = traj.at_time(1.0);
    const GridFunction shifted =
        GridFunction::sample(g, [&](double x) { return b(x - 1.0); }, 0.0, 0.0);
    double err = 0.0;
    for (int i = 0; i < g.n; ++i) err += std::abs(u[i] - shifted[i]);
    err *= g.h;
    CHECK(err < prev_err * 0.8);
    prev_err = err;
  }
  CHECK(prev_err < 0.08);
}

TEST_CASE("heat equation matches the gaussian evolution oracle") {
  double prev_err = 1e300;
  for (int n : {500, 1000}) {
    const Grid g = Grid::make(-8.0, 8.0, n);
    ProblemSpec p = make_problem(g, FluxSpec::linear(0.0), PhiSpec::identity(),
                                 OperatorKind::laplacian(),
                                 [](double x) { return std::exp(-x * x); }, 0.0, 0.0, 0.1);
    const Trajectory traj = solve(p, 0.0, {0.1});
    const GridFunction& u = traj.at_time(0.1);
    double err = 0.0;
    for (int i = 0; i < g.n; ++i)
      err = std::max(err, std::abs(u[i] - oracle::gauss_evolved(g.center(i), 0.1)));
    CHECK(err < prev_err);
    prev_err = err;
  }
  CHECK(prev_err < 5e-3);
}

TEST_CASE("tvd when phi = 0 and g = 0") {
  const Grid g = Grid::make(-1.0, 1.0, 120);
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    ProblemSpec p = make_problem(g, FluxSpec::burgers(), PhiSpec::zero(), OperatorKind::laplacian(),
                                 [](double) { return 0.0; }, 0.0, 0.0, 0.25);
    p.initial = random_grid_data(g, rng, -1.0, 1.0);
    const Trajectory traj = solve(p, 0.0, {0.05, 0.1, 0.25});
    double prev = bv_seminorm(traj.states[0]);
    for (std::size_t k = 1; k < traj.states.size(); ++k) {
      const double bv = bv_seminorm(traj.states[k]);
      CHECK(bv <= prev + 1e-12);
      prev = bv;
    }
  }
}

TEST_CASE("conservation of compactly supported data") {
  SUBCASE("compact jump reach: exact") {
    const Grid g = Grid::make(-6.0, 6.0, 600);
    const LevyMeasure mu = LevyMeasure::atomic({{0.4, 1.0}, {-0.4, 1.0}});
    const BumpSpec b{0.0, 0.8, 0.5};
    ProblemSpec p = make_problem(g, FluxSpec::burgers(), PhiSpec::identity(),
                                 OperatorKind::nonlocal(mu), [&](double x) { return b(x); }, 0.0,
                                 0.0, 0.2);
    const Trajectory traj = solve(p, 2.0 * g.h, {0.2});
    double m0 = 0.0, mT = 0.0;
    for (int i = 0; i < g.n; ++i) {
      m0 += traj.states.front()[i];
      mT += traj.states.back()[i];
    }
    CHECK(std::abs(mT - m0) * g.h <= 1e-12);
  }
  SUBCASE("exponential tails: bounded by the outflow through far jumps") {
    const Grid g = Grid::make(-6.0, 6.0, 600);
    const LevyMeasure mu = LevyMeasure::tempered(1.0, 2.0, 1.0);
    const BumpSpec b{0.0, 0.8, 0.5};
    ProblemSpec p = make_problem(g, FluxSpec::burgers(), PhiSpec::identity(),
                                 OperatorKind::nonlocal(mu), [&](double x) { return b(x); }, 0.0,
                                 0.0, 0.2);
    const Trajectory traj = solve(p, default_split_r(g.h), {0.2});
    double m0 = 0.0, mT = 0.0;
    for (int i = 0; i < g.n; ++i) {
      m0 += traj.states.front()[i];
      mT += traj.states.back()[i];
    }
    // mass reaching past the boundary: || phi(u) ||_1 tail(margin) T, with a
    // margin of 4 between the (slightly spread) support and the edge
    const double outflow = m0 * g.h * tail_mass(mu, 4.0) * p.horizon;
    CHECK(std::abs(mT - m0) * g.h <= traj.leakage_bound + outflow + 1e-10);
    CHECK(std::abs(mT - m0) * g.h > 0.0);  // the outflow is real
  }
}

TEST_CASE("certified solution range bounds every snapshot") {
  const Grid g = Grid::make(-2.0, 2.0, 80);
  std::mt19937_64 rng(55);
  ProblemSpec p = make_problem(g, FluxSpec::burgers(), PhiSpec::stefan(-0.1, 0.1),
                               OperatorKind::nonlocal(LevyMeasure::tempered(1.0, 2.0, 1.0)),
                               [](double) { return 0.0; }, 0.0, 0.0, 0.3,
                               SourceSpec::bump(0.4, 0.0, 0.8, 0.15, 0.1));
  p.initial = random_grid_data(g, rng, -0.4, 0.6);
  const Trajectory traj = solve(p, default_split_r(g.h), {0.1, 0.3});
  for (const GridFunction& u : traj.states)
    for (int i = 0; i < g.n; ++i) {
      CHECK(u[i] >= p.range_lo() - 1e-12);
      CHECK(u[i] <= p.range_hi() + 1e-12);
    }
}

TEST_CASE("entropy residual") {
  const Grid g = Grid::make(-4.0, 4.0, 400);
  const LevyMeasure mu = LevyMeasure::tempered(1.0, 2.0, 1.0);

  SUBCASE("solution starting at the level k: only the source term survives") {
    ProblemSpec p = make_problem(g, FluxSpec::burgers(), PhiSpec::identity(),
                                 OperatorKind::nonlocal(mu), [](double) { return 0.4; }, 0.4, 0.4,
                                 0.5, SourceSpec::constant(0.2));
    const double split = default_split_r(g.h);
    std::vector<double> times;
    for (int k = 0; k <= 32; ++k) times.push_back(0.5 * k / 32);
    const Trajectory traj = solve(p, split, times);
    const SpaceTimeTestFn psi = bump_test_function(0.0, 1.5, 0.25, 0.2);
    // u0 == k and g >= 0 lifts u above k; every term vanishes except the
    // nonnegative source quadrature
    const ResidualReport rep = entropy_residual(traj, 0.4, psi, p, split);
    CHECK(rep.value >= -1e-12);
  }

  SUBCASE("levels below the solution recover the weak form") {
    const BumpSpec b{0.0, 0.8, 0.4};
    ProblemSpec p = make_problem(g, FluxSpec::burgers(), PhiSpec::identity(),
                                 OperatorKind::nonlocal(mu),
                                 [&](double x) { return 0.3 + b(x); }, 0.3, 0.3, 0.5);
    const double split = default_split_r(g.h);
    std::vector<double> times;
    for (int k = 0; k <= 64; ++k) times.push_back(0.5 * k / 64);
    const Trajectory traj = solve(p, split, times);
    const SpaceTimeTestFn psi = bump_test_function(0.0, 1.5, 0.25, 0.2);
    const ResidualReport rep = entropy_residual(traj, -1.0, psi, p, split);
    CHECK(std::abs(rep.value) <= rep.tolerance);
    CHECK(rep.value >= -rep.tolerance);
  }

  SUBCASE("entropy production at a burgers shock is strictly positive") {
    const Grid gs = Grid::make(-2.0, 3.0, 800);
    ProblemSpec p = make_problem(gs, FluxSpec::burgers(), PhiSpec::zero(),
                                 OperatorKind::laplacian(),
                                 [](double x) { return x < 0.0 ? 1.0 : 0.0; }, 1.0, 0.0, 1.0);
    std::vector<double> times;
    for (int k = 0; k <= 64; ++k) times.push_back(1.0 * k / 64);
    const Trajectory traj = solve(p, 0.0, times);
    // bump centered on the shock path x = t/2
    const SpaceTimeTestFn psi = bump_test_function(0.25, 0.5, 0.5, 0.3);
    const ResidualReport rep = entropy_residual(traj, 0.5, psi, p, 0.0);
    CHECK(rep.value > 0.01);
  }

  SUBCASE("test functions touching the boundary are rejected") {
    ProblemSpec p = make_problem(g, FluxSpec::burgers(), PhiSpec::zero(), OperatorKind::laplacian(),
                                 [](double) { return 0.0; }, 0.0, 0.0, 0.5);
    const Trajectory traj = solve(p, 0.0, {0.25, 0.5});
    const SpaceTimeTestFn psi = bump_test_function(3.9, 0.5, 0.25, 0.2);
    CHECK_THROWS_AS((void)entropy_residual(traj, 0.0, psi, p, 0.0), Error);
  }
}
