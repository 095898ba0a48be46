#include "duhamel/operator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace duhamel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCutoffMass = 1e-12;

// Cell m covers (m h - h/2, m h + h/2]. Aggregate mu restricted to
// {z > lo_bound} (positive side) over cells, mirrored for the negative side.
// Cells past the grid width collapse into a single far entry at +-(n+1).
void side_jump_table(const LevyMeasure& mu, double h, double lo_bound, int n_cells, int sign,
                     std::vector<JumpEntry>& out, double& neglected) {
  const double side_total = sign > 0 ? mu.mass(lo_bound, kInf) : mu.mass(-kInf, -lo_bound);
  double remaining = side_total;
  if (remaining <= kCutoffMass) {
    neglected += std::max(remaining, 0.0);
    return;
  }
  const std::int64_t cap = n_cells;  // beyond this every read is far-field
  std::int64_t m = static_cast<std::int64_t>(std::floor(lo_bound / h - 0.5)) + 1;
  if (m < 1) m = 1;
  for (; m <= cap && remaining > kCutoffMass; ++m) {
    const double lo = std::max(m * h - 0.5 * h, lo_bound);
    const double hi = m * h + 0.5 * h;
    if (hi <= lo) continue;
    const double w = sign > 0 ? mu.mass(lo, hi) : mu.mass(-hi, -lo);
    if (w > 0.0) {
      out.push_back({sign * m, w});
      remaining -= w;
    }
  }
  if (remaining > kCutoffMass) {
    // Exact far-field aggregate: the edge of the last enumerated cell onward.
    const double edge = std::max((static_cast<double>(m) - 0.5) * h, lo_bound);
    const double w = sign > 0 ? mu.mass(edge, kInf) : mu.mass(-kInf, -edge);
    if (w > 0.0) out.push_back({sign * (cap + 1), w});
  } else {
    neglected += std::max(remaining, 0.0);
  }
}

void finalize(OperatorWeights& w) {
  double total = 0.0;
  for (const JumpEntry& j : w.jumps) total += j.weight;
  w.total_jump_mass = total;
}

}  // namespace

OperatorWeights discretize(const OperatorKind& op, const Grid& grid, double split_r) {
  OperatorWeights w;
  w.h = grid.h;
  w.split_r = split_r;
  if (op.local()) {
    w.local_coeff = 1.0;
    return w;
  }
  if (split_r < grid.h)
    fail(Errc::split_too_small, "nonlocal split radius below one cell width");
  const LevyMeasure mu = op.effective_measure();
  w.local_coeff = 0.5 * second_moment_near(mu, split_r);
  w.drift = drift_correction(mu, split_r);
  side_jump_table(mu, grid.h, split_r, grid.n, +1, w.jumps, w.neglected_tail_mass);
  side_jump_table(mu, grid.h, split_r, grid.n, -1, w.jumps, w.neglected_tail_mass);
  finalize(w);
  return w;
}

OperatorWeights discretize_small_jump(const LevyMeasure& mu, const Grid& grid, double r) {
  const double h = grid.h;
  OperatorWeights w;
  w.h = h;
  w.split_r = r;
  w.local_coeff = 0.5 * second_moment_near(mu, std::min(r, 0.5 * h));
  if (r > 0.5 * h) {
    const std::int64_t m_max = static_cast<std::int64_t>(std::ceil(r / h + 0.5));
    for (int sign : {+1, -1}) {
      for (std::int64_t m = 1; m <= m_max; ++m) {
        const double lo = std::max(m * h - 0.5 * h, 0.5 * h);
        const double hi = std::min(m * h + 0.5 * h, r);
        if (hi <= lo) continue;
        const double weight = sign > 0 ? mu.mass(lo, hi) : mu.mass(-hi, -lo);
        if (weight > 0.0) w.jumps.push_back({sign * m, weight});
      }
    }
    // Compensator over the aggregated cells, |z| <= 1 only.
    const double b_hi = std::min(r, 1.0);
    if (b_hi > 0.5 * h)
      w.drift = -(mu.first_moment(0.5 * h, b_hi) + mu.first_moment(-b_hi, -0.5 * h));
  }
  finalize(w);
  return w;
}

OperatorWeights discretize_large_jump(const LevyMeasure& mu, const Grid& grid, double r) {
  OperatorWeights w;
  w.h = grid.h;
  w.split_r = r;
  side_jump_table(mu, grid.h, r, grid.n, +1, w.jumps, w.neglected_tail_mass);
  side_jump_table(mu, grid.h, r, grid.n, -1, w.jumps, w.neglected_tail_mass);
  finalize(w);
  return w;
}

namespace {

template <bool Upwind>
GridFunction apply_impl(const OperatorWeights& w, const GridFunction& f) {
  const int n = f.n();
  const double h = f.h();
  const double fl = f.far_left();
  const double fr = f.far_right();
  const double* v = f.values().data();
  std::vector<double> out(n, 0.0);

  // Difference form throughout: constants are annihilated bitwise.
  const double cl = w.local_coeff / (h * h);
  for (int i = 0; i < n; ++i) {
    const double left = i > 0 ? v[i - 1] : fl;
    const double right = i + 1 < n ? v[i + 1] : fr;
    out[i] = cl * ((left - v[i]) + (right - v[i]));
  }
  if (w.drift != 0.0) {
    if constexpr (Upwind) {
      if (w.drift > 0.0) {
        const double c = w.drift / h;
        for (int i = 0; i < n; ++i) {
          const double right = i + 1 < n ? v[i + 1] : fr;
          out[i] += c * (right - v[i]);
        }
      } else {
        const double c = -w.drift / h;
        for (int i = 0; i < n; ++i) {
          const double left = i > 0 ? v[i - 1] : fl;
          out[i] += c * (left - v[i]);
        }
      }
    } else {
      const double c = w.drift / (2.0 * h);
      for (int i = 0; i < n; ++i) {
        const double left = i > 0 ? v[i - 1] : fl;
        const double right = i + 1 < n ? v[i + 1] : fr;
        out[i] += c * (right - left);
      }
    }
  }

  for (const JumpEntry& j : w.jumps) {
    const double wt = j.weight;
    const std::int64_t m = j.offset;
    if (m >= n) {
      for (int i = 0; i < n; ++i) out[i] += wt * (fr - v[i]);
    } else if (m <= -n) {
      for (int i = 0; i < n; ++i) out[i] += wt * (fl - v[i]);
    } else if (m > 0) {
      const int mid_end = n - static_cast<int>(m);
      for (int i = 0; i < mid_end; ++i) out[i] += wt * (v[i + m] - v[i]);
      for (int i = std::max(mid_end, 0); i < n; ++i) out[i] += wt * (fr - v[i]);
    } else {
      const int mid_begin = static_cast<int>(-m);
      for (int i = 0; i < std::min(mid_begin, n); ++i) out[i] += wt * (fl - v[i]);
      for (int i = mid_begin; i < n; ++i) out[i] += wt * (v[i + m] - v[i]);
    }
  }
  return GridFunction(f.grid(), std::move(out), 0.0, 0.0);
}

}  // namespace

GridFunction apply(const OperatorWeights& w, const GridFunction& f) {
  return apply_impl<false>(w, f);
}

GridFunction apply_upwind(const OperatorWeights& w, const GridFunction& f) {
  return apply_impl<true>(w, f);
}

GridFunction second_difference(const GridFunction& f) {
  const int n = f.n();
  const double h2 = f.h() * f.h();
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    const double left = i > 0 ? f[i - 1] : f.far_left();
    const double right = i + 1 < n ? f[i + 1] : f.far_right();
    out[i] = (right - 2.0 * f[i] + left) / h2;
  }
  return GridFunction(f.grid(), std::move(out), 0.0, 0.0);
}

OperatorBoundReport operator_l1_bound_check(const LevyMeasure& mu, const GridFunction& f,
                                            double r_small, double r_large) {
  if (!(r_small < 1.0)) fail(Errc::bad_argument, "small-jump bound needs r < 1");
  if (!(r_large > 1.0)) fail(Errc::bad_argument, "large-jump bound needs r > 1");
  if (f.far_left() != 0.0 || f.far_right() != 0.0)
    fail(Errc::bad_argument, "operator bounds need compactly supported f");

  OperatorBoundReport rep;
  rep.r_small = r_small;
  rep.r_large = r_large;
  const Grid& g = f.grid();
  const double h = g.h;

  const GridFunction d2f = second_difference(f);
  const double d2_l1 = l1_norm(d2f);
  const double smn = second_moment_near(mu, r_small);
  rep.lhs_small = l1_norm(apply(discretize_small_jump(mu, g, r_small), f));
  rep.rhs_small = 0.5 * d2_l1 * smn;
  rep.tol_small = 10.0 * h * (rep.rhs_small + smn * bv_seminorm(d2f));

  const double tm = tail_mass(mu, r_large);
  rep.lhs_large = l1_norm(apply(discretize_large_jump(mu, g, r_large), f));
  rep.rhs_large = 2.0 * l1_norm(f) * tm;
  rep.tol_large = 10.0 * h * tm * std::max(bv_seminorm(f), l1_norm(f));

  rep.pass_small = rep.lhs_small <= rep.rhs_small + rep.tol_small;
  rep.pass_large = rep.lhs_large <= rep.rhs_large + rep.tol_large;
  rep.tolerance_formula =
      "tol_small = 10 h (rhs_small + smn(r_small) |D2 f|_BV); "
      "tol_large = 10 h tail(r_large) max(|f|_BV, ||f||_1)";
  return rep;
}

}  // namespace duhamel
