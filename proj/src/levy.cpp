#include "duhamel/levy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "duhamel/quadrature.hpp"

namespace duhamel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRelTol = 1e-11;
constexpr double kPi = 3.141592653589793238462643383279;

// ---------------------------------------------------------------------------
// Stable family: one-sided power integrals in closed form, 0 < a < b <= inf.

double stable_mass_side(const StableSpec& s, double a, double b) {
  const double upper = (b == kInf) ? 0.0 : std::pow(b, -s.alpha);
  return s.c / s.alpha * (std::pow(a, -s.alpha) - upper);
}

// int_a^b z * c z^{-1-alpha} dz
double stable_zmoment_side(const StableSpec& s, double a, double b) {
  if (s.alpha == 1.0) return s.c * std::log(b / a);
  const double p = 1.0 - s.alpha;
  return s.c * (std::pow(b, p) - std::pow(a, p)) / p;
}

// ---------------------------------------------------------------------------
// Tempered stable: c int z^p e^{-lambda z} dz on one side.

// From zero: p in (-1, 2). Log substitution z = e^s keeps the quadrature
// uniformly cheap as alpha -> 2 (integrand e^{(p+1)s} e^{-lambda e^s}).
double tempered_from_zero(double p, double lambda, double r) {
  const double q = p + 1.0;
  const double s_max = std::log(r);
  const double s_min = s_max + std::log(1e-18) / q;
  auto f = [p, lambda](double s) { return std::exp((p + 1.0) * s - lambda * std::exp(s)); };
  return integrate(f, s_min, s_max, kRelTol);
}

// Away from zero: 0 < a, b possibly infinite, p <= 2.
double tempered_side(double p, double lambda, double a, double b) {
  double hi = b;
  if (b == kInf) {
    double z = std::max(a, 1.0);
    while (std::exp(-lambda * (z - a)) * std::pow(z / a, std::max(p, 0.0)) > 1e-22 && z < 1e15)
      z *= 1.5;
    hi = z;
  }
  if (hi <= a) return 0.0;
  auto f = [p, lambda](double z) { return std::pow(z, p) * std::exp(-lambda * z); };
  return integrate(f, a, hi, kRelTol);
}

// ---------------------------------------------------------------------------
// Tabulated density pieces. `Moment` selects the integrand weight.

enum class Moment { mass, z_moment, z2_moment, exp_moment };

double moment_weight(Moment m, double z, double exp_rate) {
  switch (m) {
    case Moment::mass: return 1.0;
    case Moment::z_moment: return z;
    case Moment::z2_moment: return z * z;
    case Moment::exp_moment: return std::exp(exp_rate * std::abs(z));
  }
  return 0.0;
}

// Closed-form right-tail integrals int_A^B psi(z) rho_e e^{-lambda (z - z_e)} dz
// with z_e <= A <= B (B possibly infinite).
double right_tail_piece(Moment m, double rho_e, double z_e, double lambda, double A, double B,
                        double exp_rate, int z_sign) {
  if (rho_e == 0.0) return 0.0;
  if (lambda <= 0.0) return 0.0;  // decay_rate == 0 declares a compact density
  auto antider = [&](double z) -> double {
    // -int from z to infinity, i.e. F with F' = psi * e^{-lambda(z - z_e)} and F(inf) = 0.
    const double e = std::exp(-lambda * (z - z_e));
    switch (m) {
      case Moment::mass: return -e / lambda;
      case Moment::z_moment: {
        // the physical offset is z_sign * z here; psi(z) = z_sign * z
        return -z_sign * e * (z / lambda + 1.0 / (lambda * lambda));
      }
      case Moment::z2_moment:
        return -e * (z * z / lambda + 2.0 * z / (lambda * lambda) + 2.0 / (lambda * lambda * lambda));
      case Moment::exp_moment: {
        const double mu = lambda - exp_rate;  // caller guarantees mu > 0
        return -std::exp(lambda * z_e) * std::exp(-mu * z) / mu;
      }
    }
    return 0.0;
  };
  const double fb = (B == kInf) ? 0.0 : antider(B);
  return rho_e * (fb - antider(A));
}

double tabulated_piece(const TabulatedSpec& t, Moment m, double A, double B, double exp_rate) {
  double total = 0.0;
  const std::size_t K = t.nodes.size();
  // Piecewise-linear segments; the one straddling the origin carries no mass.
  for (std::size_t i = 0; i + 1 < K; ++i) {
    const double za = t.nodes[i], zb = t.nodes[i + 1];
    if (za < 0.0 && zb > 0.0) continue;
    const double lo = std::max(za, A), hi = std::min(zb, B);
    if (hi <= lo) continue;
    auto density = [&](double z) {
      const double s = (z - za) / (zb - za);
      return t.densities[i] + s * (t.densities[i + 1] - t.densities[i]);
    };
    total += 0.5 * (hi - lo) *
             (moment_weight(m, lo, exp_rate) * density(lo) + moment_weight(m, hi, exp_rate) * density(hi));
  }
  // Declared exponential tails beyond the extreme nodes.
  const double z_last = t.nodes.back(), z_first = t.nodes.front();
  if (z_last > 0.0) {
    const double lo = std::max(z_last, A), hi = B;
    if (hi > lo)
      total += right_tail_piece(m, t.densities.back(), z_last, t.decay_rate, lo, hi, exp_rate, +1);
  }
  if (z_first < 0.0) {
    // Mirror the left tail onto w = -z.
    const double lo = std::max(-z_first, -B), hi = (A == -kInf) ? kInf : -A;
    if (hi > lo)
      total += right_tail_piece(m, t.densities.front(), -z_first, t.decay_rate, lo, hi, exp_rate, -1);
  }
  return total;
}

bool tabulated_tail_diverges(const TabulatedSpec& t, double exp_rate) {
  const bool right_live = t.nodes.back() > 0.0 && t.densities.back() > 0.0;
  const bool left_live = t.nodes.front() < 0.0 && t.densities.front() > 0.0;
  if (!right_live && !left_live) return false;
  if (t.decay_rate == 0.0) return false;  // compact support, no tail at all
  return exp_rate >= t.decay_rate;
}

}  // namespace

// ---------------------------------------------------------------------------

LevyMeasure LevyMeasure::stable(double alpha, double c) {
  if (!(alpha > 0.0 && alpha < 2.0)) fail(Errc::bad_argument, "stable: alpha must lie in (0,2)");
  if (!(c > 0.0)) fail(Errc::bad_argument, "stable: c must be positive");
  return LevyMeasure(StableSpec{alpha, c});
}

LevyMeasure LevyMeasure::tempered(double alpha, double lambda, double c) {
  if (!(alpha > 0.0 && alpha < 2.0)) fail(Errc::bad_argument, "tempered: alpha must lie in (0,2)");
  if (!(lambda > 0.0)) fail(Errc::bad_argument, "tempered: lambda must be positive");
  if (!(c > 0.0)) fail(Errc::bad_argument, "tempered: c must be positive");
  return LevyMeasure(TemperedStableSpec{alpha, lambda, c});
}

LevyMeasure LevyMeasure::atomic(std::vector<Atom> atoms) {
  if (atoms.empty()) fail(Errc::bad_argument, "atomic: needs at least one atom");
  for (const Atom& a : atoms) {
    if (a.offset == 0.0) fail(Errc::bad_argument, "atomic: atom at the origin");
    if (!(a.weight > 0.0)) fail(Errc::bad_argument, "atomic: weights must be positive");
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& x, const Atom& y) { return x.offset < y.offset; });
  return LevyMeasure(AtomicSpec{std::move(atoms)});
}

LevyMeasure LevyMeasure::tabulated(std::vector<double> nodes, std::vector<double> densities,
                                   double decay_rate) {
  if (nodes.size() < 2 || nodes.size() != densities.size())
    fail(Errc::bad_argument, "tabulated: need matching nodes/densities, at least two");
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
    if (!(nodes[i] < nodes[i + 1])) fail(Errc::bad_argument, "tabulated: nodes must increase strictly");
  for (double z : nodes)
    if (z == 0.0) fail(Errc::bad_argument, "tabulated: node at the origin");
  for (double d : densities)
    if (!(d >= 0.0)) fail(Errc::bad_argument, "tabulated: densities must be nonnegative");
  if (!(decay_rate >= 0.0)) fail(Errc::bad_argument, "tabulated: decay_rate must be nonnegative");
  return LevyMeasure(TabulatedSpec{std::move(nodes), std::move(densities), decay_rate});
}

LevyMeasure LevyMeasure::stable_fractional(double alpha) {
  const double c = std::tgamma(1.0 + alpha) * std::sin(kPi * alpha / 2.0) / kPi;
  return stable(alpha, c);
}

bool LevyMeasure::symmetric() const {
  if (std::holds_alternative<StableSpec>(spec_) || std::holds_alternative<TemperedStableSpec>(spec_))
    return true;
  if (const auto* a = std::get_if<AtomicSpec>(&spec_)) {
    const auto& atoms = a->atoms;  // sorted by offset
    const std::size_t n = atoms.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (atoms[i].offset != -atoms[n - 1 - i].offset) return false;
      if (atoms[i].weight != atoms[n - 1 - i].weight) return false;
    }
    return true;
  }
  const auto& t = std::get<TabulatedSpec>(spec_);
  const std::size_t n = t.nodes.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (t.nodes[i] != -t.nodes[n - 1 - i]) return false;
    if (t.densities[i] != t.densities[n - 1 - i]) return false;
  }
  return true;
}

LevyMeasure LevyMeasure::reflected() const {
  if (const auto* a = std::get_if<AtomicSpec>(&spec_)) {
    std::vector<Atom> atoms = a->atoms;
    for (Atom& at : atoms) at.offset = -at.offset;
    return atomic(std::move(atoms));
  }
  if (const auto* t = std::get_if<TabulatedSpec>(&spec_)) {
    std::vector<double> nodes(t->nodes.rbegin(), t->nodes.rend());
    for (double& z : nodes) z = -z;
    std::vector<double> dens(t->densities.rbegin(), t->densities.rend());
    return tabulated(std::move(nodes), std::move(dens), t->decay_rate);
  }
  return *this;  // stable / tempered are symmetric
}

double LevyMeasure::mass(double a, double b) const {
  if (a > b) fail(Errc::bad_argument, "mass: a > b");
  if (a < 0.0 && b > 0.0) fail(Errc::bad_argument, "mass: interval contains the origin");
  if (a == b) return 0.0;
  if (b <= 0.0) return reflected().mass(b == 0.0 ? 0.0 : -b, -a);
  // now 0 <= a < b
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, StableSpec>) {
          if (a == 0.0) fail(Errc::divergent_moment, "stable mass touches the origin");
          return stable_mass_side(s, a, b);
        } else if constexpr (std::is_same_v<T, TemperedStableSpec>) {
          if (a == 0.0) fail(Errc::divergent_moment, "tempered mass touches the origin");
          return s.c * tempered_side(-1.0 - s.alpha, s.lambda, a, b);
        } else if constexpr (std::is_same_v<T, AtomicSpec>) {
          double m = 0.0;
          for (const Atom& at : s.atoms)
            if (at.offset > a && at.offset <= b) m += at.weight;
          return m;
        } else {
          return tabulated_piece(s, Moment::mass, a, b, 0.0);
        }
      },
      spec_);
}

double LevyMeasure::first_moment(double a, double b) const {
  if (a > b) fail(Errc::bad_argument, "first_moment: a > b");
  if (a < 0.0 && b > 0.0) fail(Errc::bad_argument, "first_moment: interval contains the origin");
  if (a == b) return 0.0;
  if (b <= 0.0) return -reflected().first_moment(b == 0.0 ? 0.0 : -b, -a);
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, StableSpec>) {
          if (a == 0.0 && s.alpha >= 1.0)
            fail(Errc::divergent_moment, "stable first moment touches the origin");
          return stable_zmoment_side(s, std::max(a, 0.0) == 0.0 ? 1e-300 : a, b);
        } else if constexpr (std::is_same_v<T, TemperedStableSpec>) {
          if (a == 0.0) {
            if (s.alpha >= 1.0)
              fail(Errc::divergent_moment, "tempered first moment touches the origin");
            return s.c * tempered_from_zero(-s.alpha, s.lambda, b);
          }
          return s.c * tempered_side(-s.alpha, s.lambda, a, b);
        } else if constexpr (std::is_same_v<T, AtomicSpec>) {
          double m = 0.0;
          for (const Atom& at : s.atoms)
            if (at.offset > a && at.offset <= b) m += at.weight * at.offset;
          return m;
        } else {
          return tabulated_piece(s, Moment::z_moment, a, b, 0.0);
        }
      },
      spec_);
}

// ---------------------------------------------------------------------------

double second_moment_near(const LevyMeasure& mu, double r) {
  if (!(r > 0.0)) fail(Errc::bad_argument, "second_moment_near: r must be positive");
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, StableSpec>) {
          return 2.0 * s.c * std::pow(r, 2.0 - s.alpha) / (2.0 - s.alpha);
        } else if constexpr (std::is_same_v<T, TemperedStableSpec>) {
          return 2.0 * s.c * tempered_from_zero(1.0 - s.alpha, s.lambda, r);
        } else if constexpr (std::is_same_v<T, AtomicSpec>) {
          double m = 0.0;
          for (const Atom& at : s.atoms)
            if (std::abs(at.offset) <= r) m += at.weight * at.offset * at.offset;
          return m;
        } else {
          return tabulated_piece(s, Moment::z2_moment, 0.0, r, 0.0) +
                 tabulated_piece(s, Moment::z2_moment, -r, 0.0, 0.0);
        }
      },
      mu.spec());
}

double tail_mass(const LevyMeasure& mu, double r) {
  if (!(r > 0.0)) fail(Errc::bad_argument, "tail_mass: r must be positive");
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, StableSpec>) {
          return 2.0 * stable_mass_side(s, r, kInf);
        } else if constexpr (std::is_same_v<T, TemperedStableSpec>) {
          return 2.0 * s.c * tempered_side(-1.0 - s.alpha, s.lambda, r, kInf);
        } else if constexpr (std::is_same_v<T, AtomicSpec>) {
          double m = 0.0;
          for (const Atom& at : s.atoms)
            if (std::abs(at.offset) > r) m += at.weight;
          return m;
        } else {
          return tabulated_piece(s, Moment::mass, r, kInf, 0.0) +
                 tabulated_piece(s, Moment::mass, -kInf, -r, 0.0);
        }
      },
      mu.spec());
}

double drift_correction(const LevyMeasure& mu, double r) {
  if (!(r > 0.0)) fail(Errc::bad_argument, "drift_correction: r must be positive");
  if (r >= 1.0) return 0.0;
  if (mu.symmetric()) return 0.0;  // odd integrand
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, AtomicSpec>) {
          double m = 0.0;
          for (const Atom& at : s.atoms) {
            const double az = std::abs(at.offset);
            if (az > r && az <= 1.0) m += at.weight * at.offset;
          }
          return -m;
        } else if constexpr (std::is_same_v<T, TabulatedSpec>) {
          return -(tabulated_piece(s, Moment::z_moment, r, 1.0, 0.0) +
                   tabulated_piece(s, Moment::z_moment, -1.0, -r, 0.0));
        } else {
          return 0.0;  // unreachable (stable/tempered are symmetric)
        }
      },
      mu.spec());
}

bool is_tempered(const LevyMeasure& mu, double exp_rate) {
  if (exp_rate == 0.0) return true;
  return std::visit(
      [&](const auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, StableSpec>) {
          return false;
        } else if constexpr (std::is_same_v<T, TemperedStableSpec>) {
          return exp_rate <= s.lambda;
        } else if constexpr (std::is_same_v<T, AtomicSpec>) {
          return true;
        } else {
          return !tabulated_tail_diverges(s, exp_rate);
        }
      },
      mu.spec());
}

double exponential_moment(const LevyMeasure& mu, double exp_rate) {
  if (!(exp_rate >= 0.0)) fail(Errc::bad_argument, "exponential_moment: rate must be nonnegative");
  if (!is_tempered(mu, exp_rate))
    fail(Errc::divergent_moment, "exponential moment diverges at the requested rate");
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, StableSpec>) {
          return 2.0 * stable_mass_side(s, 1.0, kInf);  // exp_rate == 0
        } else if constexpr (std::is_same_v<T, TemperedStableSpec>) {
          if (exp_rate == s.lambda) return 2.0 * s.c / s.alpha;  // pure power tail
          return 2.0 * s.c * tempered_side(-1.0 - s.alpha, s.lambda - exp_rate, 1.0, kInf);
        } else if constexpr (std::is_same_v<T, AtomicSpec>) {
          double m = 0.0;
          for (const Atom& at : s.atoms)
            if (std::abs(at.offset) > 1.0) m += at.weight * std::exp(exp_rate * std::abs(at.offset));
          return m;
        } else {
          return tabulated_piece(s, Moment::exp_moment, 1.0, kInf, exp_rate) +
                 tabulated_piece(s, Moment::exp_moment, -kInf, -1.0, exp_rate);
        }
      },
      mu.spec());
}

// ---------------------------------------------------------------------------

LevyMeasure OperatorKind::effective_measure() const {
  if (local()) fail(Errc::bad_argument, "effective_measure: local operator has no measure");
  return adjoint ? measure->reflected() : *measure;
}

SupersolutionConstants supersolution_constants(const OperatorKind& dual_op, double exp_rate,
                                               double phi0_sup, double phi0_radius) {
  if (!(phi0_sup > 0.0)) fail(Errc::bad_argument, "supersolution_constants: phi0_sup must be positive");
  if (!(phi0_radius > 0.0))
    fail(Errc::bad_argument, "supersolution_constants: phi0_radius must be positive");

  SupersolutionConstants out;
  if (dual_op.local()) {
    out.k = 1.0;
    out.C_k = 1.0;  // (Delta w)^+ slack is w(K - k^2); k = 1 gives K = 1
    out.K = 1.0;
    out.C = phi0_sup * std::exp(out.k * phi0_radius);
    return out;
  }
  if (!(exp_rate > 0.0))
    fail(Errc::not_tempered, "nonlocal barrier needs a positive exponential rate");
  const LevyMeasure mu = dual_op.effective_measure();
  double expmom;
  try {
    expmom = exponential_moment(mu, exp_rate);
  } catch (const Error& e) {
    if (e.code() == Errc::divergent_moment)
      fail(Errc::not_tempered, "measure has no finite exponential moment at the requested rate");
    throw;
  }
  const double k = exp_rate;
  out.k = k;
  out.C_k = 0.5 * std::exp(k) * k * k * second_moment_near(mu, 1.0) + expmom;
  out.K = out.C_k;
  out.C = phi0_sup * std::exp(k * phi0_radius);
  return out;
}

}  // namespace duhamel
