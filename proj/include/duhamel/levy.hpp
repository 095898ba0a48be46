#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "duhamel/errors.hpp"

namespace duhamel {

// A Levy measure on R\{0}: positive, finite second moment near the origin,
// finite mass away from it. Four concrete families are supported.

struct StableSpec {
  double alpha;  // in (0,2)
  double c;      // d mu = c |z|^{-1-alpha} dz
};

struct TemperedStableSpec {
  double alpha;   // in (0,2)
  double lambda;  // > 0
  double c;       // d mu = c e^{-lambda|z|} |z|^{-1-alpha} dz
};

struct Atom {
  double offset;  // != 0
  double weight;  // > 0
};

struct AtomicSpec {
  std::vector<Atom> atoms;
};

/// Piecewise-linear density on strictly increasing nodes (0 excluded).
/// Beyond the extreme nodes the density continues as
/// rho_end * e^{-decay_rate (|z| - |z_end|)}; decay_rate == 0 declares a
/// compactly supported density (no tail). The segment of the node range that
/// straddles 0 carries no mass. Integration is trapezoid on the nodes plus
/// the declared tail in closed form; accuracy is first order in node spacing.
struct TabulatedSpec {
  std::vector<double> nodes;
  std::vector<double> densities;
  double decay_rate;
};

class LevyMeasure {
 public:
  using Spec = std::variant<StableSpec, TemperedStableSpec, AtomicSpec, TabulatedSpec>;

  static LevyMeasure stable(double alpha, double c);
  static LevyMeasure tempered(double alpha, double lambda, double c);
  static LevyMeasure atomic(std::vector<Atom> atoms);
  static LevyMeasure tabulated(std::vector<double> nodes, std::vector<double> densities,
                               double decay_rate);

  /// The alpha-stable measure normalized so that the generated operator is
  /// the 1-D fractional Laplacian with Fourier symbol -|2 pi xi|^alpha:
  /// c = Gamma(1+alpha) sin(pi alpha / 2) / pi.
  static LevyMeasure stable_fractional(double alpha);

  const Spec& spec() const { return spec_; }
  bool symmetric() const;

  /// mu* with mu*(B) = mu(-B).
  LevyMeasure reflected() const;

  /// mu((a,b]) for an interval with 0 outside [a,b]. b may be +infinity.
  double mass(double a, double b) const;

  /// int_(a,b] z dmu for an interval with 0 outside [a,b].
  double first_moment(double a, double b) const;

 private:
  explicit LevyMeasure(Spec spec) : spec_(std::move(spec)) {}
  Spec spec_;
};

/// int_{0<|z|<=r} |z|^2 dmu. Closed form for the stable family, adaptive
/// quadrature (rel. 1e-10) for tempered stable, exact sums for atoms.
double second_moment_near(const LevyMeasure& mu, double r);

/// int_{|z|>r} dmu. Finite for every admissible measure.
double tail_mass(const LevyMeasure& mu, double r);

/// -int_{r<|z|<=1} z dmu. Exactly 0 for r >= 1 and for symmetric measures.
double drift_correction(const LevyMeasure& mu, double r);

/// int_{|z|>1} e^{M|z|} dmu when finite; throws Errc::divergent_moment
/// otherwise (e.g. any stable measure with M > 0).
double exponential_moment(const LevyMeasure& mu, double exp_rate);

/// Does exponential_moment(mu, exp_rate) converge?
bool is_tempered(const LevyMeasure& mu, double exp_rate);

struct OperatorKind {
  // Local Laplacian when `measure` is empty, nonlocal jump operator
  // otherwise. `adjoint` replaces mu by its reflection mu*; it has no effect
  // on the (self-adjoint) Laplacian.
  std::optional<LevyMeasure> measure;
  bool adjoint = false;

  static OperatorKind laplacian() { return OperatorKind{}; }
  static OperatorKind nonlocal(LevyMeasure mu, bool adjoint = false) {
    return OperatorKind{std::move(mu), adjoint};
  }

  bool local() const { return !measure.has_value(); }
  OperatorKind adjoint_of() const {
    OperatorKind k = *this;
    k.adjoint = !k.adjoint;
    return k;
  }
  /// The measure actually integrated against (reflected when adjoint).
  LevyMeasure effective_measure() const;
};

/// Constants (k, K, C, C_k) of the exponential barrier w = C e^{Kt} e^{-k|x|}
/// dominating the dual solution: k as large and K as small as admissible,
///   k = exp_rate,  C_k = (e^k/2) k^2 int_{0<|z|<=1}|z|^2 dmu*
///                        + int_{|z|>1} e^{exp_rate |z|} dmu*,  K = C_k
/// for the nonlocal operator, and k = 1, K = k^2 = 1 for the Laplacian.
/// C = phi0_sup * e^{k*phi0_radius} so that any initial bump bounded by
/// phi0_sup and supported in B(0, phi0_radius) sits below w(., 0).
struct SupersolutionConstants {
  double k;
  double K;
  double C;
  double C_k;
};

SupersolutionConstants supersolution_constants(const OperatorKind& dual_op, double exp_rate,
                                               double phi0_sup, double phi0_radius);

}  // namespace duhamel
