#pragma once

#include <algorithm>
#include <cmath>

#include "duhamel/flux.hpp"
#include "duhamel/grid.hpp"
#include "duhamel/levy.hpp"
#include "duhamel/mollifier.hpp"

namespace duhamel {

/// Source term g(x,t) with certified bounds: the time integral of the sup
/// norm (the admissibility quantity), pointwise inf/sup at fixed time, and
/// the time integral of the spatial BV seminorm. Three shapes cover the
/// verification scenarios: zero, a constant, and a separable space-time bump
///   amp * (1-((x-xc)/xw)^2)^4_+ * (1-((t-tc)/tw)^2)^4_+.
class SourceSpec {
 public:
  enum class Kind { zero, constant, bump };

  static SourceSpec zero() { return SourceSpec(Kind::zero, 0, 0, 0, 0, 0); }
  static SourceSpec constant(double c) { return SourceSpec(Kind::constant, c, 0, 0, 0, 0); }
  static SourceSpec bump(double amp, double xc, double xw, double tc, double tw) {
    if (!(xw > 0.0 && tw > 0.0)) fail(Errc::bad_argument, "source bump: widths must be positive");
    return SourceSpec(Kind::bump, amp, xc, xw, tc, tw);
  }

  Kind kind() const { return kind_; }
  bool trivial() const { return kind_ == Kind::zero; }

  double operator()(double x, double t) const {
    switch (kind_) {
      case Kind::zero: return 0.0;
      case Kind::constant: return amp_;
      case Kind::bump: return amp_ * poly_bump((x - xc_) / xw_) * poly_bump((t - tc_) / tw_);
    }
    return 0.0;
  }

  /// int_0^T ||g(.,t)||_inf dt, exact per shape.
  double linf_time_integral(double T) const {
    switch (kind_) {
      case Kind::zero: return 0.0;
      case Kind::constant: return std::abs(amp_) * T;
      case Kind::bump:
        return std::abs(amp_) * tw_ *
               (poly_bump_antideriv((T - tc_) / tw_) - poly_bump_antideriv((0.0 - tc_) / tw_));
    }
    return 0.0;
  }

  double inf_at(double t) const {
    switch (kind_) {
      case Kind::zero: return 0.0;
      case Kind::constant: return amp_;
      case Kind::bump: return std::min(0.0, amp_ * poly_bump((t - tc_) / tw_));
    }
    return 0.0;
  }

  double sup_at(double t) const {
    switch (kind_) {
      case Kind::zero: return 0.0;
      case Kind::constant: return amp_;
      case Kind::bump: return std::max(0.0, amp_ * poly_bump((t - tc_) / tw_));
    }
    return 0.0;
  }

  /// int_0^T |g(.,t)|_BV dt; the space profile has total variation 2|amp|B(t).
  double bv_time_integral(double T) const {
    if (kind_ != Kind::bump) return 0.0;
    return 2.0 * std::abs(amp_) * tw_ *
           (poly_bump_antideriv((T - tc_) / tw_) - poly_bump_antideriv((0.0 - tc_) / tw_));
  }

  /// int_0^t inf_x g(., s) ds and the sup counterpart, exact per shape.
  double inf_time_integral(double t) const {
    switch (kind_) {
      case Kind::zero: return 0.0;
      case Kind::constant: return amp_ * t;
      case Kind::bump:
        if (amp_ >= 0.0) return 0.0;
        return amp_ * tw_ *
               (poly_bump_antideriv((t - tc_) / tw_) - poly_bump_antideriv((0.0 - tc_) / tw_));
    }
    return 0.0;
  }
  double sup_time_integral(double t) const {
    switch (kind_) {
      case Kind::zero: return 0.0;
      case Kind::constant: return amp_ * t;
      case Kind::bump:
        if (amp_ <= 0.0) return 0.0;
        return amp_ * tw_ *
               (poly_bump_antideriv((t - tc_) / tw_) - poly_bump_antideriv((0.0 - tc_) / tw_));
    }
    return 0.0;
  }

  /// Lipschitz constant of t -> sup_x |g(x,t)| (bump profile slope 1.8733).
  double time_lipschitz() const {
    if (kind_ != Kind::bump) return 0.0;
    return std::abs(amp_) * 1.8733 / tw_;
  }

 private:
  SourceSpec(Kind k, double amp, double xc, double xw, double tc, double tw)
      : kind_(k), amp_(amp), xc_(xc), xw_(xw), tc_(tc), tw_(tw) {}
  Kind kind_;
  double amp_, xc_, xw_, tc_, tw_;
};

/// One Cauchy problem: flux, diffusion nonlinearity, operator, source,
/// initial datum (with far fields) and horizon.
struct ProblemSpec {
  FluxSpec flux = FluxSpec::burgers();
  PhiSpec phi = PhiSpec::zero();
  OperatorKind op = OperatorKind::laplacian();
  SourceSpec source = SourceSpec::zero();
  GridFunction initial;
  double horizon = 1.0;

  /// Certified range of the solution on [0, horizon] (max principle:
  /// initial range widened by the source budget).
  double range_lo() const {
    const double m = std::min({initial.min_value(), initial.far_left(), initial.far_right()});
    return m - source.linf_time_integral(horizon);
  }
  double range_hi() const {
    const double m = std::max({initial.max_value(), initial.far_left(), initial.far_right()});
    return m + source.linf_time_integral(horizon);
  }
};

}  // namespace duhamel
