#include "duhamel/flux.hpp"

#include <algorithm>
#include <cmath>

namespace duhamel {

FluxSpec FluxSpec::burgers() { return FluxSpec(Kind::burgers, 0.0); }

FluxSpec FluxSpec::linear(double a) {
  if (!std::isfinite(a)) fail(Errc::bad_argument, "linear flux: speed must be finite");
  return FluxSpec(Kind::linear, a);
}

FluxSpec FluxSpec::tabulated(std::vector<double> u_nodes, std::vector<double> f_values) {
  if (u_nodes.size() < 2 || u_nodes.size() != f_values.size())
    fail(Errc::bad_argument, "tabulated flux: need matching nodes/values, at least two");
  for (std::size_t i = 0; i + 1 < u_nodes.size(); ++i)
    if (!(u_nodes[i] < u_nodes[i + 1]))
      fail(Errc::bad_argument, "tabulated flux: nodes must increase strictly");
  FluxSpec s(Kind::tabulated, 0.0);
  s.u_ = std::move(u_nodes);
  s.f_ = std::move(f_values);

  // Normalize f(0) = 0 by subtracting the interpolated value at u = 0.
  const auto interp0 = [&]() {
    const auto& u = s.u_;
    const auto& f = s.f_;
    if (0.0 <= u.front()) return f.front() + (0.0 - u.front()) * (f[1] - f[0]) / (u[1] - u[0]);
    if (0.0 >= u.back()) {
      const std::size_t k = u.size() - 2;
      return f[k] + (0.0 - u[k]) * (f[k + 1] - f[k]) / (u[k + 1] - u[k]);
    }
    std::size_t k = 0;
    while (u[k + 1] < 0.0) ++k;
    return f[k] + (0.0 - u[k]) * (f[k + 1] - f[k]) / (u[k + 1] - u[k]);
  }();
  for (double& v : s.f_) v -= interp0;

  // EO cumulative parts at the nodes, anchored so that eval at u=0 gives 0.
  const std::size_t n = s.u_.size();
  s.pos_.assign(n, 0.0);
  s.neg_.assign(n, 0.0);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double slope = (s.f_[k + 1] - s.f_[k]) / (s.u_[k + 1] - s.u_[k]);
    const double du = s.u_[k + 1] - s.u_[k];
    s.pos_[k + 1] = s.pos_[k] + std::max(slope, 0.0) * du;
    s.neg_[k + 1] = s.neg_[k] + std::min(slope, 0.0) * du;
  }
  const double p0 = s.eval_pos(0.0), n0 = s.eval_neg(0.0);
  for (double& v : s.pos_) v -= p0;
  for (double& v : s.neg_) v -= n0;
  return s;
}

double FluxSpec::operator()(double u) const {
  switch (kind_) {
    case Kind::burgers: return 0.5 * u * u;
    case Kind::linear: return a_ * u;
    case Kind::tabulated: break;
  }
  // piecewise linear, end slopes extended
  if (u <= u_.front()) {
    const double s = (f_[1] - f_[0]) / (u_[1] - u_[0]);
    return f_.front() + (u - u_.front()) * s;
  }
  if (u >= u_.back()) {
    const std::size_t k = u_.size() - 2;
    const double s = (f_[k + 1] - f_[k]) / (u_[k + 1] - u_[k]);
    return f_.back() + (u - u_.back()) * s;
  }
  const std::size_t k =
      static_cast<std::size_t>(std::upper_bound(u_.begin(), u_.end(), u) - u_.begin()) - 1;
  const double s = (f_[k + 1] - f_[k]) / (u_[k + 1] - u_[k]);
  return f_[k] + (u - u_[k]) * s;
}

double FluxSpec::lipschitz_on(double lo, double hi) const {
  if (lo > hi) std::swap(lo, hi);
  switch (kind_) {
    case Kind::burgers: return std::max(std::abs(lo), std::abs(hi));
    case Kind::linear: return std::abs(a_);
    case Kind::tabulated: break;
  }
  double L = 0.0;
  for (std::size_t k = 0; k + 1 < u_.size(); ++k) {
    if (u_[k + 1] < lo || u_[k] > hi) continue;
    L = std::max(L, std::abs((f_[k + 1] - f_[k]) / (u_[k + 1] - u_[k])));
  }
  if (lo < u_.front()) L = std::max(L, std::abs((f_[1] - f_[0]) / (u_[1] - u_[0])));
  if (hi > u_.back()) {
    const std::size_t k = u_.size() - 2;
    L = std::max(L, std::abs((f_[k + 1] - f_[k]) / (u_[k + 1] - u_[k])));
  }
  return L;
}

double FluxSpec::eval_pos(double u) const {
  // int_0^u max(f',0), piecewise linear with node values pos_.
  const auto cum = [&](double x) {
    if (x <= u_.front()) {
      const double s = std::max((f_[1] - f_[0]) / (u_[1] - u_[0]), 0.0);
      return pos_.front() + (x - u_.front()) * s;
    }
    if (x >= u_.back()) {
      const std::size_t k = u_.size() - 2;
      const double s = std::max((f_[k + 1] - f_[k]) / (u_[k + 1] - u_[k]), 0.0);
      return pos_.back() + (x - u_.back()) * s;
    }
    const std::size_t k =
        static_cast<std::size_t>(std::upper_bound(u_.begin(), u_.end(), x) - u_.begin()) - 1;
    const double s = std::max((f_[k + 1] - f_[k]) / (u_[k + 1] - u_[k]), 0.0);
    return pos_[k] + (x - u_[k]) * s;
  };
  return cum(u);
}

double FluxSpec::eval_neg(double u) const {
  const auto cum = [&](double x) {
    if (x <= u_.front()) {
      const double s = std::min((f_[1] - f_[0]) / (u_[1] - u_[0]), 0.0);
      return neg_.front() + (x - u_.front()) * s;
    }
    if (x >= u_.back()) {
      const std::size_t k = u_.size() - 2;
      const double s = std::min((f_[k + 1] - f_[k]) / (u_[k + 1] - u_[k]), 0.0);
      return neg_.back() + (x - u_.back()) * s;
    }
    const std::size_t k =
        static_cast<std::size_t>(std::upper_bound(u_.begin(), u_.end(), x) - u_.begin()) - 1;
    const double s = std::min((f_[k + 1] - f_[k]) / (u_[k + 1] - u_[k]), 0.0);
    return neg_[k] + (x - u_[k]) * s;
  };
  return cum(u);
}

double FluxSpec::eo(double a, double b) const {
  switch (kind_) {
    case Kind::burgers: {
      const double ap = std::max(a, 0.0);
      const double bm = std::min(b, 0.0);
      return 0.5 * ap * ap + 0.5 * bm * bm;
    }
    case Kind::linear:
      return a_ > 0.0 ? a_ * a : a_ * b;
    case Kind::tabulated:
      return eval_pos(a) + eval_neg(b);
  }
  return 0.0;
}

// ---------------------------------------------------------------------------

PhiSpec PhiSpec::zero() { return PhiSpec(Kind::zero, 0.0, 0.0); }
PhiSpec PhiSpec::identity() { return PhiSpec(Kind::identity, 0.0, 0.0); }

PhiSpec PhiSpec::power(double m) {
  if (!(m >= 1.0)) fail(Errc::bad_argument, "power nonlinearity: exponent must be >= 1");
  return PhiSpec(Kind::power, m, 0.0);
}

PhiSpec PhiSpec::stefan(double a, double b) {
  if (!(a <= 0.0 && 0.0 <= b)) fail(Errc::bad_argument, "stefan plateau must contain 0");
  return PhiSpec(Kind::stefan, a, b);
}

double PhiSpec::operator()(double u) const {
  switch (kind_) {
    case Kind::zero: return 0.0;
    case Kind::identity: return u;
    case Kind::power: return std::pow(std::abs(u), a_ - 1.0) * u;
    case Kind::stefan:
      if (u < a_) return u - a_;
      if (u > b_) return u - b_;
      return 0.0;
  }
  return 0.0;
}

double PhiSpec::lipschitz_on(double lo, double hi) const {
  if (lo > hi) std::swap(lo, hi);
  switch (kind_) {
    case Kind::zero: return 0.0;
    case Kind::identity: return 1.0;
    case Kind::power: {
      const double m = std::max(std::abs(lo), std::abs(hi));
      return a_ * std::pow(m, a_ - 1.0);
    }
    case Kind::stefan:
      return (lo >= a_ && hi <= b_) ? 0.0 : 1.0;
  }
  return 0.0;
}

}  // namespace duhamel
