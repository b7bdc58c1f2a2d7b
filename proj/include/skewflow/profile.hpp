#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "skewflow/quadrature.hpp"
#include "skewflow/types.hpp"

namespace skewflow {

enum class ProfileKind { kExpPlusConst, kRationalPlusConst, kConstant, kTabulated };

inline std::string to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::kExpPlusConst: return "exp_plus_const";
    case ProfileKind::kRationalPlusConst: return "rational_plus_const";
    case ProfileKind::kConstant: return "constant";
    case ProfileKind::kTabulated: return "tabulated";
  }
  return "unknown";
}

inline ProfileKind profile_kind_from_string(const std::string& name) {
  if (name == "exp_plus_const") return ProfileKind::kExpPlusConst;
  if (name == "rational_plus_const") return ProfileKind::kRationalPlusConst;
  if (name == "constant") return ProfileKind::kConstant;
  if (name == "tabulated") return ProfileKind::kTabulated;
  throw std::invalid_argument("unknown profile kind '" + name + "'");
}

/// A nonincreasing function f : [0, inf) -> [0, inf) with limit l.
///
/// The analytic families are
///   exp_plus_const       f(u) = l + a e^{-b u}
///   rational_plus_const  f(u) = l + a / (1 + u)
///   constant             f(u) = l
/// and a tabulated escape hatch (piecewise linear, constant past the last node)
/// that only supports quadrature.
template <typename Scalar>
class BaseProfile {
 public:
  static BaseProfile exp_plus_const(Scalar a, Scalar b, Scalar l) {
    if (!(b > 0) || !std::isfinite(static_cast<double>(b)))
      throw std::invalid_argument("exp_plus_const: b must be positive and finite");
    return BaseProfile(ProfileKind::kExpPlusConst, a, b, l);
  }

  static BaseProfile rational_plus_const(Scalar a, Scalar l) {
    return BaseProfile(ProfileKind::kRationalPlusConst, a, Scalar(1), l);
  }

  static BaseProfile constant(Scalar l) {
    return BaseProfile(ProfileKind::kConstant, Scalar(0), Scalar(1), l);
  }

  static BaseProfile tabulated(std::vector<Scalar> nodes, std::vector<Scalar> values) {
    if (nodes.size() < 2 || nodes.size() != values.size())
      throw std::invalid_argument("tabulated profile: need >= 2 nodes with matching values");
    if (nodes.front() != Scalar(0))
      throw std::invalid_argument("tabulated profile: first node must be 0");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (!std::isfinite(static_cast<double>(nodes[i])) || !std::isfinite(static_cast<double>(values[i])))
        throw std::invalid_argument("tabulated profile: non-finite entry");
      if (values[i] < 0)
        throw std::invalid_argument("tabulated profile: values must be nonnegative");
      if (i > 0 && !(nodes[i] > nodes[i - 1]))
        throw std::invalid_argument("tabulated profile: nodes must be strictly increasing");
      if (i > 0 && values[i] > values[i - 1])
        throw std::invalid_argument("tabulated profile: values must be nonincreasing");
    }
    BaseProfile p(ProfileKind::kTabulated, Scalar(0), Scalar(1), values.back());
    p.nodes_ = std::move(nodes);
    p.values_ = std::move(values);
    return p;
  }

  ProfileKind kind() const { return kind_; }
  Scalar a() const { return a_; }
  Scalar b() const { return b_; }
  Scalar limit() const { return l_; }
  const std::vector<Scalar>& nodes() const { return nodes_; }
  const std::vector<Scalar>& values() const { return values_; }

  bool has_antiderivative() const { return kind_ != ProfileKind::kTabulated; }

  Scalar operator()(Scalar u) const {
    using std::exp;
    switch (kind_) {
      case ProfileKind::kExpPlusConst: return l_ + a_ * exp(-b_ * u);
      case ProfileKind::kRationalPlusConst: return l_ + a_ / (Scalar(1) + u);
      case ProfileKind::kConstant: return l_;
      case ProfileKind::kTabulated: return interpolate(u);
    }
    return l_;
  }

  /// Exact integral of f over [u0, u1] for the analytic families.
  Scalar closed_form_integral(Scalar u0, Scalar u1) const {
    using std::exp;
    using std::expm1;
    using std::log1p;
    const Scalar width = u1 - u0;
    switch (kind_) {
      case ProfileKind::kExpPlusConst:
        return l_ * width - a_ / b_ * exp(-b_ * u0) * expm1(-b_ * width);
      case ProfileKind::kRationalPlusConst:
        return l_ * width + a_ * log1p(width / (Scalar(1) + u0));
      case ProfileKind::kConstant:
        return l_ * width;
      case ProfileKind::kTabulated:
        break;
    }
    throw std::logic_error("closed_form_integral: tabulated profiles have no antiderivative");
  }

  /// Integral of f over [u0, u1]. Tabulated profiles always use quadrature.
  Scalar integral(Scalar u0, Scalar u1, IntegralMode mode = IntegralMode::kClosedForm,
                  double panel_density = kDefaultPanelDensity) const {
    if (!(u1 >= u0))
      throw DomainError("profile integral: requires u1 >= u0");
    if (u0 == u1)
      return Scalar(0);
    Scalar value;
    if (mode == IntegralMode::kClosedForm && has_antiderivative())
      value = closed_form_integral(u0, u1);
    else
      value = simpson_density<Scalar>([this](Scalar u) { return (*this)(u); }, u0, u1, panel_density);
    if (!std::isfinite(static_cast<double>(value)))
      throw QuadratureError("profile integral is not finite; invalid base profile");
    return value;
  }

  /// A point U with |f(u) - l| <= eps for all u >= U.
  Scalar tail_point(Scalar eps) const {
    using std::log;
    switch (kind_) {
      case ProfileKind::kExpPlusConst:
        return a_ <= eps ? Scalar(0) : log(a_ / eps) / b_;
      case ProfileKind::kRationalPlusConst:
        return a_ <= eps ? Scalar(0) : a_ / eps - Scalar(1);
      case ProfileKind::kConstant:
        return Scalar(0);
      case ProfileKind::kTabulated:
        return nodes_.back();
    }
    return Scalar(0);
  }

 private:
  BaseProfile(ProfileKind kind, Scalar a, Scalar b, Scalar l) : kind_(kind), a_(a), b_(b), l_(l) {
    if (!std::isfinite(static_cast<double>(a)) || !std::isfinite(static_cast<double>(l)))
      throw std::invalid_argument("profile parameters must be finite");
    if (a < 0 || l < 0)
      throw std::invalid_argument("profile parameters require a >= 0 and l >= 0");
  }

  Scalar interpolate(Scalar u) const {
    if (u >= nodes_.back())
      return values_.back();
    if (u <= Scalar(0))
      return values_.front();
    const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), u);
    const auto i = static_cast<std::size_t>(it - nodes_.begin());
    const Scalar w = (u - nodes_[i - 1]) / (nodes_[i] - nodes_[i - 1]);
    return values_[i - 1] + w * (values_[i] - values_[i - 1]);
  }

  ProfileKind kind_;
  Scalar a_;
  Scalar b_;
  Scalar l_;
  std::vector<Scalar> nodes_;
  std::vector<Scalar> values_;
};

/// The translate f_shift, i.e. tau -> f(shift + tau).
template <typename Scalar>
class StateProfile {
 public:
  StateProfile(std::shared_ptr<const BaseProfile<Scalar>> base, Scalar shift)
      : base_(std::move(base)), shift_(shift) {
    if (!base_)
      throw std::invalid_argument("StateProfile: null base profile");
    if (!(shift >= 0) || !std::isfinite(static_cast<double>(shift)))
      throw DomainError("StateProfile: shift must be finite and nonnegative");
  }

  Scalar operator()(Scalar tau) const { return (*base_)(shift_ + tau); }
  Scalar shift() const { return shift_; }
  const BaseProfile<Scalar>& base() const { return *base_; }
  const std::shared_ptr<const BaseProfile<Scalar>>& base_ptr() const { return base_; }

  bool operator==(const StateProfile& other) const {
    return base_ == other.base_ && shift_ == other.shift_;
  }

 private:
  std::shared_ptr<const BaseProfile<Scalar>> base_;
  Scalar shift_;
};

template <typename Scalar>
StateProfile<Scalar> shift_profile(const StateProfile<Scalar>& x, Scalar delta) {
  if (!(delta >= 0))
    throw DomainError("shift_profile: shift increment must be nonnegative");
  return StateProfile<Scalar>(x.base_ptr(), x.shift() + delta);
}

/// Integral of tau -> x(tau - s) over [s, t], i.e. of x over [0, t - s].
template <typename Scalar>
Scalar integrate_profile(const StateProfile<Scalar>& x, Scalar s, Scalar t,
                         IntegralMode mode = IntegralMode::kClosedForm,
                         double panel_density = kDefaultPanelDensity) {
  require_time_order(t, s);
  return x.base().integral(x.shift(), x.shift() + (t - s), mode, panel_density);
}

/// Sup of |x(tau) - y(tau)| over an even sampling of [0, horizon].
template <typename Scalar>
Scalar profile_distance(const StateProfile<Scalar>& x, const StateProfile<Scalar>& y,
                        Scalar horizon = Scalar(50), std::size_t samples = 2048) {
  if (!(horizon > 0))
    throw std::invalid_argument("profile_distance: horizon must be positive");
  if (x == y)
    return Scalar(0);
  Scalar worst = 0;
  for (std::size_t i = 0; i <= samples; ++i) {
    const Scalar tau = horizon * static_cast<Scalar>(i) / static_cast<Scalar>(samples);
    using std::abs;
    worst = std::max(worst, abs(x(tau) - y(tau)));
  }
  return worst;
}

}  // namespace skewflow
