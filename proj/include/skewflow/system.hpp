#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>

#include "skewflow/profile.hpp"
#include "skewflow/types.hpp"

namespace skewflow {

/// A skew-evolution semiflow C(t, s, x, v) = (phi(t, s, x), Phi(t, s, x) v) on
/// X x R^p, where X is spanned by translates of one base profile.
///
/// Both maps are stored type-erased so callers can plug in variants (broken
/// semiflows, non-cocycles) and have them checked like the built-in systems.
template <typename Scalar>
struct SkewEvolutionSystem {
  using State = StateProfile<Scalar>;
  using Semiflow = std::function<State(Scalar t, Scalar s, const State& x)>;
  using Cocycle = std::function<Matrix<Scalar>(Scalar t, Scalar s, const State& x)>;
  using Distance = std::function<Scalar(const State& x, const State& y)>;

  std::string name;
  Eigen::Index dim = 1;
  std::shared_ptr<const BaseProfile<Scalar>> base;
  Semiflow semiflow;
  Cocycle cocycle;
  Distance distance;

  /// The translate f_shift of the base profile.
  State state(Scalar shift) const { return State(base, shift); }
};

/// phi(t, s, x) = x_{t-s}.
template <typename Scalar>
typename SkewEvolutionSystem<Scalar>::Semiflow translation_semiflow() {
  return [](Scalar t, Scalar s, const StateProfile<Scalar>& x) { return shift_profile(x, t - s); };
}

template <typename Scalar>
typename SkewEvolutionSystem<Scalar>::Distance truncated_sup_distance(Scalar horizon = Scalar(50)) {
  return [horizon](const StateProfile<Scalar>& x, const StateProfile<Scalar>& y) {
    return profile_distance(x, y, horizon);
  };
}

template <typename Scalar>
StateProfile<Scalar> evaluate_semiflow(const SkewEvolutionSystem<Scalar>& sys, Scalar t, Scalar s,
                                       const StateProfile<Scalar>& x) {
  require_time_order(t, s);
  return sys.semiflow(t, s, x);
}

template <typename Scalar>
Matrix<Scalar> evaluate_cocycle(const SkewEvolutionSystem<Scalar>& sys, Scalar t, Scalar s,
                                const StateProfile<Scalar>& x) {
  require_time_order(t, s);
  Matrix<Scalar> op = sys.cocycle(t, s, x);
  if (op.rows() != sys.dim || op.cols() != sys.dim)
    throw std::logic_error("cocycle returned a " + std::to_string(op.rows()) + "x" +
                           std::to_string(op.cols()) + " operator for dimension " +
                           std::to_string(sys.dim));
  if (!op.allFinite())
    throw QuadratureError("cocycle operator has non-finite entries at t = " +
                          std::to_string(static_cast<double>(t)) +
                          ", s = " + std::to_string(static_cast<double>(s)));
  return op;
}

template <typename Scalar>
std::pair<StateProfile<Scalar>, Vector<Scalar>> evaluate_skew(const SkewEvolutionSystem<Scalar>& sys,
                                                              Scalar t, Scalar s,
                                                              const StateProfile<Scalar>& x,
                                                              const Vector<Scalar>& v) {
  if (v.size() != sys.dim)
    throw std::invalid_argument("evaluate_skew: vector has dimension " + std::to_string(v.size()) +
                                ", system has " + std::to_string(sys.dim));
  Vector<Scalar> image = evaluate_cocycle(sys, t, s, x) * v;
  return {evaluate_semiflow(sys, t, s, x), std::move(image)};
}

}  // namespace skewflow
