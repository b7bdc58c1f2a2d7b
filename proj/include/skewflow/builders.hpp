#pragma once

#include <memory>
#include <string>
#include <vector>

#include "skewflow/projector.hpp"
#include "skewflow/system.hpp"

namespace skewflow {

/// Exponent of one diagonal cocycle entry:
///   integral * J + time * (t - s) + origin * (t - s) * x(0),
/// where J is the integral of x over [0, t - s].
template <typename Scalar>
struct DiagonalRate {
  Scalar integral = 0;
  Scalar time = 0;
  Scalar origin = 0;
};

/// How the center component of the trichotomic example is damped.
///   kBaseOrigin   uses f(0), a constant of the system, so the map is a cocycle.
///   kStateOrigin  uses x(0) of the argument state; not a cocycle when f is
///                 strictly decreasing.
enum class CenterRate { kBaseOrigin, kStateOrigin };

struct CocycleOptions {
  IntegralMode mode = IntegralMode::kClosedForm;
  double panel_density = kDefaultPanelDensity;
  double distance_horizon = 50.0;
};

template <typename Scalar>
struct ExampleSystem {
  SkewEvolutionSystem<Scalar> system;
  CompatibleFamilySet<Scalar> families;
};

/// Translation semiflow with a diagonal exponential cocycle.
template <typename Scalar>
SkewEvolutionSystem<Scalar> build_diagonal_system(std::string name, const BaseProfile<Scalar>& base,
                                                  std::vector<DiagonalRate<Scalar>> rates,
                                                  const CocycleOptions& options = {}) {
  if (rates.empty())
    throw std::invalid_argument("diagonal system needs at least one component");
  SkewEvolutionSystem<Scalar> sys;
  sys.name = std::move(name);
  sys.dim = static_cast<Eigen::Index>(rates.size());
  sys.base = std::make_shared<const BaseProfile<Scalar>>(base);
  sys.semiflow = translation_semiflow<Scalar>();
  sys.distance = truncated_sup_distance<Scalar>(Scalar(options.distance_horizon));
  sys.cocycle = [rates = std::move(rates), options](Scalar t, Scalar s, const StateProfile<Scalar>& x) {
    const Scalar gap = t - s;
    const Scalar j = integrate_profile(x, s, t, options.mode, options.panel_density);
    const Scalar origin = x(Scalar(0));
    Vector<Scalar> diagonal(static_cast<Eigen::Index>(rates.size()));
    for (std::size_t i = 0; i < rates.size(); ++i) {
      using std::exp;
      const auto& r = rates[i];
      diagonal(static_cast<Eigen::Index>(i)) = exp(r.integral * j + r.time * gap + r.origin * gap * origin);
    }
    return Matrix<Scalar>(diagonal.asDiagonal());
  };
  return sys;
}

/// Phi(t, s, x) = e^{J} I_p with the translation semiflow.
template <typename Scalar>
SkewEvolutionSystem<Scalar> build_example_translation(const BaseProfile<Scalar>& base, Eigen::Index p,
                                                      const CocycleOptions& options = {}) {
  if (p < 1)
    throw std::invalid_argument("dimension p must be >= 1");
  return build_diagonal_system<Scalar>("ses", base,
                                       std::vector<DiagonalRate<Scalar>>(static_cast<std::size_t>(p), {1, 0, 0}),
                                       options);
}

/// diag(e^{-2J}, e^{3J}) with coordinate projectors. The coefficients can be
/// overridden, e.g. to build the sign-swapped control.
template <typename Scalar>
ExampleSystem<Scalar> build_example_dichotomy(const BaseProfile<Scalar>& base, const CocycleOptions& options = {},
                                              Scalar stable_coefficient = Scalar(-2),
                                              Scalar unstable_coefficient = Scalar(3)) {
  ExampleSystem<Scalar> ex;
  ex.system = build_diagonal_system<Scalar>(
      "ued", base, {{stable_coefficient, 0, 0}, {unstable_coefficient, 0, 0}}, options);
  ex.families = CompatibleFamilySet<Scalar>::coordinate(2, {{0}, {1}});
  return ex;
}

/// diag(e^{-mu(t-s)+J}, e^{J}, e^{-(t-s)c+J}) with coordinate projectors, where
/// c is f(0) or x(0) depending on the center variant. Requires mu > f(0).
template <typename Scalar>
ExampleSystem<Scalar> build_example_trichotomy(const BaseProfile<Scalar>& base, Scalar mu,
                                               CenterRate center = CenterRate::kBaseOrigin,
                                               const CocycleOptions& options = {}) {
  const Scalar f0 = base(Scalar(0));
  if (!(mu > f0))
    throw std::invalid_argument("trichotomy example requires mu > f(0) = " + std::to_string(static_cast<double>(f0)));
  const DiagonalRate<Scalar> center_rate =
      center == CenterRate::kBaseOrigin ? DiagonalRate<Scalar>{1, -f0, 0} : DiagonalRate<Scalar>{1, 0, -1};
  ExampleSystem<Scalar> ex;
  ex.system = build_diagonal_system<Scalar>("uet", base, {{1, -mu, 0}, {1, 0, 0}, center_rate}, options);
  ex.families = CompatibleFamilySet<Scalar>::coordinate(3, {{0}, {1}, {2}});
  return ex;
}

/// The trichotomic example with every s replaced by a fixed reference time t0:
/// Phi(t, s, x) = diag(e^{-mu(t-t0)+I}, e^{I}, e^{-(t-t0)x(0)+I}) with I the
/// integral of x over [0, t - t0]. Kept to demonstrate that it is not a cocycle.
template <typename Scalar>
ExampleSystem<Scalar> build_example_trichotomy_literal(const BaseProfile<Scalar>& base, Scalar mu,
                                                       Scalar reference_time = Scalar(0),
                                                       const CocycleOptions& options = {}) {
  if (!(mu > base(Scalar(0))))
    throw std::invalid_argument("trichotomy example requires mu > f(0)");
  ExampleSystem<Scalar> ex;
  auto& sys = ex.system;
  sys.name = "uet_literal_t0";
  sys.dim = 3;
  sys.base = std::make_shared<const BaseProfile<Scalar>>(base);
  sys.semiflow = translation_semiflow<Scalar>();
  sys.distance = truncated_sup_distance<Scalar>(Scalar(options.distance_horizon));
  sys.cocycle = [mu, reference_time, options](Scalar t, Scalar, const StateProfile<Scalar>& x) {
    using std::exp;
    if (t < reference_time)
      throw DomainError("literal trichotomy cocycle is only defined for t >= t0");
    const Scalar elapsed = t - reference_time;
    const Scalar j = integrate_profile(x, reference_time, t, options.mode, options.panel_density);
    Vector<Scalar> diagonal(3);
    diagonal << exp(-mu * elapsed + j), exp(j), exp(-elapsed * x(Scalar(0)) + j);
    return Matrix<Scalar>(diagonal.asDiagonal());
  };
  ex.families = CompatibleFamilySet<Scalar>::coordinate(3, {{0}, {1}, {2}});
  return ex;
}

/// f(u) = 1 + e^{-u}: limit 1, f(0) = 2.
template <typename Scalar = double>
BaseProfile<Scalar> default_profile() {
  return BaseProfile<Scalar>::exp_plus_const(Scalar(1), Scalar(1), Scalar(1));
}

}  // namespace skewflow
