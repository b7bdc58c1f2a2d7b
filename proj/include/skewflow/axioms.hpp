#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "skewflow/system.hpp"

namespace skewflow {

/// Default acceptance thresholds for axiom residuals.
struct Tolerances {
  double closed_form = 1e-9;
  double quadrature = 1e-6;
  double tabulated = 1e-5;
};

/// A sampled triple t >= s >= t0 together with an initial state.
template <typename Scalar>
struct AxiomSample {
  Scalar t;
  Scalar s;
  Scalar t0;
  StateProfile<Scalar> x;
};

template <typename Scalar>
using AxiomGrid = std::vector<AxiomSample<Scalar>>;

template <typename Scalar>
struct Residual {
  std::string name;
  Scalar value = 0;
};

/// Max residual per checked law; passes iff every residual is within tol.
template <typename Scalar>
struct AxiomReport {
  std::vector<Residual<Scalar>> residuals;
  Scalar tol = 0;
  std::size_t samples = 0;
  bool passed = false;

  Scalar max_residual() const {
    Scalar worst = 0;
    for (const auto& r : residuals) worst = std::max(worst, r.value);
    return worst;
  }

  Scalar residual(const std::string& name) const {
    for (const auto& r : residuals)
      if (r.name == name) return r.value;
    throw std::out_of_range("no residual named '" + name + "'");
  }

  void finish() {
    passed = true;
    for (const auto& r : residuals) passed = passed && r.value <= tol;
  }
};

/// Random samples on a dyadic time lattice, so sums of time offsets are exact
/// in binary floating point and shift arithmetic carries no rounding.
template <typename Scalar>
AxiomGrid<Scalar> random_axiom_grid(const SkewEvolutionSystem<Scalar>& sys, std::size_t count,
                                    std::uint64_t seed, double max_time = 8.0,
                                    double max_shift = 8.0) {
  std::mt19937_64 rng(seed);
  AxiomGrid<Scalar> grid;
  grid.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double t0 = dyadic(rng, max_time);
    const double s = t0 + dyadic(rng, max_time);
    const double t = s + dyadic(rng, max_time);
    const double shift = dyadic(rng, max_shift);
    grid.push_back({Scalar(t), Scalar(s), Scalar(t0), sys.state(Scalar(shift))});
  }
  return grid;
}

/// Checks phi(t, t, x) = x and phi(t, s, phi(s, t0, x)) = phi(t, t0, x),
/// measuring residuals with the system's state distance.
template <typename Scalar>
AxiomReport<Scalar> check_semiflow_axioms(const SkewEvolutionSystem<Scalar>& sys,
                                          const AxiomGrid<Scalar>& samples, Scalar tol) {
  if (samples.empty())
    throw std::invalid_argument("check_semiflow_axioms: empty sample grid");
  Scalar identity = 0;
  Scalar composition = 0;
  for (const auto& sample : samples) {
    require_time_order(sample.s, sample.t0);
    require_time_order(sample.t, sample.s);
    for (Scalar time : {sample.t, sample.s, sample.t0})
      identity = std::max(identity, sys.distance(evaluate_semiflow(sys, time, time, sample.x), sample.x));
    const auto mid = evaluate_semiflow(sys, sample.s, sample.t0, sample.x);
    const auto chained = evaluate_semiflow(sys, sample.t, sample.s, mid);
    const auto direct = evaluate_semiflow(sys, sample.t, sample.t0, sample.x);
    composition = std::max(composition, sys.distance(chained, direct));
  }
  AxiomReport<Scalar> report;
  report.residuals = {{"identity", identity}, {"composition", composition}};
  report.tol = tol;
  report.samples = samples.size();
  report.finish();
  return report;
}

/// Max absolute entry difference, scaled by max(1, largest entry of the reference).
template <typename Scalar>
Scalar relative_entry_residual(const Matrix<Scalar>& value, const Matrix<Scalar>& reference) {
  const Scalar scale = std::max(Scalar(1), reference.cwiseAbs().maxCoeff());
  return (value - reference).cwiseAbs().maxCoeff() / scale;
}

/// Checks Phi(t, t, x) = I and Phi(t, s, phi(s, t0, x)) Phi(s, t0, x) = Phi(t, t0, x).
template <typename Scalar>
AxiomReport<Scalar> check_cocycle_axioms(const SkewEvolutionSystem<Scalar>& sys,
                                         const AxiomGrid<Scalar>& samples, Scalar tol) {
  if (samples.empty())
    throw std::invalid_argument("check_cocycle_axioms: empty sample grid");
  const Matrix<Scalar> eye = Matrix<Scalar>::Identity(sys.dim, sys.dim);
  Scalar identity = 0;
  Scalar composition = 0;
  for (const auto& sample : samples) {
    require_time_order(sample.s, sample.t0);
    require_time_order(sample.t, sample.s);
    for (Scalar time : {sample.t, sample.s, sample.t0})
      identity = std::max(identity, relative_entry_residual(evaluate_cocycle(sys, time, time, sample.x), eye));
    const auto mid = evaluate_semiflow(sys, sample.s, sample.t0, sample.x);
    const Matrix<Scalar> chained =
        evaluate_cocycle(sys, sample.t, sample.s, mid) * evaluate_cocycle(sys, sample.s, sample.t0, sample.x);
    const Matrix<Scalar> direct = evaluate_cocycle(sys, sample.t, sample.t0, sample.x);
    composition = std::max(composition, relative_entry_residual(chained, direct));
  }
  AxiomReport<Scalar> report;
  report.residuals = {{"identity", identity}, {"composition", composition}};
  report.tol = tol;
  report.samples = samples.size();
  report.finish();
  return report;
}

}  // namespace skewflow
