#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "skewflow/classifier.hpp"
#include "skewflow/quadrature.hpp"

namespace skewflow {

enum class CriterionKind { kAffineOverConst, kScaledExp, kTabulated };

inline std::string to_string(CriterionKind kind) {
  switch (kind) {
    case CriterionKind::kAffineOverConst: return "affine_over_const";
    case CriterionKind::kScaledExp: return "scaled_exp";
    case CriterionKind::kTabulated: return "tabulated";
  }
  return "unknown";
}

/// A nondecreasing, unbounded comparison function used by the growth and
/// integral criteria:
///   affine_over_const  f(u) = (u + 1) / c
///   scaled_exp         f(u) = e^{nu u} / N
///   tabulated          piecewise linear, extended past the last node with the last slope
///
/// The criteria ask for values in (1, inf). The families built from constants
/// (scaled_exp with N >= 1, affine_over_const with c >= 1) start at or below 1,
/// so admissibility only requires f to exceed 1 eventually; strict_range()
/// reports whether f(0) > 1 as well.
template <typename Scalar>
class CriterionFunction {
 public:
  static CriterionFunction affine_over_const(Scalar c) {
    if (!(c > 0) || !std::isfinite(static_cast<double>(c)))
      throw std::invalid_argument("affine_over_const: c must be positive and finite");
    CriterionFunction f(CriterionKind::kAffineOverConst);
    f.c_ = c;
    return f;
  }

  static CriterionFunction scaled_exp(Scalar gain, Scalar rate) {
    if (!(gain > 0) || !(rate > 0) || !std::isfinite(static_cast<double>(gain)) ||
        !std::isfinite(static_cast<double>(rate)))
      throw std::invalid_argument("scaled_exp: requires N > 0 and nu > 0");
    CriterionFunction f(CriterionKind::kScaledExp);
    f.gain_ = gain;
    f.rate_ = rate;
    return f;
  }

  static CriterionFunction tabulated(std::vector<Scalar> nodes, std::vector<Scalar> values) {
    if (nodes.size() < 2 || nodes.size() != values.size())
      throw std::invalid_argument("tabulated criterion: need >= 2 nodes with matching values");
    if (nodes.front() != Scalar(0))
      throw std::invalid_argument("tabulated criterion: first node must be 0");
    for (std::size_t i = 1; i < nodes.size(); ++i)
      if (!(nodes[i] > nodes[i - 1]))
        throw std::invalid_argument("tabulated criterion: nodes must be strictly increasing");
    CriterionFunction f(CriterionKind::kTabulated);
    f.nodes_ = std::move(nodes);
    f.values_ = std::move(values);
    return f;
  }

  CriterionKind kind() const { return kind_; }
  Scalar c() const { return c_; }
  Scalar gain() const { return gain_; }
  Scalar rate() const { return rate_; }
  const std::vector<Scalar>& nodes() const { return nodes_; }
  const std::vector<Scalar>& values() const { return values_; }

  Scalar operator()(Scalar u) const {
    using std::exp;
    switch (kind_) {
      case CriterionKind::kAffineOverConst: return (u + 1) / c_;
      case CriterionKind::kScaledExp: return exp(rate_ * u) / gain_;
      case CriterionKind::kTabulated: return interpolate(u);
    }
    return 0;
  }

  bool strict_range() const { return (*this)(Scalar(0)) > 1; }

  /// inf { u >= 0 : f(u) > 1 }.
  Scalar crossing() const {
    using std::log;
    switch (kind_) {
      case CriterionKind::kAffineOverConst: return std::max(Scalar(0), c_ - 1);
      case CriterionKind::kScaledExp: return std::max(Scalar(0), log(gain_) / rate_);
      case CriterionKind::kTabulated: {
        if (values_.front() > 1) return Scalar(0);
        for (std::size_t i = 1; i < nodes_.size(); ++i)
          if (values_[i] > 1)
            return nodes_[i - 1] + (1 - values_[i - 1]) / (values_[i] - values_[i - 1]) * (nodes_[i] - nodes_[i - 1]);
        return nodes_.back() + (1 - values_.back()) / last_slope();
      }
    }
    return 0;
  }

  /// Throws unless f is positive, nondecreasing, unbounded and eventually > 1.
  void validate() const {
    if (kind_ == CriterionKind::kTabulated) {
      for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!(values_[i] > 0) || !std::isfinite(static_cast<double>(values_[i])))
          throw std::invalid_argument("criterion function must be positive and finite");
        if (i > 0 && values_[i] < values_[i - 1])
          throw std::invalid_argument("criterion function must be nondecreasing");
      }
      if (!(last_slope() > 0))
        throw std::invalid_argument("criterion function must grow without bound");
    }
    Scalar previous = (*this)(Scalar(0));
    for (int i = 1; i <= 400; ++i) {
      const Scalar value = (*this)(Scalar(i) / 4);
      if (value < previous)
        throw std::invalid_argument("criterion function must be nondecreasing");
      previous = value;
    }
  }

 private:
  explicit CriterionFunction(CriterionKind kind) : kind_(kind) {}

  Scalar last_slope() const {
    const std::size_t n = nodes_.size();
    return (values_[n - 1] - values_[n - 2]) / (nodes_[n - 1] - nodes_[n - 2]);
  }

  Scalar interpolate(Scalar u) const {
    if (u <= Scalar(0)) return values_.front();
    if (u >= nodes_.back()) return values_.back() + last_slope() * (u - nodes_.back());
    const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), u);
    const auto i = static_cast<std::size_t>(it - nodes_.begin());
    const Scalar w = (u - nodes_[i - 1]) / (nodes_[i] - nodes_[i - 1]);
    return values_[i - 1] + w * (values_[i] - values_[i - 1]);
  }

  CriterionKind kind_;
  Scalar c_ = 1;
  Scalar gain_ = 1;
  Scalar rate_ = 1;
  std::vector<Scalar> nodes_;
  std::vector<Scalar> values_;
};

/// Bounds measured by the integral criterion. sup_gain is N in the sup bounds,
/// integral_bound is M; integral_bound_half is M restricted to gaps up to half
/// the grid's largest gap.
template <typename Scalar>
struct IntegralBounds {
  Scalar sup_gain = 1;
  Scalar integral_bound = 1;
  Scalar integral_bound_half = 1;
  Scalar center_gain = 0;  // g(1)
  Scalar center_rate = 0;  // ln g(1)
};

template <typename Scalar>
struct CriterionReport {
  bool passed = false;
  std::vector<Violation<Scalar>> witnesses;
  Scalar worst_ratio = 0;
  std::size_t checked = 0;
  std::size_t skipped = 0;
  Scalar delta = 0;
  std::optional<GrowthConstants<Scalar>> growth;     // (N, nu) from the growth criterion
  std::optional<IntegralBounds<Scalar>> measured;    // integral criterion, always when evaluated
  std::optional<IntegralBounds<Scalar>> extracted;   // integral criterion, only when passed
  std::vector<std::string> notes;
};

/// N = f(delta), nu = ln f(delta) / delta.
template <typename Scalar>
GrowthConstants<Scalar> derive_constants_from_criterion(const CriterionFunction<Scalar>& f, Scalar delta) {
  using std::log;
  if (!(delta > 0))
    throw std::invalid_argument("derive_constants_from_criterion: delta must be positive");
  const Scalar value = f(delta);
  if (!(value > 1))
    throw std::invalid_argument("derive_constants_from_criterion: f(delta) must exceed 1");
  return {value, log(value) / delta};
}

/// f(t) = e^{nu t} / N with N = max(N1, N2) and nu = min(nu1, nu2).
template <typename Scalar>
CriterionFunction<Scalar> build_criterion_from_constants(Scalar n1, Scalar n2, Scalar nu1, Scalar nu2) {
  SpectralConstants<Scalar> constants{{{n1, nu1}, {n2, nu2}}};
  validate_constants(constants, 2);
  return CriterionFunction<Scalar>::scaled_exp(std::max(n1, n2), std::min(nu1, nu2));
}

struct GrowthCriterionOptions {
  double min_gap = 0.0;  // tuples with t - s below this are not checked
  double delta = 1.0;    // used to extract (N, nu) when the criterion passes
  double slack = 1e-9;
};

/// Checks f(t-s)|Phi(t,t0,x)P1 v| <= |Phi(s,t0,x)P1 v| and
/// f(t-s)|Phi(s,t0,x)P2 v| <= |Phi(t,t0,x)P2 v| on grid tuples with t > s.
/// At t = s the inequalities would force f(0) <= 1, so zero gaps are skipped.
template <typename Scalar>
CriterionReport<Scalar> check_growth_criterion(const SkewEvolutionSystem<Scalar>& sys,
                                               const CompatibleFamilySet<Scalar>& set,
                                               const CriterionFunction<Scalar>& f, const SampleGrid<Scalar>& grid,
                                               const GrowthCriterionOptions& options = {}) {
  if (set.size() != 2)
    throw std::invalid_argument("growth criterion needs 2 projector families");
  f.validate();

  CriterionReport<Scalar> report;
  report.delta = Scalar(options.delta);
  detail::ViolationLog<Scalar> log;
  std::size_t short_gaps = 0;
  report.skipped = sweep_projected_pairs(sys, set, grid, [&](const ProjectedPair<Scalar>& pair) {
    if (!(pair.gap() > 0) || pair.gap() < Scalar(options.min_gap)) {
      ++short_gaps;
      return;
    }
    const Scalar factor = f(pair.gap());
    const bool stable = role_of(pair.component) == ComponentRole::kStable;
    const Scalar lhs = factor * (stable ? pair.at_t : pair.at_s);
    const Scalar rhs = stable ? pair.at_s : pair.at_t;
    ++report.checked;
    if (lhs <= rhs * (1 + Scalar(options.slack)))
      log.observe(detail::safe_ratio(lhs, rhs));
    else
      log.offer({pair.t, pair.s, pair.t0, pair.shift, pair.vector_index, static_cast<int>(pair.component + 1), lhs, rhs});
  });
  report.skipped += short_gaps;
  report.witnesses = log.take();
  report.worst_ratio = log.worst();
  report.passed = report.witnesses.empty();
  if (!f.strict_range())
    report.notes.push_back("f(0) <= 1: f exceeds 1 only for t - s > " + std::to_string(static_cast<double>(f.crossing())));
  if (report.passed) {
    if (f(report.delta) > 1)
      report.growth = derive_constants_from_criterion(f, report.delta);
    else
      report.notes.push_back("f(delta) <= 1; no constants extracted for this delta");
  }
  return report;
}

/// Simpson integral of tau -> |Phi(tau, t0, x) w| over [s, t].
template <typename Scalar>
Scalar projected_norm_integral(const SkewEvolutionSystem<Scalar>& sys, const StateProfile<Scalar>& x, Scalar t0,
                               Scalar s, Scalar t, const Vector<Scalar>& w,
                               double panel_density = kDefaultPanelDensity) {
  require_time_order(s, t0);
  return simpson_density<Scalar>([&](Scalar tau) { return fiber_norm(evaluate_cocycle(sys, tau, t0, x) * w); }, s, t,
                                 panel_density);
}

struct IntegralCriterionOptions {
  double panel_density = kDefaultPanelDensity;
  double integral_cap = 1e6;       // M above this fails the criterion
  double saturation_growth = 0.25; // M may exceed its half-horizon value by at most this fraction
  double slack = 1e-9;
};

/// Measures the grid-feasible constants of the integral criterion:
///   N >= |Phi(t,t0,x)P1 v| / |P1 v|, |Phi(t)P1 v| / |Phi(s)P1 v|   (and the P2 mirror)
///   M >= int_s^t |Phi(tau,t0,x)P1 v| dtau / |Phi(s)P1 v|           (P2: divided by |Phi(t)P2 v|)
/// and checks the two-sided bounds |Phi(t)P3 v| <= g(t-s)|Phi(s)P3 v|,
/// |Phi(s)P3 v| <= g(t-s)|Phi(t)P3 v|. M is a grid lower estimate, so the
/// criterion also fails when M has not saturated over the grid's horizon.
template <typename Scalar>
CriterionReport<Scalar> check_integral_criterion(const SkewEvolutionSystem<Scalar>& sys,
                                                 const CompatibleFamilySet<Scalar>& set,
                                                 const CriterionFunction<Scalar>& g, const SampleGrid<Scalar>& grid,
                                                 const IntegralCriterionOptions& options = {}) {
  using std::log;
  if (set.size() != 3)
    throw std::invalid_argument("integral criterion needs 3 projector families");
  g.validate();
  validate_grid(grid);
  require_family_shape(set, sys.dim);

  CriterionReport<Scalar> report;
  IntegralBounds<Scalar> bounds;
  const Scalar half_horizon = grid.max_gap() / 2;
  Scalar raw_gain = 0, raw_integral = 0, raw_integral_half = 0;
  detail::ViolationLog<Scalar> log_center;

  for (Scalar shift : grid.shifts) {
    const auto x = sys.state(shift);
    std::vector<Matrix<Scalar>> projections;
    for (const auto& family : set.families) projections.push_back(family(x));
    for (Scalar t0 : grid.t0s) {
      for (Scalar s_offset : grid.s_offsets) {
        const Scalar s = t0 + s_offset;
        const Matrix<Scalar> phi_s = evaluate_cocycle(sys, s, t0, x);
        for (Scalar dt : grid.dts) {
          const Scalar t = s + dt;
          const Matrix<Scalar> phi_t = evaluate_cocycle(sys, t, t0, x);

          // Operators at the Simpson nodes of [s, t], shared by every vector.
          const std::size_t panels = dt > 0 ? panels_for(static_cast<double>(dt), options.panel_density) : 0;
          std::vector<Matrix<Scalar>> nodes;
          if (panels > 0) {
            const Scalar h = dt / static_cast<Scalar>(2 * panels);
            for (std::size_t i = 0; i <= 2 * panels; ++i)
              nodes.push_back(evaluate_cocycle(sys, s + h * static_cast<Scalar>(i), t0, x));
          }
          auto integral_of = [&](const Vector<Scalar>& w) {
            if (panels == 0) return Scalar(0);
            const Scalar h = dt / static_cast<Scalar>(2 * panels);
            Scalar sum = fiber_norm(nodes.front() * w) + fiber_norm(nodes.back() * w);
            for (std::size_t i = 1; i + 1 < nodes.size(); ++i)
              sum += (i % 2 == 1 ? 4 : 2) * fiber_norm(nodes[i] * w);
            const Scalar value = h / 3 * sum;
            if (!std::isfinite(static_cast<double>(value)))
              throw QuadratureError("integral criterion: non-finite trajectory integral");
            return value;
          };

          for (std::size_t vi = 0; vi < grid.vectors.size(); ++vi) {
            const auto& v = grid.vectors[vi];
            const Scalar v_norm = fiber_norm(v);
            for (std::size_t k = 0; k < 3; ++k) {
              const Vector<Scalar> w = projections[k] * v;
              const Scalar w_norm = fiber_norm(w);
              if (v_norm == 0 || w_norm <= Scalar(kDegenerateProjection) * v_norm) {
                ++report.skipped;
                continue;
              }
              const Scalar at_s = fiber_norm(phi_s * w);
              const Scalar at_t = fiber_norm(phi_t * w);
              ++report.checked;
              switch (role_of(k)) {
                case ComponentRole::kStable: {
                  raw_gain = std::max({raw_gain, detail::safe_ratio(at_t, w_norm), detail::safe_ratio(at_t, at_s)});
                  const Scalar m = detail::safe_ratio(integral_of(w), at_s);
                  raw_integral = std::max(raw_integral, m);
                  if (dt <= half_horizon) raw_integral_half = std::max(raw_integral_half, m);
                  break;
                }
                case ComponentRole::kUnstable: {
                  raw_gain = std::max({raw_gain, detail::safe_ratio(w_norm, at_t), detail::safe_ratio(at_s, at_t)});
                  const Scalar m = detail::safe_ratio(integral_of(w), at_t);
                  raw_integral = std::max(raw_integral, m);
                  if (dt <= half_horizon) raw_integral_half = std::max(raw_integral_half, m);
                  break;
                }
                case ComponentRole::kCenter: {
                  const Scalar bound = g(dt);
                  for (auto [lhs, rhs] : {std::pair{at_t, bound * at_s}, std::pair{at_s, bound * at_t}}) {
                    if (lhs <= rhs * (1 + Scalar(options.slack)))
                      log_center.observe(detail::safe_ratio(lhs, rhs));
                    else
                      log_center.offer({t, s, t0, shift, vi, 3, lhs, rhs});
                  }
                  break;
                }
              }
            }
          }
        }
      }
    }
  }

  bounds.sup_gain = std::max(Scalar(1), raw_gain);
  bounds.integral_bound = std::max(Scalar(1), raw_integral);
  bounds.integral_bound_half = std::max(Scalar(1), raw_integral_half);
  bounds.center_gain = g(Scalar(1));
  bounds.center_rate = bounds.center_gain > 1 ? log(bounds.center_gain) : Scalar(0);
  report.measured = bounds;
  report.witnesses = log_center.take();
  report.worst_ratio = log_center.worst();

  bool ok = report.witnesses.empty();
  if (!ok) report.notes.push_back("center bounds violated");
  if (!std::isfinite(static_cast<double>(bounds.sup_gain)) || !std::isfinite(static_cast<double>(bounds.integral_bound))) {
    ok = false;
    report.notes.push_back("sup or integral bound is not finite");
  }
  if (bounds.integral_bound > Scalar(options.integral_cap)) {
    ok = false;
    report.notes.push_back("integral bound M exceeds the configured cap");
  }
  if (bounds.integral_bound > bounds.integral_bound_half * (1 + Scalar(options.saturation_growth))) {
    ok = false;
    report.notes.push_back("integral bound M keeps growing with the horizon (" +
                           std::to_string(static_cast<double>(bounds.integral_bound_half)) + " at half horizon, " +
                           std::to_string(static_cast<double>(bounds.integral_bound)) + " at full horizon)");
  }
  if (!(bounds.center_gain > 1)) {
    ok = false;
    report.notes.push_back("g(1) <= 1, no center constants");
  }
  report.passed = ok;
  if (ok) report.extracted = bounds;
  return report;
}

template <typename Scalar>
struct TrichotomyDerivation {
  SpectralConstants<Scalar> constants;
  Scalar delta = 0;
  Scalar denominator = 0;  // N(M + 1), so f(u) = (u + 1) / denominator
};

/// From (t-s+1)|Phi(t)P1 v| <= N(M+1)|Phi(s)P1 v| take f(u) = (u+1)/(N(M+1)),
/// delta = ceil(N(M+1)) so that f(delta) > 1, and the growth-criterion
/// constants for components 1 and 2; component 3 gets N3 = g(1), nu3 = ln g(1).
template <typename Scalar>
TrichotomyDerivation<Scalar> derive_trichotomy_constants(const CriterionReport<Scalar>& report) {
  using std::ceil;
  using std::log;
  if (!report.passed || !report.extracted)
    throw std::invalid_argument("derive_trichotomy_constants: criterion report did not pass");
  const auto& b = *report.extracted;
  if (!(b.center_gain > 1))
    throw std::invalid_argument("derive_trichotomy_constants: g(1) must exceed 1");
  TrichotomyDerivation<Scalar> out;
  out.denominator = b.sup_gain * (b.integral_bound + 1);
  const auto f = CriterionFunction<Scalar>::affine_over_const(out.denominator);
  out.delta = ceil(out.denominator);
  if (!(f(out.delta) > 1)) out.delta += 1;
  const auto decay = derive_constants_from_criterion(f, out.delta);
  out.constants.components = {decay, decay, {b.center_gain, log(b.center_gain)}};
  return out;
}

}  // namespace skewflow
