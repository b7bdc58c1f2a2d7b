#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "skewflow/grid.hpp"
#include "skewflow/projector.hpp"

namespace skewflow {

/// Families are ordered stable (P1), unstable (P2), center (P3).
enum class ComponentRole { kStable, kUnstable, kCenter };

inline ComponentRole role_of(std::size_t index) {
  switch (index) {
    case 0: return ComponentRole::kStable;
    case 1: return ComponentRole::kUnstable;
    default: return ComponentRole::kCenter;
  }
}

enum class Verdict { kDichotomic, kTrichotomic, kRejected };
enum class SplitMode { kDichotomy, kTrichotomy };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kDichotomic: return "dichotomic";
    case Verdict::kTrichotomic: return "trichotomic";
    case Verdict::kRejected: return "rejected";
  }
  return "unknown";
}

inline std::string to_string(SplitMode m) { return m == SplitMode::kDichotomy ? "dichotomy" : "trichotomy"; }

/// Gain N and rate nu of one component.
template <typename Scalar>
struct GrowthConstants {
  Scalar gain = 1;
  Scalar rate = 1;
};

template <typename Scalar>
struct SpectralConstants {
  std::vector<GrowthConstants<Scalar>> components;
};

template <typename Scalar>
void validate_constants(const SpectralConstants<Scalar>& constants, std::size_t expected) {
  if (constants.components.size() != expected)
    throw std::invalid_argument("expected " + std::to_string(expected) + " component constants, got " +
                                std::to_string(constants.components.size()));
  for (std::size_t k = 0; k < expected; ++k) {
    const auto& c = constants.components[k];
    if (!std::isfinite(static_cast<double>(c.gain)) || !(c.gain >= 1))
      throw std::invalid_argument("component " + std::to_string(k + 1) + ": gain N must be >= 1");
    if (!std::isfinite(static_cast<double>(c.rate)) || !(c.rate > 0))
      throw std::invalid_argument("component " + std::to_string(k + 1) + ": rate nu must be > 0");
  }
}

/// One failed inequality, lhs > rhs * (1 + slack).
template <typename Scalar>
struct Violation {
  Scalar t = 0, s = 0, t0 = 0, shift = 0;
  std::size_t vector_index = 0;
  int component = 0;
  Scalar lhs = 0, rhs = 0;

  Scalar ratio() const {
    if (rhs > 0) return lhs / rhs;
    return lhs > 0 ? std::numeric_limits<Scalar>::infinity() : Scalar(0);
  }
};

template <typename Scalar>
struct ComponentEstimate {
  Scalar rate = 0;
  Scalar gain = 1;
  bool degenerate = false;
  std::size_t pairs = 0;
  Scalar min_exponent = 0;  // min over pairs of ln(|Phi(t)w| / |Phi(s)w|) / (t - s)
  Scalar max_exponent = 0;
};

template <typename Scalar>
struct StateEstimate {
  Scalar shift = 0;
  std::vector<ComponentEstimate<Scalar>> components;
};

template <typename Scalar>
struct RateEstimate {
  std::vector<ComponentEstimate<Scalar>> uniform;
  std::vector<StateEstimate<Scalar>> per_state;
};

template <typename Scalar>
struct SpectralCertificate {
  Verdict verdict = Verdict::kRejected;
  SplitMode mode = SplitMode::kDichotomy;
  SpectralConstants<Scalar> constants;
  SampleGrid<Scalar> grid;
  std::vector<Violation<Scalar>> violations;  // worst offenders first
  Scalar worst_ratio = 0;
  std::size_t checked = 0;
  std::size_t skipped = 0;
  std::optional<RateEstimate<Scalar>> estimate;
  std::string note;

  bool accepted() const { return verdict != Verdict::kRejected; }
};

/// Projected trajectory norms a_s = |Phi(s,t0,x) P_k(x) v| and a_t = |Phi(t,t0,x) P_k(x) v|.
template <typename Scalar>
struct ProjectedPair {
  Scalar t0, s, t, shift;
  std::size_t vector_index;
  std::size_t component;  // 0-based
  Scalar at_s;
  Scalar at_t;

  Scalar gap() const { return t - s; }
};

/// P_k(x) v with |P_k(x) v| <= this fraction of |v| is treated as zero.
inline constexpr double kDegenerateProjection = 1e-14;

/// Calls visit(pair) for every grid tuple and family with a nonzero projection.
/// Returns the number of (tuple, family) combinations skipped as degenerate.
template <typename Scalar, typename Visit>
std::size_t sweep_projected_pairs(const SkewEvolutionSystem<Scalar>& sys, const CompatibleFamilySet<Scalar>& set,
                                  const SampleGrid<Scalar>& grid, Visit&& visit) {
  validate_grid(grid);
  require_family_shape(set, sys.dim);
  for (const auto& v : grid.vectors)
    if (v.size() != sys.dim)
      throw std::invalid_argument("sample grid vector dimension does not match the system");
  std::size_t skipped = 0;
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
          for (std::size_t vi = 0; vi < grid.vectors.size(); ++vi) {
            const auto& v = grid.vectors[vi];
            const Scalar v_norm = fiber_norm(v);
            for (std::size_t k = 0; k < projections.size(); ++k) {
              const Vector<Scalar> w = projections[k] * v;
              if (v_norm == 0 || fiber_norm(w) <= Scalar(kDegenerateProjection) * v_norm) {
                ++skipped;
                continue;
              }
              visit(ProjectedPair<Scalar>{t0, s, t, shift, vi, k, fiber_norm(phi_s * w), fiber_norm(phi_t * w)});
            }
          }
        }
      }
    }
  }
  return skipped;
}

namespace detail {

inline constexpr std::size_t kMaxRecordedViolations = 16;

template <typename Scalar>
class ViolationLog {
 public:
  void offer(const Violation<Scalar>& v) {
    worst_ = std::max(worst_, v.ratio());
    items_.push_back(v);
    std::sort(items_.begin(), items_.end(), [](const auto& a, const auto& b) { return a.ratio() > b.ratio(); });
    if (items_.size() > kMaxRecordedViolations) items_.pop_back();
  }
  void observe(Scalar ratio) { worst_ = std::max(worst_, ratio); }
  Scalar worst() const { return worst_; }
  std::vector<Violation<Scalar>> take() { return std::move(items_); }

 private:
  std::vector<Violation<Scalar>> items_;
  Scalar worst_ = 0;
};

template <typename Scalar>
Scalar safe_ratio(Scalar lhs, Scalar rhs) {
  if (rhs > 0) return lhs / rhs;
  return lhs > 0 ? std::numeric_limits<Scalar>::infinity() : Scalar(0);
}

// Each component contributes one (decay, growth) or two (center) inequalities
// lhs <= rhs.
template <typename Scalar, typename Emit>
void component_inequalities(const ProjectedPair<Scalar>& pair, const GrowthConstants<Scalar>& c, Emit&& emit) {
  using std::exp;
  const Scalar growth = exp(c.rate * pair.gap());
  switch (role_of(pair.component)) {
    case ComponentRole::kStable:
      emit(growth * pair.at_t, c.gain * pair.at_s);
      break;
    case ComponentRole::kUnstable:
      emit(growth * pair.at_s, c.gain * pair.at_t);
      break;
    case ComponentRole::kCenter:
      emit(pair.at_t, c.gain * growth * pair.at_s);
      emit(pair.at_s, c.gain * growth * pair.at_t);
      break;
  }
}

template <typename Scalar>
SpectralCertificate<Scalar> verify_split(const SkewEvolutionSystem<Scalar>& sys, const CompatibleFamilySet<Scalar>& set,
                                         const SpectralConstants<Scalar>& constants, const SampleGrid<Scalar>& grid,
                                         SplitMode mode, Scalar slack) {
  const std::size_t expected = mode == SplitMode::kDichotomy ? 2 : 3;
  if (set.size() != expected)
    throw std::invalid_argument(to_string(mode) + " needs " + std::to_string(expected) + " projector families");
  validate_constants(constants, expected);

  SpectralCertificate<Scalar> cert;
  cert.mode = mode;
  cert.constants = constants;
  cert.grid = grid;
  ViolationLog<Scalar> log;
  cert.skipped = sweep_projected_pairs(sys, set, grid, [&](const ProjectedPair<Scalar>& pair) {
    component_inequalities(pair, constants.components[pair.component], [&](Scalar lhs, Scalar rhs) {
      ++cert.checked;
      if (lhs <= rhs * (Scalar(1) + slack)) {
        log.observe(safe_ratio(lhs, rhs));
        return;
      }
      log.offer({pair.t, pair.s, pair.t0, pair.shift, pair.vector_index, static_cast<int>(pair.component + 1), lhs, rhs});
    });
  });
  cert.violations = log.take();
  cert.worst_ratio = log.worst();
  if (cert.violations.empty())
    cert.verdict = mode == SplitMode::kDichotomy ? Verdict::kDichotomic : Verdict::kTrichotomic;
  else
    cert.verdict = Verdict::kRejected;
  return cert;
}

}  // namespace detail

/// Checks e^{nu1(t-s)} |Phi(t,t0,x)P1 v| <= N1 |Phi(s,t0,x)P1 v| and
/// e^{nu2(t-s)} |Phi(s,t0,x)P2 v| <= N2 |Phi(t,t0,x)P2 v| at every grid tuple,
/// accepting lhs <= rhs * (1 + slack).
template <typename Scalar>
SpectralCertificate<Scalar> verify_dichotomy(const SkewEvolutionSystem<Scalar>& sys,
                                             const CompatibleFamilySet<Scalar>& set,
                                             const SpectralConstants<Scalar>& constants,
                                             const SampleGrid<Scalar>& grid, Scalar slack = Scalar(1e-9)) {
  return detail::verify_split(sys, set, constants, grid, SplitMode::kDichotomy, slack);
}

/// verify_dichotomy plus the two-sided center bounds
/// |Phi(t)P3 v| <= N3 e^{nu3(t-s)} |Phi(s)P3 v| and the same with t, s swapped on the norms.
template <typename Scalar>
SpectralCertificate<Scalar> verify_trichotomy(const SkewEvolutionSystem<Scalar>& sys,
                                              const CompatibleFamilySet<Scalar>& set,
                                              const SpectralConstants<Scalar>& constants,
                                              const SampleGrid<Scalar>& grid, Scalar slack = Scalar(1e-9)) {
  return detail::verify_split(sys, set, constants, grid, SplitMode::kTrichotomy, slack);
}

namespace detail {

template <typename Scalar>
struct ExponentRange {
  Scalar lo = std::numeric_limits<Scalar>::infinity();
  Scalar hi = -std::numeric_limits<Scalar>::infinity();
  bool degenerate = false;
  std::size_t pairs = 0;

  void add(const ProjectedPair<Scalar>& pair) {
    if (pair.gap() <= 0) return;
    ++pairs;
    if (pair.at_s <= 0 || pair.at_t <= 0) {
      // A trajectory that collapses to zero (or leaves zero) has rate -inf / +inf.
      if (pair.at_s > 0 || pair.at_t > 0) degenerate = true;
      return;
    }
    using std::log;
    const Scalar r = log(pair.at_t / pair.at_s) / pair.gap();
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
};

template <typename Scalar>
Scalar rate_from_range(const ExponentRange<Scalar>& range, ComponentRole role) {
  using std::abs;
  switch (role) {
    case ComponentRole::kStable: return -range.hi;
    case ComponentRole::kUnstable: return range.lo;
    case ComponentRole::kCenter: return std::max(abs(range.lo), abs(range.hi));
  }
  return 0;
}

template <typename Scalar>
Scalar minimal_gain(const ProjectedPair<Scalar>& pair, Scalar rate) {
  Scalar worst = 1;
  GrowthConstants<Scalar> unit{Scalar(1), rate};
  component_inequalities(pair, unit, [&](Scalar lhs, Scalar rhs) { worst = std::max(worst, safe_ratio(lhs, rhs)); });
  return worst;
}

}  // namespace detail

/// Sharp grid constants per component. The exponent of a pair is
/// r = ln(|Phi(t)P_k v| / |Phi(s)P_k v|) / (t - s); the rate is -max r (stable),
/// min r (unstable) or max |r| (center), and the gain is the smallest N >= 1
/// making the inequality hold at every tuple with that rate. Reported both
/// uniformly over the grid and per initial state.
template <typename Scalar>
RateEstimate<Scalar> estimate_sharp_rates(const SkewEvolutionSystem<Scalar>& sys,
                                          const CompatibleFamilySet<Scalar>& set, const SampleGrid<Scalar>& grid) {
  std::vector<ProjectedPair<Scalar>> pairs;
  sweep_projected_pairs(sys, set, grid, [&](const ProjectedPair<Scalar>& pair) { pairs.push_back(pair); });
  if (std::none_of(grid.dts.begin(), grid.dts.end(), [](Scalar dt) { return dt > 0; }))
    throw std::invalid_argument("estimate_sharp_rates: grid has no pair with t > s");

  const std::size_t n = set.size();
  auto summarize = [&](auto&& keep) {
    std::vector<detail::ExponentRange<Scalar>> ranges(n);
    for (const auto& pair : pairs)
      if (keep(pair)) ranges[pair.component].add(pair);
    std::vector<ComponentEstimate<Scalar>> out(n);
    for (std::size_t k = 0; k < n; ++k) {
      auto& est = out[k];
      const auto& range = ranges[k];
      est.pairs = range.pairs;
      est.degenerate = range.degenerate;
      if (range.pairs == 0 || range.lo > range.hi) {
        // No informative pair: nothing to bound.
        est.rate = role_of(k) == ComponentRole::kCenter ? Scalar(0) : std::numeric_limits<Scalar>::infinity();
        est.min_exponent = est.max_exponent = 0;
      } else {
        est.min_exponent = range.lo;
        est.max_exponent = range.hi;
        est.rate = detail::rate_from_range(range, role_of(k));
      }
      if (est.degenerate) {
        est.rate = role_of(k) == ComponentRole::kCenter ? std::numeric_limits<Scalar>::infinity()
                                                        : -std::numeric_limits<Scalar>::infinity();
        est.gain = std::numeric_limits<Scalar>::infinity();
        continue;
      }
      const Scalar rate = std::isfinite(static_cast<double>(est.rate)) ? est.rate : Scalar(0);
      for (const auto& pair : pairs)
        if (pair.component == k && keep(pair)) est.gain = std::max(est.gain, detail::minimal_gain(pair, rate));
    }
    return out;
  };

  RateEstimate<Scalar> estimate;
  estimate.uniform = summarize([](const ProjectedPair<Scalar>&) { return true; });
  for (Scalar shift : grid.shifts)
    estimate.per_state.push_back(
        {shift, summarize([shift](const ProjectedPair<Scalar>& pair) { return pair.shift == shift; })});
  return estimate;
}

struct CertifyOptions {
  double rate_safety = 0.95;      // stable/unstable rates are multiplied by this, center rates divided
  double gain_inflation = 1.05;
  double horizon_extension = 2.0;  // verification reaches this multiple of the largest gap
  double min_center_rate = 1e-6;
  double slack = 1e-9;
};

/// Estimates sharp constants, backs them off by the safety factors and verifies
/// them on the refined grid (double density, horizon extended). Any
/// certificate it accepts therefore also passes on refine_grid(grid).
template <typename Scalar>
SpectralCertificate<Scalar> certify(const SkewEvolutionSystem<Scalar>& sys, const CompatibleFamilySet<Scalar>& set,
                                    const SampleGrid<Scalar>& grid, SplitMode mode,
                                    const CertifyOptions& options = {}) {
  const std::size_t expected = mode == SplitMode::kDichotomy ? 2 : 3;
  if (set.size() != expected)
    throw std::invalid_argument("certify " + to_string(mode) + " needs " + std::to_string(expected) +
                                " projector families");
  RateEstimate<Scalar> estimate = estimate_sharp_rates(sys, set, grid);

  SpectralConstants<Scalar> constants;
  std::string problem;
  for (std::size_t k = 0; k < expected; ++k) {
    const auto& est = estimate.uniform[k];
    GrowthConstants<Scalar> c;
    c.gain = est.gain * Scalar(options.gain_inflation);
    if (role_of(k) == ComponentRole::kCenter)
      c.rate = std::max(est.rate / Scalar(options.rate_safety), Scalar(options.min_center_rate));
    else
      c.rate = std::isinf(static_cast<double>(est.rate)) && est.rate > 0 ? Scalar(1) : est.rate * Scalar(options.rate_safety);
    if (est.degenerate)
      problem += "component " + std::to_string(k + 1) + " is degenerate; ";
    else if (!(c.rate > 0) || !std::isfinite(static_cast<double>(c.rate)))
      problem += "component " + std::to_string(k + 1) + " has no positive exponential rate; ";
    else if (!std::isfinite(static_cast<double>(c.gain)))
      problem += "component " + std::to_string(k + 1) + " has unbounded gain; ";
    constants.components.push_back(c);
  }

  const SampleGrid<Scalar> check_grid = extend_horizon(refine_grid(grid), Scalar(options.horizon_extension));
  if (!problem.empty()) {
    SpectralCertificate<Scalar> cert;
    cert.verdict = Verdict::kRejected;
    cert.mode = mode;
    cert.constants = constants;
    cert.grid = check_grid;
    cert.estimate = std::move(estimate);
    cert.note = "estimation failed: " + problem;
    return cert;
  }
  SpectralCertificate<Scalar> cert =
      detail::verify_split(sys, set, constants, check_grid, mode, Scalar(options.slack));
  cert.estimate = std::move(estimate);
  cert.note = cert.accepted() ? "grid-verified evidence; not a proof for all (t, s)"
                              : "estimated constants failed verification on the refined grid";
  return cert;
}

}  // namespace skewflow
