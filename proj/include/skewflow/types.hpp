#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace skewflow {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Raised when a time pair or state lies outside the domain of a map.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when a sampled integrand stops being finite.
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class IntegralMode { kClosedForm, kQuadrature };

/// Pair (t, s) with t >= s >= 0.
template <typename Scalar>
struct TimePair {
  Scalar t;
  Scalar s;

  static TimePair make(Scalar t, Scalar s) {
    if (!std::isfinite(static_cast<double>(t)) || !std::isfinite(static_cast<double>(s)))
      throw DomainError("time pair must be finite");
    if (s < Scalar(0))
      throw DomainError("time pair requires s >= 0, got s = " + std::to_string(static_cast<double>(s)));
    if (t < s)
      throw DomainError("time pair requires t >= s, got t = " + std::to_string(static_cast<double>(t)) +
                        ", s = " + std::to_string(static_cast<double>(s)));
    return TimePair{t, s};
  }

  Scalar gap() const { return t - s; }
};

template <typename Scalar>
inline void require_time_order(Scalar t, Scalar s) {
  (void)TimePair<Scalar>::make(t, s);
}

/// The fiber norm |v_1| + ... + |v_p|.
template <typename Derived>
inline typename Derived::Scalar fiber_norm(const Eigen::MatrixBase<Derived>& v) {
  return v.template lpNorm<1>();
}

// Platform-independent draws; std::uniform_real_distribution is not
// reproducible across standard libraries.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

/// A multiple of 1/denominator in [0, max_value]; sums of such values stay exact.
inline double dyadic(std::mt19937_64& rng, double max_value, std::uint64_t denominator = 256) {
  const auto steps = static_cast<std::uint64_t>(max_value * static_cast<double>(denominator));
  return static_cast<double>(rng() % (steps + 1)) / static_cast<double>(denominator);
}

}  // namespace skewflow
