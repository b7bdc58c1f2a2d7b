#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>

#include "skewflow/types.hpp"

namespace skewflow {

/// Panels per unit length used when no density is given.
inline constexpr double kDefaultPanelDensity = 64.0;

/// Number of panels covering an interval of the given length at the given density.
inline std::size_t panels_for(double length, double density = kDefaultPanelDensity) {
  const double n = std::ceil(std::max(0.0, length) * density);
  return std::max<std::size_t>(1, static_cast<std::size_t>(n));
}

/// Composite Simpson rule over [a, b] with n_panels panels, each panel sampled
/// at its endpoints and midpoint. Exact for cubics.
template <typename Scalar, typename Fun>
Scalar simpson(Fun&& fun, Scalar a, Scalar b, std::size_t n_panels) {
  if (!(b >= a))
    throw DomainError("simpson: requires b >= a");
  if (n_panels == 0)
    throw std::invalid_argument("simpson: n_panels must be >= 1");
  if (a == b)
    return Scalar(0);

  const Scalar h = (b - a) / static_cast<Scalar>(n_panels);
  auto sample = [&](Scalar u) {
    const Scalar y = fun(u);
    if (!std::isfinite(static_cast<double>(y))) {
      std::ostringstream msg;
      msg << "simpson: non-finite integrand value " << static_cast<double>(y) << " at u = "
          << static_cast<double>(u) << " on [" << static_cast<double>(a) << ", "
          << static_cast<double>(b) << "]";
      throw QuadratureError(msg.str());
    }
    return y;
  };

  Scalar ends = sample(a) + sample(b);
  Scalar interior = 0;
  Scalar mids = 0;
  for (std::size_t i = 0; i < n_panels; ++i) {
    const Scalar left = a + h * static_cast<Scalar>(i);
    mids += sample(left + h / 2);
    if (i > 0)
      interior += sample(left);
  }
  return h / 6 * (ends + 2 * interior + 4 * mids);
}

/// Simpson over [a, b] with the panel count chosen from a density per unit length.
template <typename Scalar, typename Fun>
Scalar simpson_density(Fun&& fun, Scalar a, Scalar b, double density = kDefaultPanelDensity) {
  return simpson<Scalar>(std::forward<Fun>(fun), a, b,
                         panels_for(static_cast<double>(b - a), density));
}

}  // namespace skewflow
