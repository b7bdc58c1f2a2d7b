#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "skewflow/types.hpp"

namespace skewflow {

/// Tuples (t0, s = t0 + s_offset, t = s + dt, x = f_shift, v) for the
/// dichotomy/trichotomy checks. Vectors are the coordinate basis followed by
/// n_random seeded draws from [-1, 1]^p.
template <typename Scalar>
struct SampleGrid {
  std::vector<Scalar> t0s;
  std::vector<Scalar> dts;
  std::vector<Scalar> s_offsets;
  std::vector<Scalar> shifts;
  std::vector<Vector<Scalar>> vectors;
  std::uint64_t seed = 42;
  std::size_t n_random = 16;

  std::size_t tuple_count() const {
    return t0s.size() * dts.size() * s_offsets.size() * shifts.size() * vectors.size();
  }

  Scalar max_gap() const { return dts.empty() ? Scalar(0) : *std::max_element(dts.begin(), dts.end()); }
};

template <typename Scalar>
std::vector<Vector<Scalar>> grid_vectors(Eigen::Index dim, std::uint64_t seed, std::size_t n_random) {
  std::vector<Vector<Scalar>> vectors;
  for (Eigen::Index i = 0; i < dim; ++i) vectors.push_back(Vector<Scalar>::Unit(dim, i));
  std::mt19937_64 rng(seed);
  for (std::size_t k = 0; k < n_random; ++k) {
    Vector<Scalar> v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = Scalar(uniform(rng, -1.0, 1.0));
    vectors.push_back(std::move(v));
  }
  return vectors;
}

template <typename Scalar>
void validate_grid(const SampleGrid<Scalar>& grid) {
  auto check = [](const std::vector<Scalar>& values, const char* name) {
    if (values.empty())
      throw std::invalid_argument(std::string("sample grid: '") + name + "' is empty");
    for (Scalar v : values)
      if (!(v >= 0) || !std::isfinite(static_cast<double>(v)))
        throw std::invalid_argument(std::string("sample grid: '") + name + "' must hold finite nonnegative values");
  };
  check(grid.t0s, "t0");
  check(grid.dts, "dt");
  check(grid.s_offsets, "s_offsets");
  check(grid.shifts, "shifts");
  if (grid.vectors.empty())
    throw std::invalid_argument("sample grid: no test vectors");
}

/// t0 in {0, 1}, t - s in {0, 0.25, 1, 5, 20}, s - t0 in {0, 1, 5}, shifts
/// {0, 1, 10}, basis vectors plus 16 random ones.
template <typename Scalar>
SampleGrid<Scalar> default_grid(Eigen::Index dim, std::uint64_t seed = 42, std::size_t n_random = 16) {
  SampleGrid<Scalar> grid;
  grid.t0s = {0, 1};
  grid.dts = {0, 0.25, 1, 5, 20};
  grid.s_offsets = {0, 1, 5};
  grid.shifts = {0, 1, 10};
  grid.seed = seed;
  grid.n_random = n_random;
  grid.vectors = grid_vectors<Scalar>(dim, seed, n_random);
  return grid;
}

namespace detail {
template <typename Scalar>
std::vector<Scalar> with_midpoints(std::vector<Scalar> values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  std::vector<Scalar> out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out.push_back((values[i - 1] + values[i]) / 2);
    out.push_back(values[i]);
  }
  return out;
}
}  // namespace detail

/// Doubles the density: midpoints between consecutive values of every axis and
/// twice as many random vectors (the original draws are kept as a prefix).
template <typename Scalar>
SampleGrid<Scalar> refine_grid(const SampleGrid<Scalar>& grid) {
  SampleGrid<Scalar> fine = grid;
  fine.t0s = detail::with_midpoints(grid.t0s);
  fine.dts = detail::with_midpoints(grid.dts);
  fine.s_offsets = detail::with_midpoints(grid.s_offsets);
  fine.shifts = detail::with_midpoints(grid.shifts);
  const Eigen::Index dim = grid.vectors.empty() ? 0 : grid.vectors.front().size();
  fine.n_random = std::max<std::size_t>(1, 2 * grid.n_random);
  fine.vectors = grid_vectors<Scalar>(dim, grid.seed, fine.n_random);
  return fine;
}

/// Appends gaps beyond the largest one, up to factor * max gap.
template <typename Scalar>
SampleGrid<Scalar> extend_horizon(const SampleGrid<Scalar>& grid, Scalar factor) {
  if (!(factor >= 1))
    throw std::invalid_argument("extend_horizon: factor must be >= 1");
  SampleGrid<Scalar> out = grid;
  const Scalar top = grid.max_gap();
  if (factor > 1 && top > 0) {
    out.dts.push_back((top + factor * top) / 2);
    out.dts.push_back(factor * top);
  }
  return out;
}

template <typename Scalar>
SampleGrid<Scalar> restrict_to_shift(const SampleGrid<Scalar>& grid, Scalar shift) {
  SampleGrid<Scalar> out = grid;
  out.shifts = {shift};
  return out;
}

}  // namespace skewflow
