#include <cmath>
#include <random>

#include "doctest.h"
#include "skewflow/builders.hpp"
#include "skewflow/classifier.hpp"

using namespace skewflow;

namespace {

SpectralConstants<double> constants2(double n1, double nu1, double n2, double nu2) {
  return {{{n1, nu1}, {n2, nu2}}};
}

SpectralConstants<double> constants3(double n1, double nu1, double n2, double nu2, double n3, double nu3) {
  return {{{n1, nu1}, {n2, nu2}, {n3, nu3}}};
}

// Integral of 1 + e^{-u} over [a, b].
double j_default(double a, double b) { return (b - a) + std::exp(-a) - std::exp(-b); }

// diag((1 + t - s)^{-1}, e^{t - s}): a polynomially decaying stable direction.
ExampleSystem<double> polynomial_system() {
  auto ex = build_example_dichotomy(default_profile<double>());
  ex.system.name = "polynomial";
  ex.system.cocycle = [](double t, double s, const StateProfile<double>&) {
    Matrix<double> op = Matrix<double>::Zero(2, 2);
    op(0, 0) = 1.0 / (1.0 + t - s);
    op(1, 1) = std::exp(t - s);
    return op;
  };
  return ex;
}

SampleGrid<double> long_grid(Eigen::Index dim) {
  auto grid = default_grid<double>(dim);
  grid.dts = {0, 0.25, 1, 5, 20, 50};
  return grid;
}

}  // namespace

TEST_CASE("dichotomic example with its stated constants") {
  const auto ex = build_example_dichotomy(default_profile<double>());
  const auto cert = verify_dichotomy(ex.system, ex.families, constants2(1, 2, 1, 3), default_grid<double>(2));
  CHECK(cert.verdict == Verdict::kDichotomic);
  CHECK(cert.violations.empty());
  CHECK(cert.worst_ratio <= 1.0 + 1e-9);
  CHECK(cert.checked > 1000);
}

TEST_CASE("zero vectors satisfy every inequality") {
  const auto ex = build_example_dichotomy(default_profile<double>());
  auto grid = default_grid<double>(2);
  grid.vectors = {Vector<double>::Zero(2)};
  const auto cert = verify_dichotomy(ex.system, ex.families, constants2(1, 50, 1, 50), grid);
  CHECK(cert.verdict == Verdict::kDichotomic);
  CHECK(cert.checked == 0);
}

TEST_CASE("sign-swapped dichotomic example is rejected") {
  const auto swapped = build_example_dichotomy(default_profile<double>(), {}, 2.0, -3.0);
  SampleGrid<double> grid = default_grid<double>(2);
  const auto cert = verify_dichotomy(swapped.system, swapped.families, constants2(1, 2, 1, 3), grid);
  CHECK(cert.verdict == Verdict::kRejected);
  CHECK_FALSE(cert.violations.empty());

  // hand evaluation at t0 = 0, s = 0, t = 0.25, x = f_0, v = e1:
  // lhs = e^{2 * 0.25} e^{2 J(0, 0.25)}, rhs = 1
  SampleGrid<double> one = grid;
  one.t0s = {0};
  one.s_offsets = {0};
  one.dts = {0.25};
  one.shifts = {0};
  one.vectors = {Vector<double>::Unit(2, 0)};
  const auto single = verify_dichotomy(swapped.system, swapped.families, constants2(1, 2, 1, 3), one);
  REQUIRE(single.violations.size() == 1);
  const auto& v = single.violations.front();
  CHECK(v.component == 1);
  CHECK(v.lhs == doctest::Approx(std::exp(0.5 + 2.0 * j_default(0, 0.25))).epsilon(1e-13));
  CHECK(v.rhs == doctest::Approx(1.0));
}

TEST_CASE("invalid constants are rejected before checking") {
  const auto ex = build_example_dichotomy(default_profile<double>());
  const auto grid = default_grid<double>(2);
  CHECK_THROWS_AS(verify_dichotomy(ex.system, ex.families, constants2(0.5, 2, 1, 3), grid), std::invalid_argument);
  CHECK_THROWS_AS(verify_dichotomy(ex.system, ex.families, constants2(1, 0, 1, 3), grid), std::invalid_argument);
  CHECK_THROWS_AS(verify_dichotomy(ex.system, ex.families, constants3(1, 2, 1, 3, 1, 1), grid), std::invalid_argument);
  const auto tri = build_example_trichotomy(default_profile<double>(), 3.0);
  CHECK_THROWS_AS(verify_dichotomy(tri.system, tri.families, constants2(1, 1, 1, 1), default_grid<double>(3)),
                  std::invalid_argument);
}

TEST_CASE("trichotomic example, per-state and uniform constants") {
  const auto ex = build_example_trichotomy(default_profile<double>(), 3.0);
  const auto grid = default_grid<double>(3);
  for (double shift : grid.shifts) {
    const double x0 = (*ex.system.base)(shift);
    const auto cert = verify_trichotomy(ex.system, ex.families, constants3(1, 3.0 - x0, 1, 1.0, 1, x0),
                                        restrict_to_shift(grid, shift));
    CHECK(cert.verdict == Verdict::kTrichotomic);
  }
  const auto uniform_cert = verify_trichotomy(ex.system, ex.families, constants3(1, 1.0, 1, 1.0, 1, 2.0), grid);
  CHECK(uniform_cert.verdict == Verdict::kTrichotomic);
}

TEST_CASE("equal times reduce every inequality to |w| <= N|w|") {
  const auto ex = build_example_trichotomy(default_profile<double>(), 3.0);
  auto grid = default_grid<double>(3);
  grid.dts = {0};
  const auto cert = verify_trichotomy(ex.system, ex.families, constants3(1, 100, 1, 100, 1, 100), grid);
  CHECK(cert.verdict == Verdict::kTrichotomic);
}

TEST_CASE("a vanishing center family makes trichotomy and dichotomy agree") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const auto base = BaseProfile<double>::exp_plus_const(uniform(rng, 0, 2), uniform(rng, 0.5, 2), uniform(rng, 0.2, 2));
    auto sys = build_diagonal_system<double>("embedded", base,
                                             {{uniform(rng, -3, 0.5), 0, 0}, {uniform(rng, -0.5, 3), 0, 0},
                                              {uniform(rng, -0.5, 3), 0, 0}});
    CompatibleFamilySet<double> two = CompatibleFamilySet<double>::coordinate(3, {{0}, {1, 2}});
    CompatibleFamilySet<double> three = two;
    three.families.push_back(ProjectorFamily<double>::constant(Matrix<double>::Zero(3, 3), 3));
    const double n1 = uniform(rng, 1, 2), nu1 = uniform(rng, 0.1, 3), n2 = uniform(rng, 1, 2), nu2 = uniform(rng, 0.1, 3);
    const auto grid = default_grid<double>(3, rng());
    const auto d = verify_dichotomy(sys, two, constants2(n1, nu1, n2, nu2), grid);
    const auto t = verify_trichotomy(sys, three, constants3(n1, nu1, n2, nu2, uniform(rng, 1, 2), uniform(rng, 0.1, 3)), grid);
    CHECK(d.accepted() == t.accepted());
    CHECK(d.violations.size() == t.violations.size());
  }
}

TEST_CASE("verdicts are invariant under scaling of the test vectors") {
  const auto ex = build_example_dichotomy(default_profile<double>());
  const auto grid = default_grid<double>(2);
  for (double alpha : {-3.0, 0.01, 250.0}) {
    auto scaled = grid;
    for (auto& v : scaled.vectors) v *= alpha;
    for (const auto& c : {constants2(1, 2, 1, 3), constants2(1, 2.5, 1, 3), constants2(1.2, 1, 1, 3.3)}) {
      CHECK(verify_dichotomy(ex.system, ex.families, c, grid).verdict ==
            verify_dichotomy(ex.system, ex.families, c, scaled).verdict);
    }
  }
}

TEST_CASE("weaker constants keep passing") {
  const auto ex = build_example_trichotomy(default_profile<double>(), 3.0);
  const auto grid = default_grid<double>(3);
  std::mt19937_64 rng(5);
  const auto base = constants3(1, 1.0, 1, 1.0, 1, 2.0);
  REQUIRE(verify_trichotomy(ex.system, ex.families, base, grid).accepted());
  for (int i = 0; i < 10; ++i) {
    auto weaker = base;
    for (auto& c : weaker.components) {
      c.gain *= uniform(rng, 1.0, 3.0);
      c.rate *= uniform(rng, 0.1, 1.0);
    }
    // a center rate may only grow
    weaker.components[2].rate = base.components[2].rate * uniform(rng, 1.0, 2.0);
    CHECK(verify_trichotomy(ex.system, ex.families, weaker, grid).accepted());
  }
}

TEST_CASE("sharp rate estimates") {
  SUBCASE("stable rate of the dichotomic example on one state") {
    const auto ex = build_example_dichotomy(default_profile<double>());
    const auto grid = restrict_to_shift(default_grid<double>(2), 0.0);
    const auto est = estimate_sharp_rates(ex.system, ex.families, grid);
    const double nu1 = est.uniform[0].rate;
    CHECK(nu1 >= 2.0);
    CHECK(nu1 <= 4.0);
    CHECK(est.uniform[0].gain == 1.0);

    // the per-pair exponent approaches -2 as t - s grows
    auto longer = grid;
    longer.s_offsets = {10};
    longer.dts = {40};
    const double r = -estimate_sharp_rates(ex.system, ex.families, longer).uniform[0].rate;
    CHECK(r == doctest::Approx(-2.0 * j_default(10, 50) / 40.0).epsilon(1e-12));
    CHECK(std::abs(r + 2.0) < 1e-5);
  }

  SUBCASE("constant profile gives the exact rate 2c") {
    const double c = 1.7;
    const auto ex = build_example_dichotomy(BaseProfile<double>::constant(c));
    const auto est = estimate_sharp_rates(ex.system, ex.families, default_grid<double>(2));
    CHECK(est.uniform[0].rate == doctest::Approx(2 * c).epsilon(1e-12));
    CHECK(est.uniform[0].min_exponent == doctest::Approx(-2 * c).epsilon(1e-12));
    CHECK(est.uniform[1].rate == doctest::Approx(3 * c).epsilon(1e-12));
    CHECK(est.uniform[0].gain == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("center exponent of the trichotomic example near t = s") {
    const auto ex = build_example_trichotomy(default_profile<double>(), 3.0);
    auto grid = default_grid<double>(3);
    grid.dts = {0, 1e-3};
    const auto est = estimate_sharp_rates(ex.system, ex.families, grid);
    for (const auto& state : est.per_state) {
      const double x0 = (*ex.system.base)(state.shift);
      CHECK(state.components[2].rate <= x0);
    }
  }

  SUBCASE("a collapsing component is flagged") {
    auto ex = build_example_dichotomy(default_profile<double>());
    ex.system.cocycle = [](double t, double s, const StateProfile<double>&) {
      Matrix<double> op = Matrix<double>::Identity(2, 2);
      if (t > s) op(0, 0) = 0.0;
      return op;
    };
    const auto est = estimate_sharp_rates(ex.system, ex.families, default_grid<double>(2));
    CHECK(est.uniform[0].degenerate);
    CHECK(std::isinf(est.uniform[0].rate));
  }

  SUBCASE("grid without t > s") {
    const auto ex = build_example_dichotomy(default_profile<double>());
    auto grid = default_grid<double>(2);
    grid.dts = {0};
    CHECK_THROWS_AS(estimate_sharp_rates(ex.system, ex.families, grid), std::invalid_argument);
  }
}

TEST_CASE("certify") {
  SUBCASE("dichotomic example") {
    const auto ex = build_example_dichotomy(default_profile<double>());
    const auto cert = certify(ex.system, ex.families, default_grid<double>(2), SplitMode::kDichotomy);
    REQUIRE(cert.verdict == Verdict::kDichotomic);
    CHECK(cert.constants.components[0].rate >= 1.9);
    CHECK(cert.constants.components[1].rate >= 2.85);
    REQUIRE(cert.estimate.has_value());
    CHECK(cert.estimate->per_state.size() == 3);
  }

  SUBCASE("trichotomic example") {
    const auto ex = build_example_trichotomy(default_profile<double>(), 3.0);
    const auto cert = certify(ex.system, ex.families, default_grid<double>(3), SplitMode::kTrichotomy);
    CHECK(cert.verdict == Verdict::kTrichotomic);
    CHECK(cert.estimate->uniform[1].rate >= 1.0);
  }

  SUBCASE("polynomial decay is not certified on a long grid") {
    const auto ex = polynomial_system();
    const auto cert = certify(ex.system, ex.families, long_grid(2), SplitMode::kDichotomy);
    CHECK(cert.verdict == Verdict::kRejected);
    CHECK_FALSE(cert.violations.empty());
    for (const auto& v : cert.violations) CHECK(v.component == 1);
  }

  SUBCASE("certificates pass on the refined grid") {
    const auto dich = build_example_dichotomy(BaseProfile<double>::rational_plus_const(1.0, 0.5));
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const auto grid = default_grid<double>(2, seed);
      const auto cert = certify(dich.system, dich.families, grid, SplitMode::kDichotomy);
      REQUIRE(cert.accepted());
      const auto again = verify_dichotomy(dich.system, dich.families, cert.constants, refine_grid(grid));
      CHECK(again.accepted());
      CHECK(again.violations.empty());
    }
  }

  SUBCASE("wrong family count") {
    const auto ex = build_example_dichotomy(default_profile<double>());
    CHECK_THROWS_AS(certify(ex.system, ex.families, default_grid<double>(2), SplitMode::kTrichotomy),
                    std::invalid_argument);
  }
}

TEST_CASE("grid refinement keeps the original tuples") {
  const auto grid = default_grid<double>(2, 7, 4);
  const auto fine = refine_grid(grid);
  CHECK(fine.dts.size() == 2 * grid.dts.size() - 1);
  CHECK(fine.vectors.size() == 2 + 8);
  for (std::size_t i = 0; i < grid.vectors.size(); ++i) CHECK(fine.vectors[i] == grid.vectors[i]);
  for (double dt : grid.dts) CHECK(std::find(fine.dts.begin(), fine.dts.end(), dt) != fine.dts.end());
  const auto longer = extend_horizon(grid, 2.0);
  CHECK(longer.max_gap() == 40.0);
}
