#include <cmath>
#include <random>

#include "doctest.h"
#include "skewflow/axioms.hpp"
#include "skewflow/builders.hpp"

using namespace skewflow;

namespace {

// e^{2 - e^{-1}}: the closed-form integral of 1 + e^{-u} over [0, 1] is 2 - e^{-1}.
const double kUnitGrowth = std::exp(2.0 - std::exp(-1.0));

SkewEvolutionSystem<double> translation(Eigen::Index p, IntegralMode mode = IntegralMode::kClosedForm) {
  CocycleOptions options;
  options.mode = mode;
  return build_example_translation(default_profile<double>(), p, options);
}

}  // namespace

TEST_CASE("time pairs") {
  CHECK(TimePair<double>::make(2.0, 1.0).gap() == 1.0);
  CHECK_NOTHROW(TimePair<double>::make(0.0, 0.0));
  CHECK_THROWS_AS(TimePair<double>::make(1.0, 2.0), DomainError);
  CHECK_THROWS_AS(TimePair<double>::make(1.0, -1.0), DomainError);
  CHECK_THROWS_AS(TimePair<double>::make(std::nan(""), 0.0), DomainError);
}

TEST_CASE("evaluate_semiflow translates states") {
  const auto sys = translation(1);
  const auto f2 = sys.state(2.0);
  CHECK(evaluate_semiflow(sys, 3.0, 3.0, f2) == f2);
  CHECK(evaluate_semiflow(sys, 5.0, 3.0, f2) == sys.state(4.0));
  CHECK(evaluate_semiflow(sys, 5.0, 3.0, f2)(0.7) == (*sys.base)(4.7));

  std::mt19937_64 rng(1);
  for (int i = 0; i < 100; ++i) {
    const auto x = sys.state(dyadic(rng, 20.0));
    CHECK(evaluate_semiflow(sys, 7.0, 5.0, evaluate_semiflow(sys, 5.0, 3.0, x)) == evaluate_semiflow(sys, 7.0, 3.0, x));
  }
  CHECK_THROWS_AS(evaluate_semiflow(sys, 1.0, 2.0, f2), DomainError);
  CHECK_THROWS_AS(evaluate_semiflow(sys, 1.0, -1.0, f2), DomainError);
}

TEST_CASE("evaluate_cocycle") {
  const auto sys = translation(1);
  const auto f0 = sys.state(0.0);
  CHECK(evaluate_cocycle(sys, 4.0, 4.0, f0) == Matrix<double>::Identity(1, 1));
  CHECK(evaluate_cocycle(sys, 1.0, 0.0, f0)(0, 0) == doctest::Approx(kUnitGrowth).epsilon(1e-14));
  CHECK(kUnitGrowth == doctest::Approx(5.1147).epsilon(1e-4));
  CHECK_THROWS_AS(evaluate_cocycle(sys, 0.0, 1.0, f0), DomainError);

  const auto quad = translation(1, IntegralMode::kQuadrature);
  CHECK(evaluate_cocycle(quad, 1.0, 0.0, f0)(0, 0) == doctest::Approx(kUnitGrowth).epsilon(1e-10));

  // a cocycle whose exponent blows up surfaces as an error, not as inf
  auto broken = sys;
  broken.cocycle = [](double, double, const StateProfile<double>&) {
    return Matrix<double>::Constant(1, 1, std::numeric_limits<double>::infinity());
  };
  CHECK_THROWS_AS(evaluate_cocycle(broken, 1.0, 0.0, f0), QuadratureError);
}

TEST_CASE("evaluate_skew") {
  const auto sys = translation(2);
  const auto f0 = sys.state(0.0);
  const Vector<double> ones = Vector<double>::Ones(2);

  const auto [same_x, same_v] = evaluate_skew(sys, 2.0, 2.0, f0, ones);
  CHECK(same_x == f0);
  CHECK(same_v == ones);

  const auto [x1, v1] = evaluate_skew(sys, 1.0, 0.0, f0, ones);
  CHECK(x1 == sys.state(1.0));
  CHECK(v1(0) == doctest::Approx(kUnitGrowth).epsilon(1e-14));
  CHECK(v1(1) == doctest::Approx(kUnitGrowth).epsilon(1e-14));

  const auto [x_zero, v_zero] = evaluate_skew(sys, 3.0, 1.0, f0, Vector<double>(Vector<double>::Zero(2)));
  CHECK(x_zero == sys.state(2.0));
  CHECK(v_zero.isZero(0.0));

  CHECK_THROWS_AS(evaluate_skew(sys, 1.0, 0.0, f0, Vector<double>(Vector<double>::Ones(3))), std::invalid_argument);
}

TEST_CASE("fiber norm homogeneity") {
  const auto ex = build_example_dichotomy(default_profile<double>());
  std::mt19937_64 rng(21);
  for (int i = 0; i < 200; ++i) {
    const auto x = ex.system.state(uniform(rng, 0.0, 10.0));
    const double s = uniform(rng, 0.0, 5.0), t = s + uniform(rng, 0.0, 5.0);
    const Matrix<double> op = evaluate_cocycle(ex.system, t, s, x);
    Vector<double> v(2);
    v << uniform(rng, -1, 1), uniform(rng, -1, 1);
    // powers of two scale without rounding
    for (double alpha : {2.0, -0.5, 0.125, -8.0})
      CHECK(fiber_norm(op * (alpha * v)) == std::abs(alpha) * fiber_norm(op * v));
    const double alpha = uniform(rng, -3, 3);
    CHECK(fiber_norm(op * (alpha * v)) == doctest::Approx(std::abs(alpha) * fiber_norm(op * v)).epsilon(1e-15));
  }
}

TEST_CASE("semiflow axioms") {
  const auto sys = translation(1);

  SUBCASE("translation semiflow is exact on a random dyadic grid") {
    const auto grid = random_axiom_grid(sys, 1000, 42);
    const auto report = check_semiflow_axioms(sys, grid, 0.0);
    CHECK(report.passed);
    CHECK(report.residual("identity") == 0.0);
    CHECK(report.residual("composition") == 0.0);
    CHECK(report.samples == 1000);
  }

  SUBCASE("phi(t, s, x) = x_t breaks composition once s > 0") {
    auto broken = sys;
    broken.semiflow = [](double t, double, const StateProfile<double>& x) { return shift_profile(x, t); };
    // t = 2, s = 1, t0 = 0: chained lands on f_3, direct on f_2
    const AxiomGrid<double> one{{2.0, 1.0, 0.0, sys.state(0.0)}};
    const auto report = check_semiflow_axioms(broken, one, 1e-9);
    CHECK_FALSE(report.passed);
    CHECK(report.residual("composition") == doctest::Approx(profile_distance(sys.state(3.0), sys.state(2.0))));
    CHECK(report.residual("composition") > 0.08);
  }

  SUBCASE("identity-only grid") {
    AxiomGrid<double> grid;
    for (double t : {0.0, 1.0, 7.5}) grid.push_back({t, t, t, sys.state(t)});
    CHECK(check_semiflow_axioms(sys, grid, 0.0).passed);
  }

  CHECK_THROWS_AS(check_semiflow_axioms(sys, AxiomGrid<double>{}, 1e-9), std::invalid_argument);
  CHECK_THROWS_AS(check_semiflow_axioms(sys, AxiomGrid<double>{{1.0, 2.0, 0.0, sys.state(0.0)}}, 1e-9), DomainError);
}

TEST_CASE("cocycle axioms") {
  const Tolerances tol;

  SUBCASE("closed-form translation cocycle") {
    const auto sys = translation(3);
    const auto report = check_cocycle_axioms(sys, random_axiom_grid(sys, 1000, 42), tol.closed_form);
    CHECK(report.passed);
    CHECK(report.residual("identity") == 0.0);
    CHECK(report.residual("composition") <= 1e-9);
  }

  SUBCASE("quadrature translation cocycle") {
    const auto sys = translation(2, IntegralMode::kQuadrature);
    const auto report = check_cocycle_axioms(sys, random_axiom_grid(sys, 1000, 43), tol.quadrature);
    CHECK(report.passed);
    CHECK(report.residual("composition") <= 1e-6);
  }

  SUBCASE("trichotomic example with the constant center rate") {
    const auto ex = build_example_trichotomy(default_profile<double>(), 3.0);
    const auto report = check_cocycle_axioms(ex.system, random_axiom_grid(ex.system, 1000, 44), tol.closed_form);
    CHECK(report.passed);
    CHECK(report.residual("composition") <= 1e-9);
  }

  SUBCASE("center rate read from the argument state is not a cocycle") {
    const auto ex = build_example_trichotomy(default_profile<double>(), 3.0, CenterRate::kStateOrigin);
    // t0 = 0, s = 1, t = 2, x = f_0: exponents differ by (t - s)(x(0) - x(s - t0)) = 1 - e^{-1}
    const AxiomGrid<double> one{{2.0, 1.0, 0.0, ex.system.state(0.0)}};
    const auto report = check_cocycle_axioms(ex.system, one, tol.closed_form);
    CHECK_FALSE(report.passed);
    const auto direct = evaluate_cocycle(ex.system, 2.0, 0.0, ex.system.state(0.0));
    const double expected = direct(2, 2) * std::abs(std::exp(1.0 - std::exp(-1.0)) - 1.0) /
                            std::max(1.0, direct.cwiseAbs().maxCoeff());
    CHECK(report.residual("composition") == doctest::Approx(expected).epsilon(1e-9));
  }

  SUBCASE("literal reference-time formula fails both laws") {
    const auto ex = build_example_trichotomy_literal(default_profile<double>(), 3.0);
    const auto report = check_cocycle_axioms(ex.system, random_axiom_grid(ex.system, 200, 45), tol.closed_form);
    CHECK_FALSE(report.passed);
    CHECK(report.residual("identity") > 1e-3);
    CHECK(report.residual("composition") > 1e-3);
  }

  SUBCASE("tabulated profiles pass at the reduced tolerance") {
    const auto table = BaseProfile<double>::tabulated({0.0, 0.5, 2.0, 6.0}, {2.0, 1.6, 1.2, 1.0});
    const auto sys = build_example_translation(table, 1);
    CHECK(check_cocycle_axioms(sys, random_axiom_grid(sys, 300, 46), tol.tabulated).passed);
  }
}

TEST_CASE("cocycle axioms in long double") {
  const auto sys = build_example_translation(BaseProfile<long double>::exp_plus_const(1.0L, 1.0L, 1.0L), 2);
  const auto report = check_cocycle_axioms(sys, random_axiom_grid(sys, 200, 3), 1e-12L);
  CHECK(report.passed);
}
