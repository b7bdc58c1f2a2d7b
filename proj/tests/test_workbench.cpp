#include <cmath>
#include <sstream>

#include "doctest.h"
#include "skewflow/workbench/run.hpp"

using namespace skewflow;
using namespace skewflow::workbench;

namespace {

AnalysisConfig config(const char* text) { return parse_config(json::parse(text)); }

std::vector<std::string> issues_of(const char* text) {
  try {
    config(text);
  } catch (const ConfigError& e) {
    return e.issues();
  }
  return {};
}

bool mentions(const std::vector<std::string>& issues, const std::string& field) {
  for (const auto& i : issues)
    if (i.rfind(field + ":", 0) == 0) return true;
  return false;
}

}  // namespace

TEST_CASE("config defaults and canonical echo") {
  const auto c = config(R"({"command": "certify"})");
  CHECK(c.system.example == "ued");
  CHECK(c.seed == 42);
  CHECK(c.grid.dts == std::vector<double>{0, 0.25, 1, 5, 20});
  const auto again = parse_config(to_json(c));
  CHECK(to_json(again).dump() == to_json(c).dump());

  const auto aliased = config(R"({"command": "criterion-3-2", "system": {"example": "uet"}})");
  CHECK(aliased.command == Command::kIntegralCriterion);
}

TEST_CASE("config errors name their fields") {
  CHECK(mentions(issues_of(R"({"system": {"example": "uet", "mu": 2}, "command": "certify"})"), "system.mu"));
  CHECK(mentions(issues_of(R"({"system": {"example": "nope"}, "command": "certify"})"), "system.example"));
  CHECK(mentions(issues_of(R"({"system": {"example": "ued"}})"), "command"));
  CHECK(mentions(issues_of(R"({"command": "certify", "grid": {"dt": [0, -1]}})"), "grid.dt[1]"));
  CHECK(mentions(issues_of(R"({"command": "certify", "grid": {"dt": "many"}})"), "grid.dt"));
  CHECK(mentions(issues_of(R"({"command": "certify", "seed": -3})"), "seed"));
  CHECK(mentions(issues_of(R"({"command": "certify", "sytem": {}})"), "sytem"));
  CHECK(mentions(issues_of(R"({"command": "classify"})"), "constants"));
  CHECK(mentions(issues_of(R"({"command": "certify", "projectors": {"partition": [[0], [2]]}})"),
                 "projectors.partition[1]"));
  CHECK(mentions(issues_of(R"({"system": {"example": "ses"}, "command": "certify"})"), "projectors"));
  CHECK(mentions(issues_of(R"({"command": "growth-criterion", "criterion": {"kind": "affine_over_const", "c": -1}})"),
                 "criterion"));
  CHECK(mentions(issues_of(R"({"command": "certify", "system": {"profile": {"kind": "tabulated", "nodes": [0, 1], "values": [1, 0.5]}}})"),
                 "system.integration"));

  // several problems are reported together
  const auto many = issues_of(R"({"command": "certify", "grid": {"t0": [], "shifts": [-1]}, "slack": -1})");
  CHECK(many.size() >= 3);
}

TEST_CASE("reports round trip byte for byte") {
  for (const char* text :
       {R"({"command": "certify"})", R"({"command": "verify-axioms", "system": {"example": "ses", "p": 2}, "grid": {"axiom_samples": 50}})",
        R"({"command": "integral-criterion", "system": {"example": "uet"}, "grid": {"dt": [0, 1, 5]}})",
        R"({"command": "classify", "system": {"example": "custom_diagonal", "exponents": [3, -2]}, "projectors": {"partition": [[0], [1]]}, "constants": [[1, 2], [1, 3]]})"}) {
    const auto result = run_config(config(text));
    const std::string first = serialize(result.report);
    const std::string second = serialize(parse_report(first));
    CHECK(first == second);
    CHECK(first.find("NaN") == std::string::npos);
  }
}

TEST_CASE("non-finite values survive as null") {
  AnalysisReport r;
  r.config = json::object();
  r.violations.push_back({"verifier", 1, 0, 0, 0, 0, 1, 1.0, 0.0, std::numeric_limits<double>::infinity()});
  const std::string text = serialize(r);
  CHECK(text.find("\"ratio\": null") != std::string::npos);
  CHECK(serialize(parse_report(text)) == text);
}

TEST_CASE("identical configs give identical reports") {
  const auto c = config(R"({"command": "certify", "system": {"example": "uet"}})");
  CHECK(serialize(run_config(c).report) == serialize(run_config(c).report));

  auto other = c;
  other.seed = 7;
  CHECK(serialize(run_config(other).report) != serialize(run_config(c).report));
}

TEST_CASE("commands reproduce the example verdicts") {
  const auto axioms = run_config(config(R"({"command": "verify-axioms", "system": {"example": "ses", "p": 3}})")).report;
  CHECK(axioms.passed);
  CHECK(axioms.tuples == 1000);

  const auto ued = run_config(config(R"({"command": "certify"})")).report;
  CHECK(ued.verdict == "dichotomic");
  REQUIRE(ued.certificates.size() == 1);
  CHECK(ued.certificates[0].constants[0].rate >= 1.9);
  CHECK(ued.certificates[0].constants[1].rate >= 2.85);

  const auto uet = run_config(config(R"({"command": "integral-criterion", "system": {"example": "uet"}})")).report;
  CHECK(uet.passed);
  CHECK(uet.verdict == "trichotomic");
  REQUIRE(uet.criterion.has_value());
  CHECK(*uet.criterion->sup_gain == doctest::Approx(1.0));
  CHECK(*uet.criterion->center_rate == doctest::Approx(2.0));
  CHECK(uet.criterion->derived.size() == 3);

  const auto literal = run_config(config(R"({"command": "verify-axioms", "system": {"example": "uet", "literal_t0": true}, "grid": {"axiom_samples": 100}})")).report;
  CHECK_FALSE(literal.passed);
}

TEST_CASE("plot rows match direct skew evaluation") {
  const auto c = config(R"({"command": "certify", "system": {"example": "uet"}, "output": {"plot": "plot.csv"}})");
  const auto result = run_config(c);
  const auto ex = build_system(c);
  CHECK(result.plot.size() == 2 * 3 * 5 * 3 * 3);
  for (const auto& row : result.plot) {
    const auto x = ex.system.state(row.x_shift);
    const Vector<double> v = ex.families[static_cast<std::size_t>(row.component - 1)](x) * Vector<double>::Ones(3);
    const auto direct = evaluate_skew(ex.system, row.t, row.t0, x, v);
    CHECK(row.norm == fiber_norm(direct.second));
    CHECK(row.log_norm == std::log(row.norm));
  }

  std::ostringstream csv;
  write_plot_csv(csv, result.plot);
  std::istringstream lines(csv.str());
  std::string header;
  std::getline(lines, header);
  CHECK(header == "t,s,t0,x_shift,component,norm,log_norm");
  std::size_t count = 0;
  for (std::string line; std::getline(lines, line);) ++count;
  CHECK(count == result.plot.size());
}
