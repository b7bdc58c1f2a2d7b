#include "skewflow/workbench/report.hpp"

#include <cmath>
#include <limits>

namespace skewflow::workbench {

namespace {

// JSON has no inf/nan; they are written as null and read back as nan.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double num_of(const json& j) { return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>(); }

json opt(const std::optional<double>& v) { return v ? num(*v) : json(nullptr); }

std::optional<double> opt_of(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) return std::nullopt;
  return num_of(*it);
}

json constants_json(const std::vector<ConstantsEntry>& entries) {
  json out = json::array();
  for (const auto& c : entries) out.push_back({{"component", c.component}, {"gain", num(c.gain)}, {"rate", num(c.rate)}});
  return out;
}

std::vector<ConstantsEntry> constants_of(const json& j) {
  std::vector<ConstantsEntry> out;
  for (const auto& c : j) out.push_back({c.at("component").get<int>(), num_of(c.at("gain")), num_of(c.at("rate"))});
  return out;
}

}  // namespace

json to_json(const AnalysisReport& r) {
  json residuals = json::array();
  for (const auto& e : r.residuals)
    residuals.push_back({{"law", e.law}, {"value", num(e.value)}, {"tolerance", num(e.tolerance)}, {"passed", e.passed}});

  json certificates = json::array();
  for (const auto& c : r.certificates)
    certificates.push_back({{"mode", c.mode},
                            {"verdict", c.verdict},
                            {"constants", constants_json(c.constants)},
                            {"worst_ratio", num(c.worst_ratio)},
                            {"checked", c.checked},
                            {"skipped", c.skipped},
                            {"note", c.note}});

  json criterion = nullptr;
  if (r.criterion) {
    const auto& k = *r.criterion;
    json deltas = json::array();
    for (double d : k.deltas) deltas.push_back(num(d));
    criterion = {{"function", k.function},
                 {"passed", k.passed},
                 {"checked", k.checked},
                 {"skipped", k.skipped},
                 {"worst_ratio", num(k.worst_ratio)},
                 {"deltas", deltas},
                 {"derived", constants_json(k.derived)},
                 {"sup_gain", opt(k.sup_gain)},
                 {"integral_bound", opt(k.integral_bound)},
                 {"integral_bound_half", opt(k.integral_bound_half)},
                 {"center_gain", opt(k.center_gain)},
                 {"center_rate", opt(k.center_rate)},
                 {"delta", opt(k.delta)},
                 {"notes", k.notes}};
  }

  json rates = json::array();
  for (const auto& row : r.rates)
    rates.push_back({{"scope", row.scope},
                     {"shift", num(row.shift)},
                     {"component", row.component},
                     {"rate", num(row.rate)},
                     {"gain", num(row.gain)},
                     {"degenerate", row.degenerate},
                     {"pairs", row.pairs}});

  json violations = json::array();
  for (const auto& v : r.violations)
    violations.push_back({{"source", v.source},
                          {"t", num(v.t)},
                          {"s", num(v.s)},
                          {"t0", num(v.t0)},
                          {"shift", num(v.shift)},
                          {"vector_index", v.vector_index},
                          {"component", v.component},
                          {"lhs", num(v.lhs)},
                          {"rhs", num(v.rhs)},
                          {"ratio", num(v.ratio)}});

  return {{"config", r.config},
          {"command", r.command},
          {"system", r.system},
          {"passed", r.passed},
          {"verdict", r.verdict},
          {"residuals", residuals},
          {"certificates", certificates},
          {"criterion", criterion},
          {"rates", rates},
          {"violations", violations},
          {"metadata", {{"seed", r.seed}, {"tuples", r.tuples}, {"scalar", r.scalar}, {"version", r.version}}}};
}

AnalysisReport report_from_json(const json& j) {
  AnalysisReport r;
  r.config = j.at("config");
  r.command = j.at("command").get<std::string>();
  r.system = j.at("system").get<std::string>();
  r.passed = j.at("passed").get<bool>();
  r.verdict = j.at("verdict").get<std::string>();
  for (const auto& e : j.at("residuals"))
    r.residuals.push_back({e.at("law").get<std::string>(), num_of(e.at("value")), num_of(e.at("tolerance")),
                           e.at("passed").get<bool>()});
  for (const auto& c : j.at("certificates"))
    r.certificates.push_back({c.at("mode").get<std::string>(), c.at("verdict").get<std::string>(),
                              constants_of(c.at("constants")), num_of(c.at("worst_ratio")),
                              c.at("checked").get<std::uint64_t>(), c.at("skipped").get<std::uint64_t>(),
                              c.at("note").get<std::string>()});
  if (const auto& k = j.at("criterion"); !k.is_null()) {
    CriterionSummary s;
    s.function = k.at("function").get<std::string>();
    s.passed = k.at("passed").get<bool>();
    s.checked = k.at("checked").get<std::uint64_t>();
    s.skipped = k.at("skipped").get<std::uint64_t>();
    s.worst_ratio = num_of(k.at("worst_ratio"));
    for (const auto& d : k.at("deltas")) s.deltas.push_back(num_of(d));
    s.derived = constants_of(k.at("derived"));
    auto read = [&](const char* key) {
      auto v = opt_of(k, key);
      return v && std::isnan(*v) && k.at(key).is_null() ? std::nullopt : v;
    };
    s.sup_gain = read("sup_gain");
    s.integral_bound = read("integral_bound");
    s.integral_bound_half = read("integral_bound_half");
    s.center_gain = read("center_gain");
    s.center_rate = read("center_rate");
    s.delta = read("delta");
    s.notes = k.at("notes").get<std::vector<std::string>>();
    r.criterion = std::move(s);
  }
  for (const auto& row : j.at("rates"))
    r.rates.push_back({row.at("scope").get<std::string>(), num_of(row.at("shift")), row.at("component").get<int>(),
                       num_of(row.at("rate")), num_of(row.at("gain")), row.at("degenerate").get<bool>(),
                       row.at("pairs").get<std::uint64_t>()});
  for (const auto& v : j.at("violations"))
    r.violations.push_back({v.at("source").get<std::string>(), num_of(v.at("t")), num_of(v.at("s")),
                            num_of(v.at("t0")), num_of(v.at("shift")), v.at("vector_index").get<std::uint64_t>(),
                            v.at("component").get<int>(), num_of(v.at("lhs")), num_of(v.at("rhs")),
                            num_of(v.at("ratio"))});
  const auto& m = j.at("metadata");
  r.seed = m.at("seed").get<std::uint64_t>();
  r.tuples = m.at("tuples").get<std::uint64_t>();
  r.scalar = m.at("scalar").get<std::string>();
  r.version = m.at("version").get<std::string>();
  return r;
}

std::string serialize(const AnalysisReport& r) { return to_json(r).dump(2) + "\n"; }

AnalysisReport parse_report(const std::string& text) { return report_from_json(json::parse(text)); }

}  // namespace skewflow::workbench
