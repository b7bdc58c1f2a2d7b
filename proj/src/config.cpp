#include "skewflow/workbench/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace skewflow::workbench {

namespace {

std::string join(const std::vector<std::string>& lines) {
  std::string out = "invalid config";
  for (const auto& line : lines) out += "\n  " + line;
  return out;
}

std::string at(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

// Reads optional fields, recording a diagnostic per bad field instead of
// stopping at the first one.
class Reader {
 public:
  std::vector<std::string> issues;

  void fail(const std::string& path, const std::string& message) { issues.push_back(path + ": " + message); }

  const json* child(const json& obj, const std::string& key) const {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
  }

  const json* object(const json& obj, const std::string& key, const std::string& path) {
    const json* c = child(obj, key);
    if (c && !c->is_object()) {
      fail(at(path, key), "expected an object");
      return nullptr;
    }
    return c;
  }

  void allow_only(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      const bool known = std::any_of(keys.begin(), keys.end(), [&](const char* k) { return it.key() == k; });
      if (!known && it.key() != "description") fail(at(path, it.key()), "unknown field");
    }
  }

  bool number_at(const json& value, const std::string& path, double& out) {
    if (!value.is_number()) {
      fail(path, "expected a number");
      return false;
    }
    const double v = value.get<double>();
    if (!std::isfinite(v)) {
      fail(path, "must be finite");
      return false;
    }
    out = v;
    return true;
  }

  bool number(const json& obj, const std::string& key, const std::string& path, double& out) {
    const json* c = child(obj, key);
    return c && number_at(*c, at(path, key), out);
  }

  bool integer(const json& obj, const std::string& key, const std::string& path, long& out) {
    const json* c = child(obj, key);
    if (!c) return false;
    if (!c->is_number_integer()) {
      fail(at(path, key), "expected an integer");
      return false;
    }
    out = c->get<long>();
    return true;
  }

  bool boolean(const json& obj, const std::string& key, const std::string& path, bool& out) {
    const json* c = child(obj, key);
    if (!c) return false;
    if (!c->is_boolean()) {
      fail(at(path, key), "expected true or false");
      return false;
    }
    out = c->get<bool>();
    return true;
  }

  bool string(const json& obj, const std::string& key, const std::string& path, std::string& out) {
    const json* c = child(obj, key);
    if (!c) return false;
    if (!c->is_string()) {
      fail(at(path, key), "expected a string");
      return false;
    }
    out = c->get<std::string>();
    return true;
  }

  bool choice(const json& obj, const std::string& key, const std::string& path, std::string& out,
              std::initializer_list<const char*> options) {
    std::string value;
    if (!string(obj, key, path, value)) return false;
    if (std::none_of(options.begin(), options.end(), [&](const char* o) { return value == o; })) {
      std::string list;
      for (const char* o : options) list += (list.empty() ? "" : ", ") + std::string(o);
      fail(at(path, key), "'" + value + "' is not one of " + list);
      return false;
    }
    out = value;
    return true;
  }

  bool numbers_at(const json& value, const std::string& path, std::vector<double>& out) {
    if (!value.is_array()) {
      fail(path, "expected an array of numbers");
      return false;
    }
    std::vector<double> read;
    bool ok = true;
    for (std::size_t i = 0; i < value.size(); ++i) {
      double v = 0;
      ok = number_at(value[i], path + "[" + std::to_string(i) + "]", v) && ok;
      read.push_back(v);
    }
    if (ok) out = std::move(read);
    return ok;
  }

  bool numbers(const json& obj, const std::string& key, const std::string& path, std::vector<double>& out) {
    const json* c = child(obj, key);
    return c && numbers_at(*c, at(path, key), out);
  }
};

std::optional<BaseProfile<double>> make_profile(const ProfileSpec& spec, std::string& error) {
  try {
    switch (profile_kind_from_string(spec.kind)) {
      case ProfileKind::kExpPlusConst: return BaseProfile<double>::exp_plus_const(spec.a, spec.b, spec.l);
      case ProfileKind::kRationalPlusConst: return BaseProfile<double>::rational_plus_const(spec.a, spec.l);
      case ProfileKind::kConstant: return BaseProfile<double>::constant(spec.l);
      case ProfileKind::kTabulated: return BaseProfile<double>::tabulated(spec.nodes, spec.values);
    }
  } catch (const std::exception& e) {
    error = e.what();
  }
  return std::nullopt;
}

Eigen::Index system_dim(const SystemSpec& s) {
  if (s.example == "ses") return s.p;
  if (s.example == "ued") return 2;
  if (s.example == "uet") return 3;
  return static_cast<Eigen::Index>(s.exponents.size());
}

void read_profile(Reader& r, const json& j, const std::string& path, ProfileSpec& p) {
  r.allow_only(j, path, {"kind", "a", "b", "l", "nodes", "values"});
  r.choice(j, "kind", path, p.kind, {"exp_plus_const", "rational_plus_const", "constant", "tabulated"});
  r.number(j, "a", path, p.a);
  r.number(j, "b", path, p.b);
  r.number(j, "l", path, p.l);
  r.numbers(j, "nodes", path, p.nodes);
  r.numbers(j, "values", path, p.values);
}

void read_exponents(Reader& r, const json& j, const std::string& path, std::vector<DiagonalRate<double>>& out) {
  if (!j.is_array()) {
    r.fail(path, "expected an array");
    return;
  }
  out.clear();
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string here = path + "[" + std::to_string(i) + "]";
    DiagonalRate<double> rate;
    if (j[i].is_number()) {
      r.number_at(j[i], here, rate.integral);
    } else if (j[i].is_object()) {
      r.allow_only(j[i], here, {"integral", "time", "origin"});
      r.number(j[i], "integral", here, rate.integral);
      r.number(j[i], "time", here, rate.time);
      r.number(j[i], "origin", here, rate.origin);
    } else {
      r.fail(here, "expected a number or {integral, time, origin}");
    }
    out.push_back(rate);
  }
}

void read_system(Reader& r, const json& j, SystemSpec& s) {
  const std::string path = "system";
  r.allow_only(j, path,
               {"example", "profile", "p", "mu", "exponents", "literal_t0", "literal_reference_time", "center_rate",
                "integration", "panel_density"});
  r.choice(j, "example", path, s.example, {"ses", "ued", "uet", "custom_diagonal"});
  if (const json* p = r.object(j, "profile", path)) read_profile(r, *p, "system.profile", s.profile);
  r.integer(j, "p", path, s.p);
  r.number(j, "mu", path, s.mu);
  if (const json* e = r.child(j, "exponents")) read_exponents(r, *e, "system.exponents", s.exponents);
  r.boolean(j, "literal_t0", path, s.literal_t0);
  r.number(j, "literal_reference_time", path, s.literal_reference_time);
  r.choice(j, "center_rate", path, s.center_rate, {"base_origin", "state_origin"});
  r.choice(j, "integration", path, s.integration, {"closed_form", "quadrature"});
  r.number(j, "panel_density", path, s.panel_density);
}

void read_projectors(Reader& r, const json& j, ProjectorSpec& p) {
  const std::string path = "projectors";
  r.allow_only(j, path, {"kind", "partition", "matrices"});
  r.choice(j, "kind", path, p.kind, {"default", "coordinate", "matrix", "none"});
  if (const json* part = r.child(j, "partition")) {
    if (!part->is_array()) {
      r.fail("projectors.partition", "expected an array of index arrays");
    } else {
      p.partition.clear();
      for (std::size_t k = 0; k < part->size(); ++k) {
        const std::string here = "projectors.partition[" + std::to_string(k) + "]";
        std::vector<long> block;
        if (!(*part)[k].is_array()) r.fail(here, "expected an array of indices");
        else
          for (const auto& idx : (*part)[k]) {
            if (idx.is_number_integer()) block.push_back(idx.get<long>());
            else r.fail(here, "indices must be integers");
          }
        p.partition.push_back(std::move(block));
      }
      if (!j.contains("kind")) p.kind = "coordinate";
    }
  }
  if (const json* mats = r.child(j, "matrices")) {
    if (!mats->is_array()) {
      r.fail("projectors.matrices", "expected an array of matrices");
    } else {
      p.matrices.clear();
      for (std::size_t k = 0; k < mats->size(); ++k) {
        const std::string here = "projectors.matrices[" + std::to_string(k) + "]";
        std::vector<std::vector<double>> rows;
        if (!(*mats)[k].is_array()) r.fail(here, "expected an array of rows");
        else
          for (std::size_t i = 0; i < (*mats)[k].size(); ++i) {
            std::vector<double> row;
            r.numbers_at((*mats)[k][i], here + "[" + std::to_string(i) + "]", row);
            rows.push_back(std::move(row));
          }
        p.matrices.push_back(std::move(rows));
      }
      if (!j.contains("kind")) p.kind = "matrix";
    }
  }
}

void read_grid(Reader& r, const json& j, GridSpec& g) {
  const std::string path = "grid";
  r.allow_only(j, path, {"t0", "dt", "s_offsets", "shifts", "n_random_vectors", "axiom_samples"});
  r.numbers(j, "t0", path, g.t0s);
  r.numbers(j, "dt", path, g.dts);
  r.numbers(j, "s_offsets", path, g.s_offsets);
  r.numbers(j, "shifts", path, g.shifts);
  r.integer(j, "n_random_vectors", path, g.n_random_vectors);
  r.integer(j, "axiom_samples", path, g.axiom_samples);
}

void read_criterion(Reader& r, const json& j, CriterionSpec& c) {
  const std::string path = "criterion";
  r.allow_only(j, path,
               {"kind", "gain", "rate", "c", "nodes", "values", "deltas", "min_gap", "integral_cap",
                "saturation_growth"});
  r.choice(j, "kind", path, c.kind, {"scaled_exp", "affine_over_const", "tabulated"});
  r.number(j, "gain", path, c.gain);
  r.number(j, "rate", path, c.rate);
  r.number(j, "c", path, c.c);
  r.numbers(j, "nodes", path, c.nodes);
  r.numbers(j, "values", path, c.values);
  if (const json* d = r.child(j, "deltas")) {
    if (d->is_number()) {
      double v = 0;
      if (r.number_at(*d, "criterion.deltas", v)) c.deltas = {v};
    } else {
      r.numbers_at(*d, "criterion.deltas", c.deltas);
    }
  }
  r.number(j, "min_gap", path, c.min_gap);
  r.number(j, "integral_cap", path, c.integral_cap);
  r.number(j, "saturation_growth", path, c.saturation_growth);
}

void read_constants(Reader& r, const json& j, std::vector<GrowthConstants<double>>& out) {
  if (!j.is_array()) {
    r.fail("constants", "expected an array of {gain, rate}");
    return;
  }
  out.clear();
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string here = "constants[" + std::to_string(k) + "]";
    GrowthConstants<double> c;
    if (j[k].is_object()) {
      r.allow_only(j[k], here, {"gain", "rate"});
      if (!j[k].contains("gain") || !j[k].contains("rate")) r.fail(here, "needs both gain and rate");
      r.number(j[k], "gain", here, c.gain);
      r.number(j[k], "rate", here, c.rate);
    } else if (j[k].is_array() && j[k].size() == 2) {
      r.number_at(j[k][0], here + "[0]", c.gain);
      r.number_at(j[k][1], here + "[1]", c.rate);
    } else {
      r.fail(here, "expected {gain, rate} or [gain, rate]");
    }
    out.push_back(c);
  }
}

void check_grid(Reader& r, const GridSpec& g) {
  auto nonempty_nonneg = [&](const std::vector<double>& v, const char* name) {
    const std::string path = std::string("grid.") + name;
    if (v.empty()) r.fail(path, "must not be empty");
    for (std::size_t i = 0; i < v.size(); ++i)
      if (v[i] < 0) r.fail(path + "[" + std::to_string(i) + "]", "must be >= 0");
  };
  nonempty_nonneg(g.t0s, "t0");
  nonempty_nonneg(g.dts, "dt");
  nonempty_nonneg(g.s_offsets, "s_offsets");
  nonempty_nonneg(g.shifts, "shifts");
  if (g.n_random_vectors < 0) r.fail("grid.n_random_vectors", "must be >= 0");
  if (g.axiom_samples < 1) r.fail("grid.axiom_samples", "must be >= 1");
}

void check_semantics(Reader& r, AnalysisConfig& c) {
  auto& s = c.system;
  std::string profile_error;
  const auto profile = make_profile(s.profile, profile_error);
  if (!profile) r.fail("system.profile", profile_error);
  if (s.profile.kind == "tabulated" && s.integration == "closed_form")
    r.fail("system.integration", "tabulated profiles need \"quadrature\"");
  if (!(s.panel_density > 0)) r.fail("system.panel_density", "must be positive");

  if (s.example == "ses" && s.p < 1) r.fail("system.p", "must be >= 1");
  if (s.example == "custom_diagonal" && s.exponents.empty())
    r.fail("system.exponents", "custom_diagonal needs at least one exponent");
  if (s.example != "custom_diagonal" && !s.exponents.empty())
    r.fail("system.exponents", "only used with custom_diagonal");
  if (s.example == "uet" && profile && !(s.mu > (*profile)(0.0))) {
    std::ostringstream msg;
    msg << "must exceed f(0) = " << (*profile)(0.0);
    r.fail("system.mu", msg.str());
  }
  if (s.literal_t0 && s.example != "uet") r.fail("system.literal_t0", "only applies to the uet example");

  const Eigen::Index dim = system_dim(s);
  auto& p = c.projectors;
  if (p.kind == "coordinate") {
    if (p.partition.size() < 2 || p.partition.size() > 3) r.fail("projectors.partition", "needs 2 or 3 blocks");
    std::set<long> seen;
    for (std::size_t k = 0; k < p.partition.size(); ++k)
      for (long idx : p.partition[k]) {
        const std::string here = "projectors.partition[" + std::to_string(k) + "]";
        if (idx < 0 || idx >= dim) r.fail(here, "index " + std::to_string(idx) + " out of range for dimension " + std::to_string(dim));
        else if (!seen.insert(idx).second) r.fail(here, "index " + std::to_string(idx) + " appears twice");
      }
  } else if (p.kind == "matrix") {
    if (p.matrices.size() < 2 || p.matrices.size() > 3) r.fail("projectors.matrices", "needs 2 or 3 matrices");
    for (std::size_t k = 0; k < p.matrices.size(); ++k) {
      bool square = static_cast<Eigen::Index>(p.matrices[k].size()) == dim;
      for (const auto& row : p.matrices[k]) square = square && static_cast<Eigen::Index>(row.size()) == dim;
      if (!square)
        r.fail("projectors.matrices[" + std::to_string(k) + "]", "must be " + std::to_string(dim) + "x" + std::to_string(dim));
    }
  } else if (p.kind == "default" && (s.example == "ses" || s.example == "custom_diagonal")) {
    p.kind = "none";
  }

  std::size_t families = 0;
  if (p.kind == "coordinate") families = p.partition.size();
  else if (p.kind == "matrix") families = p.matrices.size();
  else if (p.kind == "default") families = s.example == "ued" ? 2 : 3;

  const bool needs_families = c.command != Command::kVerifyAxioms;
  if (needs_families && families == 0) r.fail("projectors", "command " + to_string(c.command) + " needs projector families");
  if (!c.mode.empty() && c.mode != "dichotomy" && c.mode != "trichotomy")
    r.fail("mode", "'" + c.mode + "' is not one of dichotomy, trichotomy");
  const std::size_t expected = c.mode == "dichotomy" ? 2 : c.mode == "trichotomy" ? 3 : families;
  if (needs_families && families != 0 && expected != families)
    r.fail("mode", c.mode + " needs " + std::to_string(expected) + " projector families, got " + std::to_string(families));
  if (c.command == Command::kGrowthCriterion && families != 0 && families != 2)
    r.fail("projectors", "the growth criterion needs 2 projector families");
  if (c.command == Command::kIntegralCriterion && families != 0 && families != 3)
    r.fail("projectors", "the integral criterion needs 3 projector families");

  if (c.command == Command::kClassify) {
    if (c.constants.empty()) r.fail("constants", "classify needs one {gain, rate} per component");
    else if (families != 0 && c.constants.size() != families)
      r.fail("constants", "expected " + std::to_string(families) + " entries, got " + std::to_string(c.constants.size()));
    for (std::size_t k = 0; k < c.constants.size(); ++k) {
      if (!(c.constants[k].gain >= 1)) r.fail("constants[" + std::to_string(k) + "].gain", "must be >= 1");
      if (!(c.constants[k].rate > 0)) r.fail("constants[" + std::to_string(k) + "].rate", "must be > 0");
    }
  }

  check_grid(r, c.grid);
  if (!(c.tolerances.closed_form > 0)) r.fail("tolerances.closed_form", "must be positive");
  if (!(c.tolerances.quadrature > 0)) r.fail("tolerances.quadrature", "must be positive");
  if (!(c.tolerances.tabulated > 0)) r.fail("tolerances.tabulated", "must be positive");
  if (!(c.slack >= 0)) r.fail("slack", "must be >= 0");

  if (c.command == Command::kGrowthCriterion || c.command == Command::kIntegralCriterion) {
    try {
      build_criterion(c.criterion).validate();
    } catch (const std::exception& e) {
      r.fail("criterion", e.what());
    }
    for (std::size_t i = 0; i < c.criterion.deltas.size(); ++i)
      if (!(c.criterion.deltas[i] > 0)) r.fail("criterion.deltas[" + std::to_string(i) + "]", "must be positive");
    if (c.criterion.deltas.empty()) r.fail("criterion.deltas", "must not be empty");
    if (!(c.criterion.min_gap >= 0)) r.fail("criterion.min_gap", "must be >= 0");
    if (!(c.criterion.integral_cap > 0)) r.fail("criterion.integral_cap", "must be positive");
    if (!(c.criterion.saturation_growth >= 0)) r.fail("criterion.saturation_growth", "must be >= 0");
  }

  const auto& o = c.certify;
  if (!(o.rate_safety > 0 && o.rate_safety <= 1)) r.fail("certify.rate_safety", "must be in (0, 1]");
  if (!(o.gain_inflation >= 1)) r.fail("certify.gain_inflation", "must be >= 1");
  if (!(o.horizon_extension >= 1)) r.fail("certify.horizon_extension", "must be >= 1");
  if (!(o.min_center_rate > 0)) r.fail("certify.min_center_rate", "must be positive");
}

json numbers_json(const std::vector<double>& v) { return json(v); }

}  // namespace

std::string to_string(Command c) {
  switch (c) {
    case Command::kVerifyAxioms: return "verify-axioms";
    case Command::kClassify: return "classify";
    case Command::kCertify: return "certify";
    case Command::kGrowthCriterion: return "growth-criterion";
    case Command::kIntegralCriterion: return "integral-criterion";
  }
  return "unknown";
}

Command command_from_string(const std::string& name) {
  if (name == "verify-axioms") return Command::kVerifyAxioms;
  if (name == "classify") return Command::kClassify;
  if (name == "certify") return Command::kCertify;
  if (name == "growth-criterion" || name == "criterion-3-1") return Command::kGrowthCriterion;
  if (name == "integral-criterion" || name == "criterion-3-2") return Command::kIntegralCriterion;
  throw std::invalid_argument("unknown command '" + name + "'");
}

ConfigError::ConfigError(std::vector<std::string> issues) : std::runtime_error(join(issues)), issues_(std::move(issues)) {}

AnalysisConfig parse_config(const json& j) {
  Reader r;
  AnalysisConfig c;
  if (!j.is_object()) throw ConfigError({"(root): expected a JSON object"});
  r.allow_only(j, "",
               {"system", "projectors", "grid", "tolerances", "command", "seed", "mode", "constants", "criterion",
                "certify", "slack", "output"});

  if (const json* s = r.object(j, "system", "")) read_system(r, *s, c.system);
  if (const json* p = r.object(j, "projectors", "")) read_projectors(r, *p, c.projectors);
  if (const json* g = r.object(j, "grid", "")) read_grid(r, *g, c.grid);
  if (const json* t = r.object(j, "tolerances", "")) {
    r.allow_only(*t, "tolerances", {"closed_form", "quadrature", "tabulated"});
    r.number(*t, "closed_form", "tolerances", c.tolerances.closed_form);
    r.number(*t, "quadrature", "tolerances", c.tolerances.quadrature);
    r.number(*t, "tabulated", "tolerances", c.tolerances.tabulated);
  }

  std::string command;
  if (!r.child(j, "command")) r.fail("command", "missing");
  else if (r.string(j, "command", "", command)) {
    try {
      c.command = command_from_string(command);
    } catch (const std::exception& e) {
      r.fail("command", "'" + command + "' is not one of verify-axioms, classify, certify, growth-criterion, integral-criterion");
    }
  }

  if (const json* seed = r.child(j, "seed")) {
    if (seed->is_number_unsigned()) c.seed = seed->get<std::uint64_t>();
    else r.fail("seed", "expected a non-negative integer");
  }
  r.string(j, "mode", "", c.mode);
  if (const json* k = r.child(j, "constants")) read_constants(r, *k, c.constants);
  if (const json* k = r.object(j, "criterion", "")) read_criterion(r, *k, c.criterion);
  if (const json* k = r.object(j, "certify", "")) {
    r.allow_only(*k, "certify", {"rate_safety", "gain_inflation", "horizon_extension", "min_center_rate"});
    r.number(*k, "rate_safety", "certify", c.certify.rate_safety);
    r.number(*k, "gain_inflation", "certify", c.certify.gain_inflation);
    r.number(*k, "horizon_extension", "certify", c.certify.horizon_extension);
    r.number(*k, "min_center_rate", "certify", c.certify.min_center_rate);
  }
  r.number(j, "slack", "", c.slack);
  c.certify.slack = c.slack;
  if (const json* o = r.object(j, "output", "")) {
    r.allow_only(*o, "output", {"report", "plot"});
    r.string(*o, "report", "output", c.output.report);
    r.string(*o, "plot", "output", c.output.plot);
  }

  if (r.issues.empty()) check_semantics(r, c);
  if (!r.issues.empty()) throw ConfigError(r.issues);
  return c;
}

AnalysisConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"(file): cannot open " + path});
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError({"(file): " + path + " is not valid JSON: " + e.what()});
  }
  return parse_config(j);
}

json to_json(const AnalysisConfig& c) {
  const auto& s = c.system;
  json exponents = json::array();
  for (const auto& e : s.exponents) exponents.push_back({{"integral", e.integral}, {"time", e.time}, {"origin", e.origin}});
  json system = {{"example", s.example},
                 {"profile",
                  {{"kind", s.profile.kind},
                   {"a", s.profile.a},
                   {"b", s.profile.b},
                   {"l", s.profile.l},
                   {"nodes", numbers_json(s.profile.nodes)},
                   {"values", numbers_json(s.profile.values)}}},
                 {"p", s.p},
                 {"mu", s.mu},
                 {"exponents", exponents},
                 {"literal_t0", s.literal_t0},
                 {"literal_reference_time", s.literal_reference_time},
                 {"center_rate", s.center_rate},
                 {"integration", s.integration},
                 {"panel_density", s.panel_density}};

  json projectors = {{"kind", c.projectors.kind}};
  if (c.projectors.kind == "coordinate") projectors["partition"] = c.projectors.partition;
  if (c.projectors.kind == "matrix") projectors["matrices"] = c.projectors.matrices;

  json constants = json::array();
  for (const auto& k : c.constants) constants.push_back({{"gain", k.gain}, {"rate", k.rate}});

  const auto& f = c.criterion;
  return {{"system", system},
          {"projectors", projectors},
          {"grid",
           {{"t0", numbers_json(c.grid.t0s)},
            {"dt", numbers_json(c.grid.dts)},
            {"s_offsets", numbers_json(c.grid.s_offsets)},
            {"shifts", numbers_json(c.grid.shifts)},
            {"n_random_vectors", c.grid.n_random_vectors},
            {"axiom_samples", c.grid.axiom_samples}}},
          {"tolerances",
           {{"closed_form", c.tolerances.closed_form},
            {"quadrature", c.tolerances.quadrature},
            {"tabulated", c.tolerances.tabulated}}},
          {"command", to_string(c.command)},
          {"seed", c.seed},
          {"mode", c.mode},
          {"constants", constants},
          {"criterion",
           {{"kind", f.kind},
            {"gain", f.gain},
            {"rate", f.rate},
            {"c", f.c},
            {"nodes", numbers_json(f.nodes)},
            {"values", numbers_json(f.values)},
            {"deltas", numbers_json(f.deltas)},
            {"min_gap", f.min_gap},
            {"integral_cap", f.integral_cap},
            {"saturation_growth", f.saturation_growth}}},
          {"certify",
           {{"rate_safety", c.certify.rate_safety},
            {"gain_inflation", c.certify.gain_inflation},
            {"horizon_extension", c.certify.horizon_extension},
            {"min_center_rate", c.certify.min_center_rate}}},
          {"slack", c.slack},
          {"output", {{"report", c.output.report}, {"plot", c.output.plot}}}};
}

ExampleSystem<double> build_system(const AnalysisConfig& c) {
  const auto& s = c.system;
  std::string error;
  const auto profile = make_profile(s.profile, error);
  if (!profile) throw ConfigError({"system.profile: " + error});

  CocycleOptions options;
  options.mode = s.integration == "quadrature" ? IntegralMode::kQuadrature : IntegralMode::kClosedForm;
  options.panel_density = s.panel_density;

  ExampleSystem<double> ex;
  if (s.example == "ses") {
    ex.system = build_example_translation(*profile, static_cast<Eigen::Index>(s.p), options);
  } else if (s.example == "ued") {
    ex = build_example_dichotomy(*profile, options);
  } else if (s.example == "uet") {
    ex = s.literal_t0 ? build_example_trichotomy_literal(*profile, s.mu, s.literal_reference_time, options)
                      : build_example_trichotomy(*profile, s.mu,
                                                 s.center_rate == "state_origin" ? CenterRate::kStateOrigin
                                                                                 : CenterRate::kBaseOrigin,
                                                 options);
  } else {
    ex.system = build_diagonal_system(s.example, *profile, s.exponents, options);
  }

  const Eigen::Index dim = ex.system.dim;
  const auto& p = c.projectors;
  if (p.kind == "none") {
    ex.families = {};
  } else if (p.kind == "coordinate") {
    std::vector<std::vector<Eigen::Index>> partition;
    for (const auto& block : p.partition) partition.emplace_back(block.begin(), block.end());
    ex.families = CompatibleFamilySet<double>::coordinate(dim, partition);
  } else if (p.kind == "matrix") {
    ex.families = {};
    int label = 1;
    for (const auto& rows : p.matrices) {
      Matrix<double> m(dim, dim);
      for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index k = 0; k < dim; ++k) m(i, k) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
      ex.families.families.push_back(ProjectorFamily<double>::constant(std::move(m), label++));
    }
  }
  return ex;
}

SampleGrid<double> build_grid(const AnalysisConfig& c, Eigen::Index dim) {
  SampleGrid<double> g;
  g.t0s = c.grid.t0s;
  g.dts = c.grid.dts;
  g.s_offsets = c.grid.s_offsets;
  g.shifts = c.grid.shifts;
  g.seed = c.seed;
  g.n_random = static_cast<std::size_t>(c.grid.n_random_vectors);
  g.vectors = grid_vectors<double>(dim, g.seed, g.n_random);
  return g;
}

CriterionFunction<double> build_criterion(const CriterionSpec& spec) {
  if (spec.kind == "affine_over_const") return CriterionFunction<double>::affine_over_const(spec.c);
  if (spec.kind == "tabulated") return CriterionFunction<double>::tabulated(spec.nodes, spec.values);
  return CriterionFunction<double>::scaled_exp(spec.gain, spec.rate);
}

SplitMode split_mode(const AnalysisConfig& c, std::size_t families) {
  if (c.mode == "dichotomy") return SplitMode::kDichotomy;
  if (c.mode == "trichotomy") return SplitMode::kTrichotomy;
  return families == 3 ? SplitMode::kTrichotomy : SplitMode::kDichotomy;
}

}  // namespace skewflow::workbench
