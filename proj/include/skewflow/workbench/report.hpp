#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace skewflow::workbench {

using json = nlohmann::json;

struct ResidualEntry {
  std::string law;  // e.g. "semiflow.composition"
  double value = 0;
  double tolerance = 0;
  bool passed = false;
};

struct ConstantsEntry {
  int component = 0;
  double gain = 1;
  double rate = 0;
};

struct CertificateSummary {
  std::string mode;
  std::string verdict;
  std::vector<ConstantsEntry> constants;
  double worst_ratio = 0;
  std::uint64_t checked = 0;
  std::uint64_t skipped = 0;
  std::string note;
};

struct RateRow {
  std::string scope;  // "uniform" or "state"
  double shift = 0;   // meaningful for scope == "state"
  int component = 0;
  double rate = 0;
  double gain = 1;
  bool degenerate = false;
  std::uint64_t pairs = 0;
};

struct ViolationRow {
  std::string source;
  double t = 0, s = 0, t0 = 0, shift = 0;
  std::uint64_t vector_index = 0;
  int component = 0;
  double lhs = 0, rhs = 0, ratio = 0;
};

struct CriterionSummary {
  std::string function;
  bool passed = false;
  std::uint64_t checked = 0;
  std::uint64_t skipped = 0;
  double worst_ratio = 0;
  // growth criterion: one derived (N, nu) per requested delta
  std::vector<double> deltas;
  std::vector<ConstantsEntry> derived;
  // integral criterion
  std::optional<double> sup_gain, integral_bound, integral_bound_half, center_gain, center_rate;
  std::optional<double> delta;
  std::vector<std::string> notes;
};

/// The outcome of one analysis. No timestamps or host details, so identical
/// configs give identical reports.
struct AnalysisReport {
  json config;
  std::string command;
  std::string system;
  bool passed = false;
  std::string verdict;
  std::vector<ResidualEntry> residuals;
  std::vector<CertificateSummary> certificates;
  std::optional<CriterionSummary> criterion;
  std::vector<RateRow> rates;
  std::vector<ViolationRow> violations;
  std::uint64_t seed = 0;
  std::uint64_t tuples = 0;
  std::string scalar = "double";
  std::string version;
};

json to_json(const AnalysisReport& r);
AnalysisReport report_from_json(const json& j);

/// Pretty-printed JSON with a trailing newline. serialize(parse(serialize(r)))
/// is byte-identical to serialize(r).
std::string serialize(const AnalysisReport& r);
AnalysisReport parse_report(const std::string& text);

}  // namespace skewflow::workbench
