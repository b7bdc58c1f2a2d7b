#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "skewflow/axioms.hpp"
#include "skewflow/builders.hpp"
#include "skewflow/classifier.hpp"
#include "skewflow/criteria.hpp"
#include "skewflow/grid.hpp"

namespace skewflow::workbench {

using json = nlohmann::json;

enum class Command { kVerifyAxioms, kClassify, kCertify, kGrowthCriterion, kIntegralCriterion };

std::string to_string(Command c);
Command command_from_string(const std::string& name);

/// One or more problems found while reading a config, each prefixed with the
/// offending field path ("system.mu: ...").
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

struct ProfileSpec {
  std::string kind = "exp_plus_const";
  double a = 1, b = 1, l = 1;
  std::vector<double> nodes, values;
};

struct SystemSpec {
  std::string example = "ued";  // ses | ued | uet | custom_diagonal
  ProfileSpec profile;
  long p = 1;
  double mu = 3;
  std::vector<DiagonalRate<double>> exponents;
  bool literal_t0 = false;
  double literal_reference_time = 0;
  std::string center_rate = "base_origin";  // base_origin | state_origin
  std::string integration = "closed_form";  // closed_form | quadrature
  double panel_density = kDefaultPanelDensity;
};

struct ProjectorSpec {
  std::string kind = "default";  // default | coordinate | matrix | none
  std::vector<std::vector<long>> partition;
  std::vector<std::vector<std::vector<double>>> matrices;
};

struct GridSpec {
  std::vector<double> t0s{0, 1};
  std::vector<double> dts{0, 0.25, 1, 5, 20};
  std::vector<double> s_offsets{0, 1, 5};
  std::vector<double> shifts{0, 1, 10};
  long n_random_vectors = 16;
  long axiom_samples = 1000;
};

struct CriterionSpec {
  std::string kind = "scaled_exp";  // scaled_exp | affine_over_const | tabulated
  double gain = 1, rate = 2, c = 0.9;
  std::vector<double> nodes, values;
  std::vector<double> deltas{1};
  double min_gap = 0;
  double integral_cap = 1e6;
  double saturation_growth = 0.25;
};

struct OutputSpec {
  std::string report;
  std::string plot;
};

struct AnalysisConfig {
  SystemSpec system;
  ProjectorSpec projectors;
  GridSpec grid;
  Tolerances tolerances;
  Command command = Command::kVerifyAxioms;
  std::uint64_t seed = 42;
  std::string mode;  // dichotomy | trichotomy, empty picks by family count
  std::vector<GrowthConstants<double>> constants;
  CriterionSpec criterion;
  CertifyOptions certify;
  double slack = 1e-9;
  OutputSpec output;
};

/// Reads a config, filling defaults, and validates every field. Throws
/// ConfigError listing all problems found.
AnalysisConfig parse_config(const json& j);
AnalysisConfig load_config(const std::string& path);

/// Canonical form with every default spelled out; parse_config(to_json(c))
/// reproduces c.
json to_json(const AnalysisConfig& c);

// Objects built from a validated config.
ExampleSystem<double> build_system(const AnalysisConfig& c);
SampleGrid<double> build_grid(const AnalysisConfig& c, Eigen::Index dim);
CriterionFunction<double> build_criterion(const CriterionSpec& spec);
SplitMode split_mode(const AnalysisConfig& c, std::size_t families);

}  // namespace skewflow::workbench
