#include "skewflow/workbench/run.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace skewflow::workbench {

namespace {

double cocycle_tolerance(const AnalysisConfig& c) {
  if (c.system.profile.kind == "tabulated") return c.tolerances.tabulated;
  return c.system.integration == "quadrature" ? c.tolerances.quadrature : c.tolerances.closed_form;
}

void add_residuals(AnalysisReport& report, const std::string& prefix, const AxiomReport<double>& axioms) {
  for (const auto& r : axioms.residuals)
    report.residuals.push_back({prefix + "." + r.name, r.value, axioms.tol, r.value <= axioms.tol});
}

std::vector<ConstantsEntry> constants_entries(const SpectralConstants<double>& constants) {
  std::vector<ConstantsEntry> out;
  int k = 1;
  for (const auto& c : constants.components) out.push_back({k++, c.gain, c.rate});
  return out;
}

void add_violations(AnalysisReport& report, const std::string& source, const std::vector<Violation<double>>& items) {
  for (const auto& v : items)
    report.violations.push_back({source, v.t, v.s, v.t0, v.shift, v.vector_index, v.component, v.lhs, v.rhs, v.ratio()});
}

void add_certificate(AnalysisReport& report, const std::string& source, const SpectralCertificate<double>& cert) {
  report.certificates.push_back({to_string(cert.mode), to_string(cert.verdict), constants_entries(cert.constants),
                                 cert.worst_ratio, cert.checked, cert.skipped, cert.note});
  add_violations(report, source, cert.violations);
}

void add_rates(AnalysisReport& report, const RateEstimate<double>& estimate) {
  int k = 1;
  for (const auto& c : estimate.uniform) report.rates.push_back({"uniform", 0.0, k++, c.rate, c.gain, c.degenerate, c.pairs});
  for (const auto& state : estimate.per_state) {
    k = 1;
    for (const auto& c : state.components)
      report.rates.push_back({"state", state.shift, k++, c.rate, c.gain, c.degenerate, c.pairs});
  }
}

std::string describe(const CriterionSpec& f) {
  std::ostringstream out;
  out.precision(17);
  if (f.kind == "affine_over_const") out << "(u + 1) / " << f.c;
  else if (f.kind == "tabulated") out << "tabulated(" << f.nodes.size() << " nodes)";
  else out << f.gain << " * exp(" << f.rate << " u)";
  return out.str();
}

void verify_axioms(const AnalysisConfig& cfg, const ExampleSystem<double>& ex, AnalysisReport& report) {
  const auto samples = random_axiom_grid(ex.system, static_cast<std::size_t>(cfg.grid.axiom_samples), cfg.seed);
  report.tuples = samples.size();
  add_residuals(report, "semiflow", check_semiflow_axioms(ex.system, samples, cfg.tolerances.closed_form));
  add_residuals(report, "cocycle", check_cocycle_axioms(ex.system, samples, cocycle_tolerance(cfg)));

  if (ex.families.size() != 0) {
    std::vector<StateProfile<double>> states;
    for (std::size_t i = 0; i < samples.size() && states.size() < 64; ++i) states.push_back(samples[i].x);
    add_residuals(report, "projectors", check_family_algebra(ex.families, states, cfg.tolerances.closed_form));
    const AxiomGrid<double> head(samples.begin(), samples.begin() + std::min<std::ptrdiff_t>(200, samples.size()));
    const auto vectors = grid_vectors<double>(ex.system.dim, cfg.seed, static_cast<std::size_t>(cfg.grid.n_random_vectors));
    add_residuals(report, "projectors", check_intertwining(ex.system, ex.families, head, vectors, cocycle_tolerance(cfg)));
  }

  report.passed = true;
  for (const auto& r : report.residuals) report.passed = report.passed && r.passed;
  report.verdict = report.passed ? "axioms-hold" : "axioms-violated";
}

void classify(const AnalysisConfig& cfg, const ExampleSystem<double>& ex, const SampleGrid<double>& grid,
              AnalysisReport& report) {
  const SpectralConstants<double> constants{cfg.constants};
  const auto cert = split_mode(cfg, ex.families.size()) == SplitMode::kDichotomy
                        ? verify_dichotomy(ex.system, ex.families, constants, grid, cfg.slack)
                        : verify_trichotomy(ex.system, ex.families, constants, grid, cfg.slack);
  add_certificate(report, "verifier", cert);
  add_rates(report, estimate_sharp_rates(ex.system, ex.families, grid));
  report.passed = cert.accepted();
  report.verdict = to_string(cert.verdict);
}

void run_certify(const AnalysisConfig& cfg, const ExampleSystem<double>& ex, const SampleGrid<double>& grid,
                 AnalysisReport& report) {
  const auto cert = certify(ex.system, ex.families, grid, split_mode(cfg, ex.families.size()), cfg.certify);
  add_certificate(report, "certificate", cert);
  if (cert.estimate) add_rates(report, *cert.estimate);
  report.passed = cert.accepted();
  report.verdict = to_string(cert.verdict);
}

void growth_criterion(const AnalysisConfig& cfg, const ExampleSystem<double>& ex, const SampleGrid<double>& grid,
                      AnalysisReport& report) {
  const auto f = build_criterion(cfg.criterion);
  GrowthCriterionOptions options;
  options.min_gap = cfg.criterion.min_gap;
  options.delta = cfg.criterion.deltas.front();
  options.slack = cfg.slack;
  const auto result = check_growth_criterion(ex.system, ex.families, f, grid, options);

  CriterionSummary summary;
  summary.function = describe(cfg.criterion);
  summary.passed = result.passed;
  summary.checked = result.checked;
  summary.skipped = result.skipped;
  summary.worst_ratio = result.worst_ratio;
  summary.notes = result.notes;
  add_violations(report, "criterion", result.witnesses);

  bool all_verified = result.passed;
  if (result.passed) {
    for (double delta : cfg.criterion.deltas) {
      if (!(f(delta) > 1)) {
        summary.notes.push_back("f(" + std::to_string(delta) + ") <= 1, no constants for this delta");
        all_verified = false;
        continue;
      }
      const auto c = derive_constants_from_criterion(f, delta);
      summary.deltas.push_back(delta);
      summary.derived.push_back({1, c.gain, c.rate});
      summary.derived.push_back({2, c.gain, c.rate});
      const auto cert = verify_dichotomy(ex.system, ex.families, SpectralConstants<double>{{c, c}}, grid, cfg.slack);
      add_certificate(report, "verifier", cert);
      all_verified = all_verified && cert.accepted();
    }
  }
  add_rates(report, estimate_sharp_rates(ex.system, ex.families, grid));
  report.criterion = std::move(summary);
  report.passed = all_verified;
  report.verdict = !result.passed ? "criterion-fails" : all_verified ? "dichotomic" : "rejected";
}

void integral_criterion(const AnalysisConfig& cfg, const ExampleSystem<double>& ex, const SampleGrid<double>& grid,
                        AnalysisReport& report) {
  const auto g = build_criterion(cfg.criterion);
  IntegralCriterionOptions options;
  options.panel_density = cfg.system.panel_density;
  options.integral_cap = cfg.criterion.integral_cap;
  options.saturation_growth = cfg.criterion.saturation_growth;
  options.slack = cfg.slack;
  const auto result = check_integral_criterion(ex.system, ex.families, g, grid, options);

  CriterionSummary summary;
  summary.function = describe(cfg.criterion);
  summary.passed = result.passed;
  summary.checked = result.checked;
  summary.skipped = result.skipped;
  summary.worst_ratio = result.worst_ratio;
  summary.notes = result.notes;
  if (result.measured) {
    const auto& b = result.extracted ? *result.extracted : *result.measured;
    summary.sup_gain = b.sup_gain;
    summary.integral_bound = b.integral_bound;
    summary.integral_bound_half = b.integral_bound_half;
    summary.center_gain = b.center_gain;
    summary.center_rate = b.center_rate;
  }
  add_violations(report, "criterion", result.witnesses);

  bool verified = false;
  if (result.passed) {
    try {
      const auto derived = derive_trichotomy_constants(result);
      summary.delta = derived.delta;
      summary.derived = constants_entries(derived.constants);
      const auto cert = verify_trichotomy(ex.system, ex.families, derived.constants, grid, cfg.slack);
      add_certificate(report, "verifier", cert);
      verified = cert.accepted();
    } catch (const std::invalid_argument& e) {
      summary.notes.push_back(e.what());
    }
  }
  add_rates(report, estimate_sharp_rates(ex.system, ex.families, grid));
  report.criterion = std::move(summary);
  report.passed = verified;
  report.verdict = !result.passed ? "criterion-fails" : verified ? "trichotomic" : "rejected";
}

void put_number(std::ostream& out, double v) {
  if (std::isnan(v)) {
    out << "nan";
    return;
  }
  if (std::isinf(v)) {
    out << (v < 0 ? "-inf" : "inf");
    return;
  }
  char buffer[32];
  const auto res = std::to_chars(buffer, buffer + sizeof buffer, v);
  out.write(buffer, res.ptr - buffer);
}

}  // namespace

std::vector<PlotRow> plot_rows(const AnalysisConfig& cfg) {
  const auto ex = build_system(cfg);
  std::vector<Matrix<double>> fixed;
  if (ex.families.size() == 0) fixed.push_back(Matrix<double>::Identity(ex.system.dim, ex.system.dim));

  std::vector<PlotRow> rows;
  const Vector<double> ones = Vector<double>::Ones(ex.system.dim);
  for (double shift : cfg.grid.shifts) {
    const auto x = ex.system.state(shift);
    for (double t0 : cfg.grid.t0s)
      for (double s_offset : cfg.grid.s_offsets)
        for (double dt : cfg.grid.dts) {
          const double s = t0 + s_offset, t = s + dt;
          const std::size_t count = fixed.empty() ? ex.families.size() : 1;
          for (std::size_t k = 0; k < count; ++k) {
            const Matrix<double> p = fixed.empty() ? ex.families[k](x) : fixed[0];
            const Vector<double> v = p * ones;
            const double norm = fiber_norm(evaluate_skew(ex.system, t, t0, x, v).second);
            rows.push_back({t, s, t0, shift, static_cast<int>(k + 1), norm, std::log(norm)});
          }
        }
  }
  return rows;
}

void write_plot_csv(std::ostream& out, const std::vector<PlotRow>& rows) {
  out << kPlotHeader << '\n';
  for (const auto& r : rows) {
    put_number(out, r.t);
    out << ',';
    put_number(out, r.s);
    out << ',';
    put_number(out, r.t0);
    out << ',';
    put_number(out, r.x_shift);
    out << ',' << r.component << ',';
    put_number(out, r.norm);
    out << ',';
    put_number(out, r.log_norm);
    out << '\n';
  }
}

RunResult run_config(const AnalysisConfig& cfg) {
  RunResult result;
  auto& report = result.report;
  report.config = to_json(cfg);
  report.command = to_string(cfg.command);
  report.seed = cfg.seed;
  report.version = kVersion;

  const auto ex = build_system(cfg);
  report.system = ex.system.name;
  const auto grid = build_grid(cfg, ex.system.dim);

  switch (cfg.command) {
    case Command::kVerifyAxioms: verify_axioms(cfg, ex, report); break;
    case Command::kClassify: classify(cfg, ex, grid, report); break;
    case Command::kCertify: run_certify(cfg, ex, grid, report); break;
    case Command::kGrowthCriterion: growth_criterion(cfg, ex, grid, report); break;
    case Command::kIntegralCriterion: integral_criterion(cfg, ex, grid, report); break;
  }
  if (cfg.command != Command::kVerifyAxioms) report.tuples = grid.tuple_count();

  if (!cfg.output.plot.empty()) result.plot = plot_rows(cfg);
  return result;
}

}  // namespace skewflow::workbench
