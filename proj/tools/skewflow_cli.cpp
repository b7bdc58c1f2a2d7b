// skewflow: run one config-driven analysis and write its report.
//
//   skewflow --config ued_certify.json --out report.json [--strict] [--seed N]
//
// Exit status: 0 on success (or any verdict without --strict), 1 when the
// verdict is a rejection under --strict, 2 on config or runtime errors.

#include <cstdint>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "skewflow/workbench/run.hpp"

namespace wb = skewflow::workbench;

namespace {

bool write_file(const std::string& path, const std::string& what, const auto& emit) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "skewflow: cannot write " << what << " to " << path << "\n";
    return false;
  }
  emit(out);
  return static_cast<bool>(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verify, classify and certify exponential splittings of skew-evolution semiflows"};
  std::string config_path, out_path, plot_path;
  bool strict = false;
  std::uint64_t seed = 0;
  app.add_option("--config", config_path, "analysis config (JSON)")->required()->check(CLI::ExistingFile);
  app.add_option("--out", out_path, "report path; overrides output.report, '-' for stdout");
  app.add_option("--plot", plot_path, "plot-data CSV path; overrides output.plot");
  auto* seed_opt = app.add_option("--seed", seed, "random seed; overrides the config");
  app.add_flag("--strict", strict, "exit 1 when the verdict is a rejection");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    auto cfg = wb::load_config(config_path);
    if (*seed_opt) cfg.seed = seed;
    if (!out_path.empty()) cfg.output.report = out_path == "-" ? "" : out_path;
    if (!plot_path.empty()) cfg.output.plot = plot_path;

    const auto result = wb::run_config(cfg);
    const std::string text = wb::serialize(result.report);
    if (cfg.output.report.empty()) {
      std::cout << text;
    } else if (!write_file(cfg.output.report, "report", [&](std::ostream& o) { o << text; })) {
      return 2;
    }
    if (!cfg.output.plot.empty() &&
        !write_file(cfg.output.plot, "plot data", [&](std::ostream& o) { wb::write_plot_csv(o, result.plot); }))
      return 2;

    std::cerr << result.report.command << " on " << result.report.system << ": " << result.report.verdict
              << (result.report.passed ? "" : " (not passed)") << "\n";
    return strict && !result.report.passed ? 1 : 0;
  } catch (const wb::ConfigError& e) {
    std::cerr << "skewflow: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "skewflow: error: " << e.what() << "\n";
    return 2;
  }
}
