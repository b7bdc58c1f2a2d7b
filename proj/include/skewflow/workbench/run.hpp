#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "skewflow/workbench/config.hpp"
#include "skewflow/workbench/report.hpp"

namespace skewflow::workbench {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kPlotHeader = "t,s,t0,x_shift,component,norm,log_norm";

/// ||Phi(t, t0, x) P_k(x) 1|| along the grid, one row per (tuple, component).
struct PlotRow {
  double t = 0, s = 0, t0 = 0, x_shift = 0;
  int component = 0;
  double norm = 0;
  double log_norm = 0;
};

struct RunResult {
  AnalysisReport report;
  std::vector<PlotRow> plot;
};

/// Dispatches the configured command. Does no file I/O.
RunResult run_config(const AnalysisConfig& cfg);

std::vector<PlotRow> plot_rows(const AnalysisConfig& cfg);
void write_plot_csv(std::ostream& out, const std::vector<PlotRow>& rows);

}  // namespace skewflow::workbench
