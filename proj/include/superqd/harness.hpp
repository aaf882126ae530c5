#pragma once

#include "superqd/metrics.hpp"
#include "superqd/scenario.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace superqd {

struct PopulationSummary {
  // First node at or after the end of the pulse window.
  double window_end_ps = 0.0;
  std::array<double, 4> after_window{};  // G, X_H, X_V, B
  std::array<double, 2> max_photons_in_window{};
  // First node at which the field is off.
  double drive_off_ps = 0.0;
  std::array<double, 4> after_drive{};
  std::array<double, 4> final_levels{};
  double t_end_ps = 0.0;
  bool decayed = false;
  bool cap_hit = false;
  // Invariant diagnostics over all nodes.
  double max_trace_error = 0.0;
  double max_hermiticity_error = 0.0;
  double min_eigenvalue = 0.0;
};

struct TraceData {
  std::vector<double> t_ps;
  std::vector<std::array<double, 4>> levels;
  std::vector<std::array<double, 2>> photons;
};

struct ResultRow {
  std::string scenario;
  SweepPoint point;
  std::optional<MetricsReport> metrics;
  PopulationSummary populations;
  std::optional<TraceData> traces;
  bool converged = true;   // false when a convergence gate failed
  bool gates_run = false;
  std::string error;       // non-empty when the point failed
  double wall_s = 0.0;
};

struct RunOptions {
  // Re-run every point at n_max + 1, half grid spacing and half tolerances.
  bool headline = false;
  double gate_limit = 1e-3;
  // Worker threads for the sweep pool; 0 keeps the OpenMP default.
  int threads = 0;
  // Rethrow the first point failure instead of recording it in the row.
  bool fail_fast = false;
};

struct ScenarioResult {
  Scenario scenario;
  std::vector<ResultRow> rows;  // ordered by sweep index
};

// Single point, no sweep handling.
ResultRow run_point(const Scenario& s, const SweepPoint& p, const RunOptions& opt = {});
// Every sweep point, dispatched to a worker pool.
ScenarioResult run_scenario(const Scenario& s, const RunOptions& opt = {});

// Final populations against the inter-pulse phase (phase_pi, units of pi).
// The run ends at the first node after the field is off.
ScenarioResult phase_sweep(Scenario s, const std::vector<double>& phis_pi, const RunOptions& opt = {});
// Mode-population traces against the cavity offset from the X_H line.
ScenarioResult cavity_detuning_sweep(Scenario s, const std::vector<double>& offsets_meV, const RunOptions& opt = {});

}  // namespace superqd
