#include "superqd/harness.hpp"

#include <omp.h>

#include <chrono>
#include <cmath>
#include <exception>
#include <stdexcept>

namespace superqd {

namespace {

std::size_t first_node_at(const Trajectory& tr, double t) {
  for (std::size_t k = 0; k < tr.size(); ++k) {
    if (tr.times[k] >= t - 1e-9) return k;
  }
  return tr.size() - 1;
}

PopulationSummary summarize(const Trajectory& tr) {
  PopulationSummary s;
  const auto kw = first_node_at(tr, tr.pulse_window.second);
  s.window_end_ps = tr.times[kw];
  s.after_window = tr.records[kw].level;
  for (std::size_t k = 0; k < tr.size() && tr.times[k] <= tr.pulse_window.second + 1e-9; ++k) {
    for (std::size_t m = 0; m < 2; ++m) {
      s.max_photons_in_window[m] = std::max(s.max_photons_in_window[m], tr.records[k].photons[m]);
    }
  }
  s.drive_off_ps = tr.times[tr.drive_off_index];
  s.after_drive = tr.records[tr.drive_off_index].level;
  s.final_levels = tr.records.back().level;
  s.t_end_ps = tr.t_end();
  s.decayed = tr.decayed;
  s.cap_hit = tr.cap_hit;
  for (const auto& r : tr.records) s.max_trace_error = std::max(s.max_trace_error, std::abs(r.trace - 1.0));
  double min_ev = 0.0;
  for (const auto& rho : tr.snapshots) {
    const auto d = diagnose(rho);
    s.max_hermiticity_error = std::max(s.max_hermiticity_error, d.hermiticity_error);
    min_ev = std::min(min_ev, d.min_eigenvalue);
  }
  s.min_eigenvalue = min_ev;
  return s;
}

TraceData collect_traces(const Trajectory& tr, double until) {
  TraceData t;
  for (std::size_t k = 0; k < tr.size() && tr.times[k] <= until + 1e-9; ++k) {
    t.t_ps.push_back(tr.times[k]);
    t.levels.push_back(tr.records[k].level);
    t.photons.push_back(tr.records[k].photons);
  }
  return t;
}

bool wants_metrics(const Scenario& s) {
  return s.emission || s.photon_quality || s.spectra || s.concurrence;
}

QrtOptions qrt_options(const Scenario& s) {
  QrtOptions q;
  q.tolerances = s.tolerances;
  return q;
}

MetricsReport metrics_for(const Scenario& s, Trajectory* keep = nullptr) {
  const auto spec = build_system(s);
  auto traj = evolve(spec, evolve_options(s));
  auto rep = compute_metrics(traj, metrics_request(s), qrt_options(s));
  if (keep) *keep = std::move(traj);
  return rep;
}

std::string point_label(const Scenario& s, const SweepPoint& p) {
  std::string out = "scenario '" + s.name + "' point " + std::to_string(p.index);
  if (!p.values.empty()) {
    out += " (";
    for (std::size_t i = 0; i < p.values.size(); ++i) {
      if (i) out += ", ";
      char buf[64];
      std::snprintf(buf, sizeof buf, "%s = %g", p.values[i].first.c_str(), p.values[i].second);
      out += buf;
    }
    out += ")";
  }
  return out;
}

void run_gates(const Scenario& sp, ResultRow& row, const RunOptions& opt) {
  const auto baseline = row.metrics->headline();
  struct Gate {
    const char* name;
    Scenario variant;
  };
  std::vector<Gate> gates;
  {
    Scenario v = sp;
    v.n_max += 1;
    gates.push_back({"fock", v});
  }
  {
    Scenario v = sp;
    v.grid_spacing_ps *= 0.5;
    v.coarse_spacing_ps *= 0.5;
    gates.push_back({"grid", v});
  }
  {
    Scenario v = sp;
    v.tolerances.relative *= 0.5;
    v.tolerances.absolute *= 0.5;
    gates.push_back({"tolerance", v});
  }
  for (const auto& g : gates) {
    const auto refined = metrics_for(g.variant).headline();
    for (const auto& [key, value] : baseline) {
      const auto it = refined.find(key);
      if (it == refined.end()) continue;
      row.metrics->convergence.push_back({g.name, key, value, it->second});
    }
  }
  row.gates_run = true;
  row.converged = row.metrics->converged(opt.gate_limit);
}

}  // namespace

ResultRow run_point(const Scenario& s, const SweepPoint& p, const RunOptions& opt) {
  ResultRow row;
  row.scenario = s.name;
  row.point = p;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const Scenario sp = at_point(s, p);
    const auto spec = build_system(sp);
    const auto traj = evolve(spec, evolve_options(sp));
    row.populations = summarize(traj);
    if (sp.traces) row.traces = collect_traces(traj, sp.trace_until_ps);
    if (wants_metrics(sp) && spec.cavity.kappa_per_ps > 0.0) {
      row.metrics = compute_metrics(traj, metrics_request(sp), qrt_options(sp));
      if (opt.headline) run_gates(sp, row, opt);
    }
  } catch (const std::exception& e) {
    const std::string msg = point_label(s, p) + ": " + e.what();
    if (opt.fail_fast) throw std::runtime_error(msg);
    row.error = msg;
    row.converged = false;
  }
  row.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

ScenarioResult run_scenario(const Scenario& s, const RunOptions& opt) {
  s.validate();
  ScenarioResult out;
  out.scenario = s;
  const auto points = sweep_points(s);
  out.rows.resize(points.size());
  if (points.size() == 1) {
    // Keep the thread team for the anchor loop inside the correlators.
    out.rows[0] = run_point(s, points[0], opt);
    return out;
  }
  const int threads = opt.threads > 0 ? opt.threads : omp_get_max_threads();
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (long i = 0; i < static_cast<long>(points.size()); ++i) {
    try {
      out.rows[static_cast<std::size_t>(i)] = run_point(s, points[static_cast<std::size_t>(i)], opt);
    } catch (...) {
#pragma omp critical(sweep_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

ScenarioResult phase_sweep(Scenario s, const std::vector<double>& phis_pi, const RunOptions& opt) {
  if (s.kind != ExcitationKind::super) throw std::invalid_argument("phase_sweep: scenario must use the super scheme");
  if (phis_pi.empty()) throw std::invalid_argument("phase_sweep: empty phase list");
  s.axes = {{"phase_pi", phis_pi}};
  s.emission = s.photon_quality = s.spectra = s.concurrence = false;
  if (!s.t_end_ps) s.t_end_ps = std::max(drive_off_time(build_system(s).drive), s.grid_spacing_ps);
  return run_scenario(s, opt);
}

ScenarioResult cavity_detuning_sweep(Scenario s, const std::vector<double>& offsets_meV, const RunOptions& opt) {
  if (s.kind != ExcitationKind::super) {
    throw std::invalid_argument("cavity_detuning_sweep: scenario must use the super scheme");
  }
  if (offsets_meV.empty()) throw std::invalid_argument("cavity_detuning_sweep: empty offset list");
  s.axes = {{"cavity_offset_meV", offsets_meV}};
  s.photon_quality = s.spectra = s.concurrence = false;
  s.traces = true;
  if (!s.t_end_ps) s.t_end_ps = excitation_window(build_system(s)).second + 30.0;
  s.trace_until_ps = *s.t_end_ps;
  return run_scenario(s, opt);
}

}  // namespace superqd
