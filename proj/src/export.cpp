#include "superqd/export.hpp"

#include "superqd/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace superqd {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string opt_num(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

std::string flag(bool b) { return b ? "1" : "0"; }

std::string quoted(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

class CsvLine {
 public:
  explicit CsvLine(std::string& out) : out_(out) {}
  ~CsvLine() { out_ += '\n'; }
  CsvLine& operator<<(const std::string& cell) {
    if (!first_) out_ += ',';
    first_ = false;
    out_ += cell;
    return *this;
  }

 private:
  std::string& out_;
  bool first_ = true;
};

constexpr const char* kLevels[4] = {"G", "XH", "XV", "B"};

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ExportError("cannot open '" + path.string() + "' for writing");
  f << text;
  f.close();
  if (!f) throw ExportError("write failed for '" + path.string() + "'");
}

}  // namespace

ExportFormat parse_export_format(std::string_view s) {
  if (s == "csv") return ExportFormat::csv;
  throw std::invalid_argument("unknown export format '" + std::string(s) + "'; supported: csv");
}

std::string rows_csv(const ScenarioResult& r) {
  const auto& modes = r.scenario.modes;
  std::string out;
  {
    CsvLine h(out);
    h << "scenario" << "point" << "excitation" << "g_ueV" << "kappa_over_g" << "phase_pi" << "cavity_offset_meV"
      << "fine_structure_ueV" << "binding_meV";
    for (Mode m : modes) {
      const std::string sfx = "_" + std::string(mode_name(m));
      h << "emission_prob" + sfx << "emission_lower_bound" + sfx << "purity" + sfx << "indist" + sfx
        << "spectrum_asymmetry" + sfx;
    }
    h << "concurrence";
    for (const char* l : kLevels) h << std::string("pop_") + l + "_window_end";
    h << "max_photons_H_window" << "max_photons_V_window" << "drive_off_ps";
    for (const char* l : kLevels) h << std::string("pop_") + l + "_drive_off";
    for (const char* l : kLevels) h << std::string("pop_") + l + "_final";
    h << "t_end_ps" << "decayed" << "cap_hit" << "max_trace_error" << "max_hermiticity_error" << "min_eigenvalue"
      << "gates_run" << "max_gate_delta" << "converged" << "error";
  }
  for (const auto& row : r.rows) {
    const Scenario sp = at_point(r.scenario, row.point);
    CsvLine l(out);
    l << quoted(row.scenario) << std::to_string(row.point.index) << std::string(to_string(sp.kind)) << num(sp.g_ueV)
      << num(sp.kappa_over_g) << num(sp.pulses.phase_pi) << num(sp.cavity_offset_meV) << num(sp.fine_structure_ueV)
      << num(sp.binding_meV);
    for (Mode m : modes) {
      const ModeMetrics* mm = nullptr;
      if (row.metrics) {
        for (const auto& x : row.metrics->modes) {
          if (x.mode == m) mm = &x;
        }
      }
      if (!mm) {
        l << "" << "" << "" << "" << "";
        continue;
      }
      l << num(mm->emission.value) << flag(mm->emission.lower_bound) << opt_num(mm->purity)
        << opt_num(mm->indistinguishability) << (mm->spectrum ? num(mm->spectrum->asymmetry) : std::string());
    }
    l << (row.metrics ? opt_num(row.metrics->concurrence) : std::string());
    const auto& p = row.populations;
    for (double v : p.after_window) l << num(v);
    l << num(p.max_photons_in_window[0]) << num(p.max_photons_in_window[1]) << num(p.drive_off_ps);
    for (double v : p.after_drive) l << num(v);
    for (double v : p.final_levels) l << num(v);
    l << num(p.t_end_ps) << flag(p.decayed) << flag(p.cap_hit) << num(p.max_trace_error)
      << num(p.max_hermiticity_error) << num(p.min_eigenvalue) << flag(row.gates_run);
    double worst = 0.0;
    if (row.metrics) {
      for (const auto& c : row.metrics->convergence) worst = std::max(worst, std::abs(c.delta()));
    }
    l << (row.gates_run ? num(worst) : std::string()) << flag(row.converged) << quoted(row.error);
  }
  return out;
}

std::string timing_csv(const ScenarioResult& r) {
  std::string out = "point,wall_s\n";
  for (const auto& row : r.rows) out += std::to_string(row.point.index) + "," + num(row.wall_s) + "\n";
  return out;
}

std::string spectrum_csv(const Spectrum& s) {
  std::string out = "omega_rel_meV,S_normalized\n";
  for (std::size_t k = 0; k < s.omega_rel_meV.size(); ++k) {
    out += num(s.omega_rel_meV[k]) + "," + num(s.normalized[k]) + "\n";
  }
  return out;
}

std::string traces_csv(const ScenarioResult& r) {
  std::string out = "point,time_ps,series,value\n";
  for (const auto& row : r.rows) {
    if (!row.traces) continue;
    const auto& t = *row.traces;
    const std::string pt = std::to_string(row.point.index);
    for (std::size_t k = 0; k < t.t_ps.size(); ++k) {
      const std::string head = pt + "," + num(t.t_ps[k]) + ",";
      for (int i = 0; i < 4; ++i) out += head + "pop_" + kLevels[i] + "," + num(t.levels[k][i]) + "\n";
      out += head + "photons_H," + num(t.photons[k][0]) + "\n";
      out += head + "photons_V," + num(t.photons[k][1]) + "\n";
    }
  }
  return out;
}

ExportedFiles export_result(const ScenarioResult& r, const std::filesystem::path& dir, ExportFormat format) {
  if (format != ExportFormat::csv) throw ExportError("unsupported export format");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ExportError("cannot create directory '" + dir.string() + "': " + ec.message());

  const std::string base = r.scenario.name;
  ExportedFiles files;
  files.rows = dir / (base + ".csv");
  write_file(files.rows, rows_csv(r));
  files.timing = dir / (base + ".timing.csv");
  write_file(files.timing, timing_csv(r));
  files.config = dir / (base + ".config.yaml");
  write_file(files.config, to_yaml(r.scenario));

  bool any_traces = false;
  for (const auto& row : r.rows) {
    any_traces = any_traces || row.traces.has_value();
    if (!row.metrics) continue;
    for (const auto& mm : row.metrics->modes) {
      if (!mm.spectrum) continue;
      const auto path = dir / (base + ".spectrum.p" + std::to_string(row.point.index) + "." +
                               std::string(mode_name(mm.mode)) + ".csv");
      write_file(path, spectrum_csv(*mm.spectrum));
      files.spectra.push_back(path);
    }
  }
  if (any_traces) {
    files.traces = dir / (base + ".traces.csv");
    write_file(files.traces, traces_csv(r));
  }
  return files;
}

}  // namespace superqd
