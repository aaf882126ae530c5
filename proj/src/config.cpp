#include "superqd/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace superqd {

namespace {

void check_keys(const YAML::Node& node, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!node.IsMap()) throw ConfigError(path + ": expected a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    const bool ok = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; });
    if (!ok) {
      std::string msg = path + "." + key + ": unknown key; allowed:";
      for (const char* a : allowed) msg += std::string(" ") + a;
      throw ConfigError(msg);
    }
  }
}

template <typename T>
void read(const YAML::Node& node, const char* key, const std::string& path, T& out) {
  const auto v = node[key];
  if (!v) return;
  try {
    out = v.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(path + "." + key + ": cannot convert '" + YAML::Dump(v) + "'");
  }
}

void read_optional(const YAML::Node& node, const char* key, const std::string& path, std::optional<double>& out) {
  if (!node[key]) return;
  double v = 0.0;
  read(node, key, path, v);
  out = v;
}

Mode parse_mode(const std::string& s, const std::string& path) {
  if (s == "H") return Mode::H;
  if (s == "V") return Mode::V;
  throw ConfigError(path + ": unknown mode '" + s + "'; expected H or V");
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

}  // namespace

Scenario parse_scenario(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config: YAML syntax error: ") + e.what());
  }
  if (!root || root.IsNull()) throw ConfigError("config: empty document");
  check_keys(root, "config", {"name", "excitation", "quantum_dot", "cavity", "numerics", "outputs", "sweep"});

  Scenario s;
  read(root, "name", "config", s.name);

  if (const auto ex = root["excitation"]) {
    const std::string p = "config.excitation";
    check_keys(ex, p,
               {"kind", "pulse_set", "detuning_1_meV", "detuning_2_meV", "area_1_pi", "area_2_pi", "sigma_1_ps",
                "sigma_2_ps", "delay_ps", "phase_pi", "center_ps", "gaussian_area_pi", "gaussian_sigma_ps",
                "gaussian_center_ps"});
    std::string kind = std::string(to_string(s.kind));
    read(ex, "kind", p, kind);
    try {
      s.kind = parse_excitation_kind(kind);
      if (ex["pulse_set"]) {
        s.pulses = pulse_set(ex["pulse_set"].as<std::string>());
        s.binding_meV = s.pulses.binding_meV;
      }
    } catch (const std::invalid_argument& e) {
      throw ConfigError(p + ": " + e.what());
    }
    read(ex, "detuning_1_meV", p, s.pulses.detuning_1_meV);
    read(ex, "detuning_2_meV", p, s.pulses.detuning_2_meV);
    read(ex, "area_1_pi", p, s.pulses.area_1_pi);
    read(ex, "area_2_pi", p, s.pulses.area_2_pi);
    read(ex, "sigma_1_ps", p, s.pulses.sigma_1_ps);
    read(ex, "sigma_2_ps", p, s.pulses.sigma_2_ps);
    read(ex, "delay_ps", p, s.pulses.delay_ps);
    read(ex, "phase_pi", p, s.pulses.phase_pi);
    read(ex, "center_ps", p, s.center_ps);
    read(ex, "gaussian_area_pi", p, s.gaussian.area_pi);
    read(ex, "gaussian_sigma_ps", p, s.gaussian.sigma_ps);
    read_optional(ex, "gaussian_center_ps", p, s.gaussian.center_ps);
  }

  if (const auto qd = root["quantum_dot"]) {
    const std::string p = "config.quantum_dot";
    check_keys(qd, p, {"exciton_meV", "fine_structure_ueV", "binding_meV"});
    read(qd, "exciton_meV", p, s.exciton_meV);
    read(qd, "fine_structure_ueV", p, s.fine_structure_ueV);
    read(qd, "binding_meV", p, s.binding_meV);
  }

  if (const auto cav = root["cavity"]) {
    const std::string p = "config.cavity";
    check_keys(cav, p, {"tuning", "offset_meV", "g_ueV", "kappa_over_g", "n_max", "dissipator"});
    std::string tuning = std::string(to_string(s.tuning));
    read(cav, "tuning", p, tuning);
    try {
      s.tuning = parse_cavity_tuning(tuning);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(p + ": " + e.what());
    }
    read(cav, "offset_meV", p, s.cavity_offset_meV);
    read(cav, "g_ueV", p, s.g_ueV);
    read(cav, "kappa_over_g", p, s.kappa_over_g);
    read(cav, "n_max", p, s.n_max);
    std::string diss = "standard";
    read(cav, "dissipator", p, diss);
    if (diss == "standard") {
      s.dissipator = DissipatorConvention::standard;
    } else if (diss == "factor_two") {
      s.dissipator = DissipatorConvention::factor_two;
    } else {
      throw ConfigError(p + ".dissipator: unknown value '" + diss + "'; expected standard or factor_two");
    }
  }

  if (const auto nu = root["numerics"]) {
    const std::string p = "config.numerics";
    check_keys(nu, p, {"grid_spacing_ps", "coarse_spacing_ps", "t_end_ps", "max_time_ps", "rtol", "atol",
                       "frame_offset_meV"});
    read(nu, "grid_spacing_ps", p, s.grid_spacing_ps);
    read(nu, "coarse_spacing_ps", p, s.coarse_spacing_ps);
    read_optional(nu, "t_end_ps", p, s.t_end_ps);
    read(nu, "max_time_ps", p, s.max_time_ps);
    read(nu, "rtol", p, s.tolerances.relative);
    read(nu, "atol", p, s.tolerances.absolute);
    read(nu, "frame_offset_meV", p, s.frame_offset_meV);
  }

  if (const auto out = root["outputs"]) {
    const std::string p = "config.outputs";
    check_keys(out, p, {"modes", "emission", "photon_quality", "spectra", "concurrence", "traces", "trace_until_ps",
                        "spectrum_span_meV", "spectrum_points"});
    if (const auto modes = out["modes"]) {
      if (!modes.IsSequence()) throw ConfigError(p + ".modes: expected a list");
      s.modes.clear();
      for (const auto& m : modes) s.modes.push_back(parse_mode(m.as<std::string>(), p + ".modes"));
    }
    read(out, "emission", p, s.emission);
    read(out, "photon_quality", p, s.photon_quality);
    read(out, "spectra", p, s.spectra);
    read(out, "concurrence", p, s.concurrence);
    read(out, "traces", p, s.traces);
    read(out, "trace_until_ps", p, s.trace_until_ps);
    read(out, "spectrum_span_meV", p, s.spectrum_grid.span_meV);
    read(out, "spectrum_points", p, s.spectrum_grid.points);
  }

  if (const auto sw = root["sweep"]) {
    if (!sw.IsSequence()) throw ConfigError("config.sweep: expected a list of axes");
    for (std::size_t i = 0; i < sw.size(); ++i) {
      const std::string p = "config.sweep[" + std::to_string(i) + "]";
      const auto ax = sw[i];
      check_keys(ax, p, {"axis", "values", "linspace"});
      SweepAxis a;
      read(ax, "axis", p, a.name);
      if (ax["values"] && ax["linspace"]) throw ConfigError(p + ": give either values or linspace");
      if (ax["values"]) {
        read(ax, "values", p, a.values);
      } else if (ax["linspace"]) {
        std::vector<double> ls;
        read(ax, "linspace", p, ls);
        if (ls.size() != 3 || ls[2] < 1 || ls[2] != std::floor(ls[2])) {
          throw ConfigError(p + ".linspace: expected [from, to, count] with integer count >= 1");
        }
        const int n = static_cast<int>(ls[2]);
        for (int k = 0; k < n; ++k) a.values.push_back(n == 1 ? ls[0] : ls[0] + (ls[1] - ls[0]) * k / (n - 1));
      }
      s.axes.push_back(std::move(a));
    }
  }

  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_scenario(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string to_yaml(const Scenario& s) {
  YAML::Emitter e;
  e << YAML::BeginMap;
  e << YAML::Key << "name" << YAML::Value << s.name;

  e << YAML::Key << "excitation" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "kind" << YAML::Value << std::string(to_string(s.kind));
  e << YAML::Key << "detuning_1_meV" << YAML::Value << num(s.pulses.detuning_1_meV);
  e << YAML::Key << "detuning_2_meV" << YAML::Value << num(s.pulses.detuning_2_meV);
  e << YAML::Key << "area_1_pi" << YAML::Value << num(s.pulses.area_1_pi);
  e << YAML::Key << "area_2_pi" << YAML::Value << num(s.pulses.area_2_pi);
  e << YAML::Key << "sigma_1_ps" << YAML::Value << num(s.pulses.sigma_1_ps);
  e << YAML::Key << "sigma_2_ps" << YAML::Value << num(s.pulses.sigma_2_ps);
  e << YAML::Key << "delay_ps" << YAML::Value << num(s.pulses.delay_ps);
  e << YAML::Key << "phase_pi" << YAML::Value << num(s.pulses.phase_pi);
  e << YAML::Key << "center_ps" << YAML::Value << num(s.center_ps);
  e << YAML::Key << "gaussian_area_pi" << YAML::Value << num(s.gaussian.area_pi);
  e << YAML::Key << "gaussian_sigma_ps" << YAML::Value << num(s.gaussian.sigma_ps);
  if (s.gaussian.center_ps) e << YAML::Key << "gaussian_center_ps" << YAML::Value << num(*s.gaussian.center_ps);
  e << YAML::EndMap;

  e << YAML::Key << "quantum_dot" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "exciton_meV" << YAML::Value << num(s.exciton_meV);
  e << YAML::Key << "fine_structure_ueV" << YAML::Value << num(s.fine_structure_ueV);
  e << YAML::Key << "binding_meV" << YAML::Value << num(s.binding_meV);
  e << YAML::EndMap;

  e << YAML::Key << "cavity" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "tuning" << YAML::Value << std::string(to_string(s.tuning));
  e << YAML::Key << "offset_meV" << YAML::Value << num(s.cavity_offset_meV);
  e << YAML::Key << "g_ueV" << YAML::Value << num(s.g_ueV);
  e << YAML::Key << "kappa_over_g" << YAML::Value << num(s.kappa_over_g);
  e << YAML::Key << "n_max" << YAML::Value << s.n_max;
  e << YAML::Key << "dissipator" << YAML::Value
    << (s.dissipator == DissipatorConvention::standard ? "standard" : "factor_two");
  e << YAML::EndMap;

  e << YAML::Key << "numerics" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "grid_spacing_ps" << YAML::Value << num(s.grid_spacing_ps);
  e << YAML::Key << "coarse_spacing_ps" << YAML::Value << num(s.coarse_spacing_ps);
  if (s.t_end_ps) e << YAML::Key << "t_end_ps" << YAML::Value << num(*s.t_end_ps);
  e << YAML::Key << "max_time_ps" << YAML::Value << num(s.max_time_ps);
  e << YAML::Key << "rtol" << YAML::Value << num(s.tolerances.relative);
  e << YAML::Key << "atol" << YAML::Value << num(s.tolerances.absolute);
  e << YAML::Key << "frame_offset_meV" << YAML::Value << num(s.frame_offset_meV);
  e << YAML::EndMap;

  e << YAML::Key << "outputs" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "modes" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (Mode m : s.modes) e << std::string(mode_name(m));
  e << YAML::EndSeq;
  e << YAML::Key << "emission" << YAML::Value << s.emission;
  e << YAML::Key << "photon_quality" << YAML::Value << s.photon_quality;
  e << YAML::Key << "spectra" << YAML::Value << s.spectra;
  e << YAML::Key << "concurrence" << YAML::Value << s.concurrence;
  e << YAML::Key << "traces" << YAML::Value << s.traces;
  e << YAML::Key << "trace_until_ps" << YAML::Value << num(s.trace_until_ps);
  e << YAML::Key << "spectrum_span_meV" << YAML::Value << num(s.spectrum_grid.span_meV);
  e << YAML::Key << "spectrum_points" << YAML::Value << s.spectrum_grid.points;
  e << YAML::EndMap;

  if (!s.axes.empty()) {
    e << YAML::Key << "sweep" << YAML::Value << YAML::BeginSeq;
    for (const auto& ax : s.axes) {
      e << YAML::BeginMap;
      e << YAML::Key << "axis" << YAML::Value << ax.name;
      e << YAML::Key << "values" << YAML::Value << YAML::Flow << YAML::BeginSeq;
      for (double v : ax.values) e << num(v);
      e << YAML::EndSeq;
      e << YAML::EndMap;
    }
    e << YAML::EndSeq;
  }
  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

}  // namespace superqd
