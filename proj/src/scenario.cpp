#include "superqd/scenario.hpp"

#include "superqd/units.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace superqd {

namespace {

template <typename E, std::size_t N>
E parse_enum(std::string_view s, const std::pair<E, std::string_view> (&table)[N], const char* what) {
  for (const auto& [e, name] : table) {
    if (name == s) return e;
  }
  std::string msg = std::string("unknown ") + what + " '" + std::string(s) + "'; expected one of:";
  for (const auto& [e, name] : table) msg += " " + std::string(name);
  throw std::invalid_argument(msg);
}

constexpr std::pair<ExcitationKind, std::string_view> kKinds[] = {
    {ExcitationKind::super, "super"},
    {ExcitationKind::gaussian_resonant, "gaussian_resonant"},
    {ExcitationKind::gaussian_two_photon_resonant, "gaussian_two_photon_resonant"},
    {ExcitationKind::initial_biexciton, "initial_biexciton"},
};

constexpr std::pair<CavityTuning, std::string_view> kTunings[] = {
    {CavityTuning::exciton_resonant, "exciton_resonant"},
    {CavityTuning::two_photon_resonant, "two_photon_resonant"},
    {CavityTuning::offset, "offset"},
};

PulseSet make_set(std::string name, double d1, double d2, double a1, double a2, double s1, double s2, double dt,
                  double phi, double bind, bool biexciton) {
  PulseSet p;
  p.name = std::move(name);
  p.detuning_1_meV = d1;
  p.detuning_2_meV = d2;
  p.area_1_pi = a1;
  p.area_2_pi = a2;
  p.sigma_1_ps = s1;
  p.sigma_2_ps = s2;
  p.delay_ps = dt;
  p.phase_pi = phi;
  p.binding_meV = bind;
  p.targets_biexciton = biexciton;
  return p;
}

}  // namespace

std::string_view to_string(ExcitationKind k) {
  for (const auto& [e, name] : kKinds) {
    if (e == k) return name;
  }
  return "?";
}

std::string_view to_string(CavityTuning t) {
  for (const auto& [e, name] : kTunings) {
    if (e == t) return name;
  }
  return "?";
}

ExcitationKind parse_excitation_kind(std::string_view s) { return parse_enum(s, kKinds, "excitation kind"); }
CavityTuning parse_cavity_tuning(std::string_view s) { return parse_enum(s, kTunings, "cavity tuning"); }

const std::vector<PulseSet>& pulse_sets() {
  //                                  d1     d2         A1       A2       s1      s2      dt      phi   Ebind  B?
  static const std::vector<PulseSet> sets = {
      make_set("table1-set1", -8.0, -17.5336, 32.0007, 32.0050, 3.6058, 3.4151, 0.0138, 0.0, 3.0, false),
      make_set("table1-set2", -5.0, -11.3, 25.0, 33.33, 4.0, 4.0, 0.0, 0.0, 3.0, false),
      make_set("table1-set3", -5.0, -12.13567, 30.0, 30.0, 1.3673, 1.3673, 0.0, 0.0, 1.0, true),
      make_set("table1-set4", -5.0, -12.99, 36.88, 36.88, 3.0, 3.0, 5.47, 0.0, 1.0, true),
      make_set("table2-set1", -8.0, -19.0, 35.0, 35.0, 1.1897, 1.2642, 0.0, 1.01, 3.0, true),
      make_set("table2-set2", -5.0, -10.8688, 32.0, 29.6, 1.5730, 2.3195, 0.0, 0.0, 3.0, true),
      make_set("table2-set3", -5.0, -11.8980, 40.0, 20.8081, 3.0, 3.0, 0.0, 0.0, 3.0, true),
  };
  return sets;
}

const PulseSet& pulse_set(std::string_view name) {
  for (const auto& s : pulse_sets()) {
    if (s.name == name) return s;
  }
  std::string msg = "unknown pulse set '" + std::string(name) + "'; expected one of:";
  for (const auto& s : pulse_sets()) msg += " " + s.name;
  throw std::invalid_argument(msg);
}

const std::vector<std::string>& sweep_axis_names() {
  static const std::vector<std::string> names = {"g_ueV",           "kappa_over_g",       "phase_pi",
                                                 "cavity_offset_meV", "fine_structure_ueV", "binding_meV"};
  return names;
}

void Scenario::validate() const {
  if (name.empty()) throw std::invalid_argument("scenario: empty name");
  if (n_max < 1) throw std::invalid_argument("scenario '" + name + "': n_max must be >= 1");
  if (g_ueV < 0.0 || kappa_over_g < 0.0) {
    throw std::invalid_argument("scenario '" + name + "': g_ueV and kappa_over_g must be >= 0");
  }
  if (!(grid_spacing_ps > 0.0) || !(coarse_spacing_ps > 0.0)) {
    throw std::invalid_argument("scenario '" + name + "': grid spacings must be > 0");
  }
  if (t_end_ps && !(*t_end_ps > 0.0)) throw std::invalid_argument("scenario '" + name + "': t_end_ps must be > 0");
  if (modes.empty()) throw std::invalid_argument("scenario '" + name + "': no cavity mode selected");
  if (kind == ExcitationKind::gaussian_resonant || kind == ExcitationKind::gaussian_two_photon_resonant) {
    if (!(gaussian.sigma_ps > 0.0)) throw std::invalid_argument("scenario '" + name + "': gaussian sigma_ps must be > 0");
  }
  const auto& known = sweep_axis_names();
  for (std::size_t a = 0; a < axes.size(); ++a) {
    const auto& ax = axes[a];
    if (std::find(known.begin(), known.end(), ax.name) == known.end()) {
      throw std::invalid_argument("scenario '" + name + "': unknown sweep axis '" + ax.name + "'");
    }
    if (ax.values.empty()) throw std::invalid_argument("scenario '" + name + "': sweep axis '" + ax.name + "' is empty");
    for (std::size_t b = 0; b < a; ++b) {
      if (axes[b].name == ax.name) throw std::invalid_argument("scenario '" + name + "': axis '" + ax.name + "' repeated");
    }
  }
}

std::vector<SweepPoint> sweep_points(const Scenario& s) {
  std::vector<SweepPoint> out(1);
  for (const auto& ax : s.axes) {
    std::vector<SweepPoint> next;
    for (const auto& p : out) {
      for (double v : ax.values) {
        SweepPoint q = p;
        q.values.emplace_back(ax.name, v);
        next.push_back(std::move(q));
      }
    }
    out = std::move(next);
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i].index = i;
  return out;
}

Scenario at_point(const Scenario& s, const SweepPoint& p) {
  Scenario r = s;
  for (const auto& [name, v] : p.values) {
    if (name == "g_ueV") {
      r.g_ueV = v;
    } else if (name == "kappa_over_g") {
      r.kappa_over_g = v;
    } else if (name == "phase_pi") {
      r.pulses.phase_pi = v;
    } else if (name == "cavity_offset_meV") {
      r.tuning = CavityTuning::offset;
      r.cavity_offset_meV = v;
    } else if (name == "fine_structure_ueV") {
      r.fine_structure_ueV = v;
    } else if (name == "binding_meV") {
      r.binding_meV = v;
    } else {
      throw std::invalid_argument("at_point: unknown axis '" + name + "'");
    }
  }
  r.axes.clear();
  return r;
}

SystemSpec build_system(const Scenario& s) {
  s.validate();
  SystemSpec spec;
  spec.levels = LevelScheme(s.exciton_meV, s.fine_structure_ueV * 1e-3, s.binding_meV);
  switch (s.tuning) {
    case CavityTuning::exciton_resonant: tune_exciton_resonant(spec.cavity, spec.levels); break;
    case CavityTuning::two_photon_resonant: tune_two_photon_resonant(spec.cavity, spec.levels); break;
    case CavityTuning::offset: tune_exciton_offset(spec.cavity, spec.levels, s.cavity_offset_meV); break;
  }
  spec.cavity.g_ueV = s.g_ueV;
  spec.cavity.kappa_per_ps = meV_to_rad_per_ps(s.kappa_over_g * s.g_ueV * 1e-3);
  spec.cavity.n_max = s.n_max;
  spec.dissipator = s.dissipator;
  spec.frame_offset_meV = s.frame_offset_meV;

  const double center_gauss = s.gaussian.center_ps.value_or(5.0 * s.gaussian.sigma_ps);
  switch (s.kind) {
    case ExcitationKind::super: {
      PulsePair p;
      p.area_1_pi = s.pulses.area_1_pi;
      p.area_2_pi = s.pulses.area_2_pi;
      p.sigma_1_ps = s.pulses.sigma_1_ps;
      p.sigma_2_ps = s.pulses.sigma_2_ps;
      p.detuning_1_meV = s.pulses.detuning_1_meV;
      p.detuning_2_meV = s.pulses.detuning_2_meV;
      p.delay_ps = s.pulses.delay_ps;
      p.phase_pi = s.pulses.phase_pi;
      p.center_ps = s.center_ps;
      spec.drive = p;
      break;
    }
    case ExcitationKind::gaussian_resonant:
      spec.drive = reference_gaussian_drive(s.gaussian.area_pi, s.gaussian.sigma_ps, 0.0, center_gauss);
      break;
    case ExcitationKind::gaussian_two_photon_resonant: {
      const double detuning = 0.5 * spec.levels.e_biexciton() - spec.levels.e_exciton_h();
      spec.drive = reference_gaussian_drive(s.gaussian.area_pi, s.gaussian.sigma_ps, detuning, center_gauss);
      break;
    }
    case ExcitationKind::initial_biexciton:
      spec.drive = std::monostate{};
      spec.initial.kind = InitialKind::excited_biexciton;
      break;
  }
  spec.validate();
  return spec;
}

EvolveOptions evolve_options(const Scenario& s) {
  EvolveOptions o;
  o.grid_spacing_ps = s.grid_spacing_ps;
  o.coarse_spacing_ps = s.coarse_spacing_ps;
  o.t_end_ps = s.t_end_ps;
  o.max_time_ps = s.max_time_ps;
  o.tolerances = s.tolerances;
  return o;
}

MetricsRequest metrics_request(const Scenario& s) {
  MetricsRequest r;
  r.modes = s.modes;
  r.photon_quality = s.photon_quality;
  r.spectra = s.spectra;
  r.concurrence = s.concurrence;
  r.spectrum_grid = s.spectrum_grid;
  return r;
}

namespace {

Scenario super_exciton(std::string name, double kappa_over_g) {
  Scenario s;
  s.name = std::move(name);
  s.kind = ExcitationKind::super;
  s.pulses = pulse_set("table1-set1");
  s.binding_meV = 3.0;
  s.tuning = CavityTuning::exciton_resonant;
  s.g_ueV = 66.0;
  s.kappa_over_g = kappa_over_g;
  return s;
}

Scenario super_biexciton(std::string name, double kappa_over_g) {
  Scenario s;
  s.name = std::move(name);
  s.kind = ExcitationKind::super;
  s.pulses = pulse_set("table1-set4");
  s.binding_meV = 1.0;
  s.tuning = CavityTuning::two_photon_resonant;
  s.g_ueV = 66.0;
  s.kappa_over_g = kappa_over_g;
  s.modes = {Mode::H, Mode::V};
  return s;
}

Scenario fig2(Scenario s) {
  s.spectra = true;
  s.traces = true;
  s.trace_until_ps = 300.0;
  return s;
}

std::vector<Preset> build_presets() {
  std::vector<Preset> out;

  for (const auto& set : pulse_sets()) {
    Scenario s;
    s.name = set.name;
    s.kind = ExcitationKind::super;
    s.pulses = set;
    s.binding_meV = set.binding_meV;
    s.tuning = set.targets_biexciton ? CavityTuning::two_photon_resonant : CavityTuning::exciton_resonant;
    s.traces = true;
    s.trace_until_ps = 100.0;
    if (set.targets_biexciton) {
      s.modes = {Mode::H, Mode::V};
      s.photon_quality = false;
      s.concurrence = true;
    }
    out.push_back({set.name, "single run with pulse set " + set.name + ", g = 66 ueV, hbar kappa = g", {s}});
  }

  out.push_back({"fig2-exciton", "set 1 exciton preparation, hbar kappa = g: traces and H spectrum",
                 {fig2(super_exciton("fig2-exciton", 1.0))}});
  {
    Scenario s = fig2(super_biexciton("fig2-biexciton", 1.0));
    s.photon_quality = false;
    out.push_back({"fig2-biexciton", "set 4 biexciton preparation, hbar kappa = g: traces and H spectrum", {s}});
  }
  out.push_back({"figA1-exciton", "as fig2-exciton with hbar kappa = 4 g", {fig2(super_exciton("figA1-exciton", 4.0))}});
  {
    Scenario s = fig2(super_biexciton("figA1-biexciton", 4.0));
    s.photon_quality = false;
    out.push_back({"figA1-biexciton", "as fig2-biexciton with hbar kappa = 4 g", {s}});
  }

  const std::vector<double> kappas = {0.5, 1.0, 2.0, 4.0};
  Scenario f3s = super_exciton("fig3-super", 1.0);
  f3s.axes = {{"g_ueV", {20.0, 66.0}}, {"kappa_over_g", kappas}};
  Scenario f3g = f3s;
  f3g.name = "fig3-gaussian";
  f3g.kind = ExcitationKind::gaussian_resonant;
  f3g.gaussian = GaussianPulse{1.0, 5.0, std::nullopt};
  out.push_back({"fig3-super", "single-photon quality, set 1, g in {20, 66} ueV, hbar kappa / g in {0.5, 1, 2, 4}", {f3s}});
  out.push_back({"fig3-gaussian", "single-photon quality, resonant pi pulse (sigma 5 ps), same sweep", {f3g}});
  out.push_back({"fig3", "fig3-super and fig3-gaussian", {f3s, f3g}});

  Scenario f4s = super_biexciton("fig4-super", 1.0);
  f4s.photon_quality = false;
  f4s.concurrence = true;
  f4s.axes = {{"kappa_over_g", kappas}};
  Scenario f4g = f4s;
  f4g.name = "fig4-gaussian";
  f4g.kind = ExcitationKind::gaussian_two_photon_resonant;
  f4g.gaussian = GaussianPulse{3.3, 5.0, std::nullopt};
  Scenario f4i = f4s;
  f4i.name = "fig4-initial";
  f4i.kind = ExcitationKind::initial_biexciton;
  out.push_back({"fig4", "entangled pairs, E_bind = 1 meV, g = 66 ueV: set 4, two-photon Gaussian, initial biexciton",
                 {f4s, f4g, f4i}});

  Scenario a2 = super_exciton("figA2", 4.0);
  a2.photon_quality = false;
  a2.traces = true;
  a2.t_end_ps = 60.0;
  a2.trace_until_ps = 60.0;
  a2.axes = {{"cavity_offset_meV", {0.0, 0.5, 1.0, 2.0, 4.0}}};
  out.push_back({"figA2", "H-mode transients for cavity offsets from the X_H line, set 1, hbar kappa = 4 g", {a2}});

  Scenario a3;
  a3.name = "figA3";
  a3.kind = ExcitationKind::super;
  a3.pulses = pulse_set("table1-set3");
  a3.binding_meV = 1.0;
  a3.tuning = CavityTuning::two_photon_resonant;
  a3.g_ueV = 0.0;
  a3.emission = false;
  a3.photon_quality = false;
  // Nothing decays without coupling; stop well after the field is off.
  a3.t_end_ps = 40.0;
  std::vector<double> phis;
  for (int k = 0; k <= 24; ++k) phis.push_back(k / 12.0);
  a3.axes = {{"phase_pi", phis}};
  out.push_back({"figA3", "final populations against inter-pulse phase, set 3, g = 0", {a3}});

  Scenario ef = f4i;
  ef.name = "efsp-sensitivity";
  ef.axes = {{"fine_structure_ueV", {2.0, 20.0}}};
  out.push_back({"efsp-sensitivity", "initial biexciton concurrence for E_fsp in {2, 20} ueV, hbar kappa = g", {ef}});
  return out;
}

}  // namespace

const std::vector<Preset>& presets() {
  static const std::vector<Preset> all = build_presets();
  return all;
}

const Preset& preset(std::string_view name) {
  for (const auto& p : presets()) {
    if (p.name == name) return p;
  }
  std::string msg = "unknown preset '" + std::string(name) + "'; known presets:";
  for (const auto& p : presets()) msg += " " + p.name;
  throw std::invalid_argument(msg);
}

}  // namespace superqd
