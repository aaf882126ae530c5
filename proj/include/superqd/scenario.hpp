#pragma once

#include "superqd/drive.hpp"
#include "superqd/dynamics.hpp"
#include "superqd/hilbert.hpp"
#include "superqd/metrics.hpp"
#include "superqd/system.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace superqd {

enum class ExcitationKind { super, gaussian_resonant, gaussian_two_photon_resonant, initial_biexciton };
enum class CavityTuning { exciton_resonant, two_photon_resonant, offset };

std::string_view to_string(ExcitationKind k);
std::string_view to_string(CavityTuning t);
ExcitationKind parse_excitation_kind(std::string_view s);
CavityTuning parse_cavity_tuning(std::string_view s);

// One row of the two-pulse parameter tables.
struct PulseSet {
  std::string name;           // "table1-set1" ...
  double detuning_1_meV = 0.0;
  double detuning_2_meV = 0.0;
  double area_1_pi = 0.0;
  double area_2_pi = 0.0;
  double sigma_1_ps = 0.0;
  double sigma_2_ps = 0.0;
  double delay_ps = 0.0;
  double phase_pi = 0.0;
  double binding_meV = 3.0;   // quantum dot the set was tuned for
  bool targets_biexciton = false;
};

const std::vector<PulseSet>& pulse_sets();
const PulseSet& pulse_set(std::string_view name);

struct GaussianPulse {
  double area_pi = 1.0;
  double sigma_ps = 5.0;
  // nullopt: five widths, so the field starts from zero.
  std::optional<double> center_ps;
};

struct SweepAxis {
  std::string name;  // one of sweep_axis_names()
  std::vector<double> values;
};

const std::vector<std::string>& sweep_axis_names();

struct Scenario {
  std::string name = "scenario";
  ExcitationKind kind = ExcitationKind::super;

  // Quantum dot.
  double exciton_meV = 1366.0;
  double fine_structure_ueV = 2.0;
  double binding_meV = 3.0;

  // Cavity.
  CavityTuning tuning = CavityTuning::exciton_resonant;
  double cavity_offset_meV = 0.0;  // used with CavityTuning::offset
  double g_ueV = 66.0;
  double kappa_over_g = 1.0;       // hbar*kappa / g
  int n_max = 2;
  DissipatorConvention dissipator = DissipatorConvention::standard;

  // Drive.
  PulseSet pulses{};
  double center_ps = 10.0;
  GaussianPulse gaussian{};

  // Numerics.
  double grid_spacing_ps = 0.5;
  double coarse_spacing_ps = 2.0;
  std::optional<double> t_end_ps;
  double max_time_ps = 2000.0;
  Tolerances tolerances{};
  double frame_offset_meV = 0.0;

  // Outputs.
  std::vector<Mode> modes{Mode::H};
  bool emission = true;
  bool photon_quality = true;
  bool spectra = false;
  bool concurrence = false;
  bool traces = false;
  double trace_until_ps = 300.0;
  SpectrumGrid spectrum_grid{};

  std::vector<SweepAxis> axes;

  void validate() const;
};

// Ordered values of every swept axis at one point.
struct SweepPoint {
  std::size_t index = 0;
  std::vector<std::pair<std::string, double>> values;
};

// Cartesian product in axis order, last axis fastest. A scenario without
// axes has exactly one point.
std::vector<SweepPoint> sweep_points(const Scenario& s);
// Copy of s with the point's values substituted.
Scenario at_point(const Scenario& s, const SweepPoint& p);

SystemSpec build_system(const Scenario& s);
EvolveOptions evolve_options(const Scenario& s);
MetricsRequest metrics_request(const Scenario& s);

// A named, code-defined bundle of scenarios.
struct Preset {
  std::string name;
  std::string description;
  std::vector<Scenario> scenarios;
};

const std::vector<Preset>& presets();
// Throws std::invalid_argument listing the known names.
const Preset& preset(std::string_view name);

}  // namespace superqd
