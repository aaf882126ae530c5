#pragma once

#include "superqd/scenario.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>

namespace superqd {

// Malformed or schema-violating configuration; the message names the key path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// YAML schema (every key optional except where noted, units in key names):
//
//   name: my-run
//   excitation:
//     kind: super | gaussian_resonant | gaussian_two_photon_resonant | initial_biexciton
//     pulse_set: table1-set1          # fills the fields below and binding_meV
//     detuning_1_meV, detuning_2_meV, area_1_pi, area_2_pi,
//     sigma_1_ps, sigma_2_ps, delay_ps, phase_pi, center_ps
//     gaussian_area_pi, gaussian_sigma_ps, gaussian_center_ps
//   quantum_dot: {exciton_meV, fine_structure_ueV, binding_meV}
//   cavity:
//     tuning: exciton_resonant | two_photon_resonant | offset
//     offset_meV, g_ueV, kappa_over_g, n_max
//     dissipator: standard | factor_two
//   numerics: {grid_spacing_ps, coarse_spacing_ps, t_end_ps, max_time_ps,
//              rtol, atol, frame_offset_meV}
//   outputs:
//     modes: [H, V]
//     emission, photon_quality, spectra, concurrence, traces: bool
//     trace_until_ps, spectrum_span_meV, spectrum_points
//   sweep:                            # cartesian product, last entry fastest
//     - axis: kappa_over_g
//       values: [0.5, 1, 2, 4]        # or linspace: [from, to, count]
Scenario parse_scenario(const std::string& yaml_text);
Scenario load_scenario(const std::filesystem::path& path);

// Fully resolved scenario in the same schema; parse_scenario round-trips it.
std::string to_yaml(const Scenario& s);

}  // namespace superqd
