#pragma once

#include "superqd/drive.hpp"
#include "superqd/hilbert.hpp"

namespace superqd {

// Lindblad loss term for each cavity mode.
//   standard:         kappa * (a rho a^dag - 1/2 {a^dag a, rho})
//   factor_two:       kappa * (2 a rho a^dag - a^dag a rho - rho a^dag a)
enum class DissipatorConvention { standard, factor_two };

struct SystemSpec {
  LevelScheme levels{};
  CavitySpec cavity{};
  EmitterModel emitter = EmitterModel::four_level;
  Drive drive{};
  InitialState initial{};
  DissipatorConvention dissipator = DissipatorConvention::standard;
  // The equations are integrated in a frame rotating at (E_XH + offset)/hbar
  // per excitation quantum. Physical observables do not depend on it.
  double frame_offset_meV = 0.0;

  double frame_meV() const { return levels.e_exciton_h() + frame_offset_meV; }
  // Rate multiplying a rho a^dag in the chosen convention.
  double jump_rate() const;
  void validate() const;
};

CompositeSpace build_space(const SystemSpec& spec, std::size_t dimension_cap = kDefaultDimensionCap);

// hbar*omega_H = E_XH, hbar*omega_V = E_XV.
void tune_exciton_resonant(CavitySpec& cavity, const LevelScheme& levels);
// hbar*omega_H = hbar*omega_V = E_B / 2.
void tune_two_photon_resonant(CavitySpec& cavity, const LevelScheme& levels);
// hbar*omega_H = E_XH + offset, hbar*omega_V = E_XV + offset.
void tune_exciton_offset(CavitySpec& cavity, const LevelScheme& levels, double offset_meV);

}  // namespace superqd
