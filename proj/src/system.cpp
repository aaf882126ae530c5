#include "superqd/system.hpp"

#include <stdexcept>

namespace superqd {

double SystemSpec::jump_rate() const {
  return dissipator == DissipatorConvention::standard ? cavity.kappa_per_ps
                                                      : 2.0 * cavity.kappa_per_ps;
}

void SystemSpec::validate() const {
  cavity.validate();
  if (const auto* p = std::get_if<PulsePair>(&drive)) p->validate();
  if (const auto* s = std::get_if<SquarePulse>(&drive)) {
    if (s->t_off_ps < s->t_on_ps) throw std::invalid_argument("SquarePulse: t_off < t_on");
  }
  if (emitter == EmitterModel::two_level && initial.kind == InitialKind::excited_biexciton) {
    throw std::invalid_argument("two-level emitter has no biexciton");
  }
}

CompositeSpace build_space(const SystemSpec& spec, std::size_t dimension_cap) {
  spec.cavity.validate();
  return CompositeSpace(spec.cavity.n_max, spec.emitter, dimension_cap);
}

void tune_exciton_resonant(CavitySpec& cavity, const LevelScheme& levels) {
  cavity.energy_h_meV = levels.e_exciton_h();
  cavity.energy_v_meV = levels.e_exciton_v();
}

void tune_two_photon_resonant(CavitySpec& cavity, const LevelScheme& levels) {
  cavity.energy_h_meV = 0.5 * levels.e_biexciton();
  cavity.energy_v_meV = 0.5 * levels.e_biexciton();
}

void tune_exciton_offset(CavitySpec& cavity, const LevelScheme& levels, double offset_meV) {
  cavity.energy_h_meV = levels.e_exciton_h() + offset_meV;
  cavity.energy_v_meV = levels.e_exciton_v() + offset_meV;
}

}  // namespace superqd
