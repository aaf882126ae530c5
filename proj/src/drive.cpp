#include "superqd/drive.hpp"

#include "superqd/units.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace superqd {

namespace {

constexpr double kCutWidths = 6.5;

Complex phasor(double angle) { return {std::cos(angle), std::sin(angle)}; }

}  // namespace

void PulsePair::validate() const {
  if (!(sigma_1_ps > 0.0) || !(sigma_2_ps > 0.0)) {
    throw std::invalid_argument("PulsePair: pulse durations must be > 0");
  }
  if (!std::isfinite(area_1_pi) || !std::isfinite(area_2_pi) || !std::isfinite(delay_ps) ||
      !std::isfinite(phase_pi) || !std::isfinite(center_ps)) {
    throw std::invalid_argument("PulsePair: parameters must be finite");
  }
}

double PulsePair::max_sigma() const {
  if (is_single()) return sigma_1_ps;
  return std::max(sigma_1_ps, sigma_2_ps);
}

PulsePair reference_gaussian_drive(double area_pi, double sigma_ps, double detuning_meV,
                                   double center_ps) {
  if (area_pi < 0.0) throw std::invalid_argument("reference Gaussian: area must be >= 0");
  if (!(sigma_ps > 0.0)) throw std::invalid_argument("reference Gaussian: sigma must be > 0");
  PulsePair p;
  p.area_1_pi = area_pi;
  p.sigma_1_ps = sigma_ps;
  p.detuning_1_meV = detuning_meV;
  p.area_2_pi = 0.0;
  p.sigma_2_ps = sigma_ps;
  p.center_ps = center_ps;
  return p;
}

double gaussian_envelope(double t, double sigma) {
  return std::exp(-t * t / (2.0 * sigma * sigma)) / std::sqrt(2.0 * kPi * sigma * sigma);
}

Complex drive_amplitude(double t, const PulsePair& p, double exciton_h_meV) {
  const double s = t - p.center_ps;
  const double w1 = meV_to_rad_per_ps(exciton_h_meV + p.detuning_1_meV);
  const double w2 = meV_to_rad_per_ps(exciton_h_meV + p.detuning_2_meV);
  Complex out = p.area_1_pi * kPi * gaussian_envelope(s, p.sigma_1_ps) * phasor(-w1 * s);
  if (p.area_2_pi != 0.0) {
    const double s2 = s - p.delay_ps;
    out += p.area_2_pi * kPi * gaussian_envelope(s2, p.sigma_2_ps) *
           phasor(-w2 * s2 + kPi * p.phase_pi);
  }
  return out;
}

Complex drive_amplitude_rotating(double t, const PulsePair& p, double exciton_h_meV,
                                 double frame_meV) {
  const double s = t - p.center_ps;
  // Detunings from the frame; computed from offsets to keep full precision.
  const double d1 = meV_to_rad_per_ps(exciton_h_meV + p.detuning_1_meV - frame_meV);
  Complex out = p.area_1_pi * kPi * gaussian_envelope(s, p.sigma_1_ps) * phasor(-d1 * s);
  if (p.area_2_pi != 0.0) {
    const double d2 = meV_to_rad_per_ps(exciton_h_meV + p.detuning_2_meV - frame_meV);
    const double s2 = s - p.delay_ps;
    const double carrier_shift = meV_to_rad_per_ps(frame_meV) * p.delay_ps;
    out += p.area_2_pi * kPi * gaussian_envelope(s2, p.sigma_2_ps) *
           phasor(-d2 * s2 + kPi * p.phase_pi + carrier_shift);
  }
  return out;
}

Complex drive_amplitude_rotating(double t, const SquarePulse& p, double exciton_h_meV,
                                 double frame_meV) {
  if (t < p.t_on_ps || t >= p.t_off_ps) return {0.0, 0.0};
  const double d = meV_to_rad_per_ps(exciton_h_meV + p.detuning_meV - frame_meV);
  return p.rabi_rad_per_ps * phasor(-d * t);
}

std::pair<double, double> pulse_window(const PulsePair& p) {
  const double half = 5.0 * p.max_sigma() + std::abs(p.delay_ps);
  return {p.center_ps - half, p.center_ps + half};
}

bool has_field(const Drive& d) {
  if (const auto* p = std::get_if<PulsePair>(&d)) {
    return p->area_1_pi != 0.0 || p->area_2_pi != 0.0;
  }
  if (const auto* s = std::get_if<SquarePulse>(&d)) {
    return s->rabi_rad_per_ps != 0.0 && s->t_off_ps > s->t_on_ps;
  }
  return false;
}

double drive_off_time(const Drive& d) {
  if (!has_field(d)) return 0.0;
  if (const auto* p = std::get_if<PulsePair>(&d)) {
    double end = p->area_1_pi != 0.0 ? p->center_ps + kCutWidths * p->sigma_1_ps : 0.0;
    if (p->area_2_pi != 0.0) {
      end = std::max(end, p->center_ps + p->delay_ps + kCutWidths * p->sigma_2_ps);
    }
    return std::max(end, 0.0);
  }
  return std::max(std::get<SquarePulse>(d).t_off_ps, 0.0);
}

double drive_on_time(const Drive& d) {
  if (!has_field(d)) return 0.0;
  if (const auto* p = std::get_if<PulsePair>(&d)) {
    double start = p->area_1_pi != 0.0 ? p->center_ps - kCutWidths * p->sigma_1_ps : 1e300;
    if (p->area_2_pi != 0.0) {
      start = std::min(start, p->center_ps + p->delay_ps - kCutWidths * p->sigma_2_ps);
    }
    return std::max(start, 0.0);
  }
  return std::max(std::get<SquarePulse>(d).t_on_ps, 0.0);
}

}  // namespace superqd
