#pragma once

#include <complex>
#include <utility>
#include <variant>

namespace superqd {

using Complex = std::complex<double>;

// Two Gaussian pulses, each normalised so that the time integral of its
// envelope equals its area. Areas and phase are in units of pi; detunings
// are hbar*(omega_i) - E_XH.
struct PulsePair {
  double area_1_pi = 0.0;
  double area_2_pi = 0.0;
  double sigma_1_ps = 1.0;
  double sigma_2_ps = 1.0;
  double detuning_1_meV = 0.0;
  double detuning_2_meV = 0.0;
  double delay_ps = 0.0;
  double phase_pi = 0.0;
  double center_ps = 10.0;

  void validate() const;
  double max_sigma() const;
  bool is_single() const { return area_2_pi == 0.0; }
};

// Rectangular constant-amplitude drive on [t_on, t_off). Only used where a
// piecewise-constant generator is needed, e.g. matrix-exponential checks.
struct SquarePulse {
  double rabi_rad_per_ps = 0.0;
  double detuning_meV = 0.0;
  double t_on_ps = 0.0;
  double t_off_ps = 0.0;
};

using Drive = std::variant<std::monostate, PulsePair, SquarePulse>;

// Single-pulse special case (area_2 = 0).
PulsePair reference_gaussian_drive(double area_pi, double sigma_ps, double detuning_meV,
                                   double center_ps = 10.0);

// Gaussian envelope with unit time integral.
double gaussian_envelope(double t, double sigma);

// Lab-frame Rabi amplitude (rad/ps) of the two-pulse field with the global
// shift t -> t - center applied to both pulses. Carrier frequencies are
// (E_XH + detuning_i)/hbar, so exciton_h_meV sets the optical carrier.
Complex drive_amplitude(double t, const PulsePair& p, double exciton_h_meV = 1366.0);

// Same field seen in a frame rotating at frame_meV/hbar: equal to
// drive_amplitude(t) * exp(i*frame*(t - center)/hbar). The absolute carrier
// only survives through the inter-pulse delay term.
Complex drive_amplitude_rotating(double t, const PulsePair& p, double exciton_h_meV,
                                 double frame_meV);
Complex drive_amplitude_rotating(double t, const SquarePulse& p, double exciton_h_meV,
                                 double frame_meV);

// [center - 5 sigma_max - |delay|, center + 5 sigma_max + |delay|].
std::pair<double, double> pulse_window(const PulsePair& p);

// Time after which the field is treated as exactly zero: each pulse is cut
// 6.5 widths past its own centre (relative envelope below 7e-10).
double drive_off_time(const Drive& d);
// Start of the interval where dense stepping is required.
double drive_on_time(const Drive& d);
bool has_field(const Drive& d);

}  // namespace superqd
