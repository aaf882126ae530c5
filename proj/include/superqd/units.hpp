#pragma once

// Internal units: energies in meV, times in ps, angular frequencies in rad/ps.

namespace superqd {

inline constexpr double kHbarMeVps = 0.6582119569;
inline constexpr double kPi = 3.14159265358979323846;

inline constexpr double meV_to_rad_per_ps(double e_meV) { return e_meV / kHbarMeVps; }
inline constexpr double rad_per_ps_to_meV(double w) { return w * kHbarMeVps; }
inline constexpr double ueV_to_meV(double e_ueV) { return e_ueV * 1e-3; }

}  // namespace superqd
