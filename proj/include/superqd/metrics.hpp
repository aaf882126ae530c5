#pragma once

#include "superqd/correlations.hpp"
#include "superqd/dynamics.hpp"

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace superqd {

// A bounded figure of merit left its range by more than the clamp tolerance.
class MetricRangeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Values within this distance outside [0, 1] are treated as quadrature noise.
inline constexpr double kMetricClamp = 1e-6;

struct EmissionProbability {
  double value = 0.0;
  // The trajectory stopped at the cap before decaying and no tail could be
  // added; value underestimates.
  bool lower_bound = false;
};

// Emitted photon number from mode `mode`: jump rate times int <a^dag a> dt.
EmissionProbability emission_probability(const Trajectory& traj, Mode mode);

// 1 - int int G2 / int int G_pop. Empty when nothing was emitted.
std::optional<double> purity(const GFunctions& gf, Mode mode);
// 1 - int int 2 G_HOM / int int (2 G_pop - |<a(t+tau)><a^dag(t)>|^2).
std::optional<double> indistinguishability(const GFunctions& gf, Mode mode);

// Basis |HH>, |HV>, |VH>, |VV>.
struct TwoPhotonDensityMatrix {
  Eigen::Matrix4cd entries = Eigen::Matrix4cd::Zero();
  // Trace before normalization.
  double raw_trace = 0.0;
};

// Entry (I, J) with I = (i1, i2), J = (j1, j2) is
// int int <a_i1^dag(t) a_i2^dag(t+tau) a_j2(t+tau) a_j1(t)>.
// Throws std::runtime_error when the assembled matrix is not Hermitian
// (relative 1e-9) or its trace vanishes.
TwoPhotonDensityMatrix two_photon_matrix(const GFunctions& gf);
// Same from the sixteen integrals directly, for tests.
TwoPhotonDensityMatrix two_photon_matrix(const std::array<Complex, 16>& pair_integrals);

// Wootters concurrence with the spin flip sigma_y (x) sigma_y.
// Throws std::invalid_argument for a non-Hermitian or non-normalized input
// and std::runtime_error for an eigenvalue below -1e-9.
double concurrence(const Eigen::Matrix4cd& rho);
inline double concurrence(const TwoPhotonDensityMatrix& m) { return concurrence(m.entries); }

struct SpectrumGrid {
  double span_meV = 2.0;  // half width around the mode frequency
  int points = 2000;
};

struct Spectrum {
  Mode mode = Mode::H;
  std::vector<double> omega_rel_meV;  // relative to the cavity mode frequency
  std::vector<double> normalized;     // unit peak
  double peak = 0.0;                  // raw maximum, rad^-1 units of int dt dtau
  // (W+ - W-)/(W+ + W-) with W+- the weight above / below the mode frequency.
  double asymmetry = 0.0;

  // Raw values, peak * normalized.
  std::vector<double> raw() const;
  // int S d(omega) with omega in rad/ps.
  double integral_rad_per_ps() const;
};

// Re int dt int dtau e^{i omega tau} G1(t, tau) on a frequency grid centred on
// the cavity mode. G1 is linearly interpolated in tau and the oscillating
// factor integrated exactly on every interval.
Spectrum spectrum(const Trajectory& traj, const GFunctions& gf, Mode mode, const SpectrumGrid& grid = {});

struct ConvergenceCheck {
  std::string gate;    // "fock", "grid", "tolerance"
  std::string metric;  // e.g. "purity_H"
  double baseline = 0.0;
  double refined = 0.0;
  double delta() const { return refined - baseline; }
  bool passed(double limit = 1e-3) const { return std::abs(delta()) < limit; }
};

struct ModeMetrics {
  Mode mode = Mode::H;
  EmissionProbability emission;
  std::optional<double> purity;
  std::optional<double> indistinguishability;
  std::optional<Spectrum> spectrum;
};

struct MetricsReport {
  std::vector<ModeMetrics> modes;
  std::optional<double> concurrence;
  std::optional<TwoPhotonDensityMatrix> two_photon;
  std::vector<ConvergenceCheck> convergence;

  const ModeMetrics& mode(Mode m) const;
  bool converged(double limit = 1e-3) const;
  // Flat name -> value view, e.g. "emission_prob_H", "purity_H", "concurrence".
  std::map<std::string, double> headline() const;
};

struct MetricsRequest {
  std::vector<Mode> modes{Mode::H};
  bool photon_quality = true;  // purity and indistinguishability
  bool spectra = false;
  bool concurrence = false;
  SpectrumGrid spectrum_grid{};
};

// Runs the needed correlators and reduces them.
MetricsReport compute_metrics(const Trajectory& traj, const MetricsRequest& req, const QrtOptions& qrt = {});

// Applies the noise clamp to a value that must lie in [0, 1].
double clamp_unit(double value, const std::string& what);

}  // namespace superqd
