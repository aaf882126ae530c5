#pragma once

#include "superqd/hilbert.hpp"
#include "superqd/liouvillian.hpp"
#include "superqd/rk4.hpp"
#include "superqd/system.hpp"

#include <array>
#include <optional>
#include <vector>

namespace superqd {

struct EvolveOptions {
  // Output/anchor grid spacing; every node stores a full snapshot.
  double grid_spacing_ps = 0.5;
  // Spacing once the field is off and sum_i <n_i> + P(X_H) + P(X_V) has
  // dropped below coarsen_threshold. Must be a multiple of grid_spacing_ps;
  // equal spacings disable coarsening.
  double coarse_spacing_ps = 2.0;
  double coarsen_threshold = 1e-4;
  // Fixed end time; nullopt selects the decay-based auto stop.
  std::optional<double> t_end_ps;
  // Auto stop: P(G, 0, 0) >= 1 - decay_threshold after the drive.
  double decay_threshold = 1e-3;
  double max_time_ps = 2000.0;
  Tolerances tolerances{};
  double max_step_window_ps = 0.05;
  double max_step_free_ps = 1.0;
  bool store_snapshots = true;
  // After the field is off, step with the exact block exponential instead
  // of RK4.
  bool exact_free_evolution = true;
  // Integrate <n_i> from the last node to infinity with the field-free
  // generator when the field is off there and the cavity is lossy.
  bool complete_tail = true;
};

struct PopulationRecord {
  std::array<double, 4> level{};   // G, X_H, X_V, B (zero for absent levels)
  std::array<double, 2> photons{}; // <a_H^dag a_H>, <a_V^dag a_V>
  std::array<Complex, 2> field{};  // <a_H>, <a_V> in the rotating frame
  double ground_vacuum = 0.0;      // P(G, 0, 0)
  double trace = 0.0;
};

struct Trajectory {
  SystemSpec spec;
  double grid_spacing_ps = 0.5;
  double coarse_spacing_ps = 0.5;
  // Node k sits at lattice[k] * grid_spacing_ps.
  std::vector<long> lattice;
  std::vector<double> times;
  std::vector<PopulationRecord> records;
  std::vector<DensityMatrix> snapshots;
  // Running integrals int_0^t <a_i^dag a_i> dt', integrated with the state.
  std::vector<std::array<double, 2>> photon_integral;
  // int_{t_end}^inf <a_i^dag a_i> dt, when available.
  std::optional<std::array<double, 2>> photon_tail;
  std::pair<double, double> pulse_window{0.0, 0.0};
  double drive_off_ps = 0.0;
  // First node from which the generator is time independent.
  std::size_t drive_off_index = 0;
  // First node followed by a coarse interval (size() if none).
  std::size_t coarse_index = 0;
  bool auto_stop = false;
  bool decayed = false;   // auto stop reached before the cap
  bool cap_hit = false;
  std::size_t rhs_evaluations = 0;

  std::size_t size() const { return times.size(); }
  double t_end() const { return times.empty() ? 0.0 : times.back(); }
};

// Pulse window used for "during excitation" checks (empty interval when the
// system is not driven).
std::pair<double, double> excitation_window(const SystemSpec& spec);

// Step-size policy shared by every propagation of a given system.
StepPolicy step_policy(const SystemSpec& spec, const EvolveOptions& opt);

PopulationRecord measure(const CompositeSpace& space, const DensityMatrix& rho);

// Integrates the master equation from t = 0 on the output lattice.
// Throws IntegrationError on step-size underflow.
Trajectory evolve(const SystemSpec& spec, const EvolveOptions& opt = {});

}  // namespace superqd
