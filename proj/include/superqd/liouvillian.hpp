#pragma once

#include "superqd/hilbert.hpp"
#include "superqd/system.hpp"

#include <vector>

namespace superqd {

// Master-equation generator in the excitation-number rotating frame.
//
// H/hbar = sum_m eps_m |m><m| + V_static + V_drive(t), with eps_m the
// rotating-frame energies, V_static the QD-cavity coupling and
// V_drive(t) = -1/2 (Omega(t) R + Omega*(t) R^dag) for the H-polarised
// raising operator R = |X_H><G| + |B><X_H|. The cavity loss is folded into
// the anti-Hermitian part of the diagonal plus the jump term r a rho a^dag.
//
// All operators are sparse in this basis; apply() exploits that structure.
// reference_rhs() is the plain dense evaluation kept for cross-checks.
class Liouvillian {
 public:
  Liouvillian(const SystemSpec& spec, const CompositeSpace& space);

  const SystemSpec& spec() const { return spec_; }
  Eigen::Index dimension() const { return dim_; }

  // Rotating-frame Rabi amplitude, identically zero outside the drive span.
  Complex drive(double t) const;
  double drive_off_time() const { return drive_off_; }
  double drive_on_time() const { return drive_on_; }
  bool driven() const { return driven_; }

  // out = L_t(rho). out must not alias rho.
  void apply(double t, const Matrix& rho, Matrix& out) const;
  // out = L_t^dagger(op), the Heisenberg-picture generator:
  // tr(B L(X)) = tr(L^dagger(B) X).
  void apply_adjoint(double t, const Matrix& op, Matrix& out) const;

  // Dense rotating-frame Hamiltonian H/hbar in rad/ps.
  Matrix hamiltonian(double t) const;
  // Rotating-frame diagonal energies in rad/ps.
  const Eigen::VectorXd& frame_energies() const { return eps_; }

  Matrix reference_rhs(double t, const Matrix& rho) const;
  Matrix reference_adjoint(double t, const Matrix& op) const;

 private:
  struct Entry {
    Eigen::Index row;
    Eigen::Index col;
    Complex value;
  };
  struct JumpMap {
    std::vector<Eigen::Index> target;  // m with a photon to remove
    std::vector<Eigen::Index> source;  // sigma(m): same state plus one photon
    std::vector<double> weight;        // sqrt(n_sigma(m))
  };

  void add_commutator(const std::vector<Entry>& v, const Matrix& x, Matrix& out, double sign) const;
  void collect_entries(double t, std::vector<Entry>& v) const;

  SystemSpec spec_;
  Eigen::Index dim_;
  double exciton_h_meV_;
  double frame_meV_;
  double jump_rate_;
  double drive_off_;
  double drive_on_;
  bool driven_;
  Eigen::VectorXd eps_;
  Eigen::VectorXd decay_;        // anti-Hermitian half-rates per basis state
  Matrix diag_factor_;           // -i (d_m - conj(d_n))
  Matrix diag_factor_adjoint_;   // i (conj(d_m) - d_n)
  std::vector<Entry> static_;    // Hermitian off-diagonal couplings, both triangles
  std::vector<std::pair<Eigen::Index, Eigen::Index>> raising_;  // (upper, lower)
  std::vector<JumpMap> jumps_;
  Matrix a_h_, a_v_;             // dense copies for the reference path
  Matrix raising_dense_, static_dense_;
};

// One-shot evaluation of d(rho)/dt for a spec (builds the space and kernel).
Matrix build_liouvillian(const DensityMatrix& rho, double t, const SystemSpec& spec);

}  // namespace superqd
