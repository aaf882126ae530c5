#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace superqd {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

// Density operators are plain dense matrices on the composite space; the
// helpers below check the physical invariants.
using DensityMatrix = Matrix;

enum class Level { G = 0, XH = 1, XV = 2, B = 3 };

enum class EmitterModel {
  four_level,  // G, X_H, X_V, B
  two_level,   // G, X_H only
};

std::string_view level_name(Level l);
// Number of electron-hole pairs: G -> 0, X -> 1, B -> 2.
int excitation_count(Level l);

// Quantum-dot energies. All values in meV, ground state fixed at 0.
class LevelScheme {
 public:
  LevelScheme() = default;
  LevelScheme(double exciton_meV, double fine_structure_meV, double binding_meV);

  double exciton() const { return e_x_; }
  double fine_structure() const { return e_fsp_; }
  double binding() const { return e_bind_; }

  double e_ground() const { return 0.0; }
  double e_exciton_h() const { return e_x_ - 0.5 * e_fsp_; }
  double e_exciton_v() const { return e_x_ + 0.5 * e_fsp_; }
  double e_biexciton() const { return 2.0 * e_x_ - e_bind_; }
  double energy(Level l) const;

 private:
  double e_x_ = 1366.0;
  double e_fsp_ = 0.002;
  double e_bind_ = 3.0;
};

// Two linearly polarised cavity modes sharing one coupling and loss rate.
struct CavitySpec {
  double energy_h_meV = 0.0;  // hbar * omega_H
  double energy_v_meV = 0.0;  // hbar * omega_V
  double g_ueV = 66.0;
  double kappa_per_ps = 0.0;
  int n_max = 2;

  double g_meV() const;
  double g_rad_per_ps() const;
  // Dimensionless hbar*kappa / g; zero when g == 0.
  double kappa_over_g() const;
  void validate() const;
};

struct BasisLabel {
  Level level = Level::G;
  int n_h = 0;
  int n_v = 0;

  bool operator==(const BasisLabel&) const = default;
};

std::string to_string(const BasisLabel& b);
// Parses "G,0,0", "XH,1,0", "B,0,0" (whitespace tolerant). Throws
// std::invalid_argument on malformed input.
BasisLabel parse_basis_label(std::string_view text);

inline constexpr std::size_t kDefaultDimensionCap = 4096;

// Truncated product space (emitter levels) x (Fock 0..n_max)^2.
// Basis ordering is level-major, then n_H, then n_V.
class CompositeSpace {
 public:
  CompositeSpace(int n_max, EmitterModel model = EmitterModel::four_level,
                 std::size_t dimension_cap = kDefaultDimensionCap);

  int n_max() const { return n_max_; }
  EmitterModel model() const { return model_; }
  const std::vector<Level>& levels() const { return levels_; }
  Eigen::Index dimension() const { return dim_; }
  bool has_level(Level l) const;

  Eigen::Index index(const BasisLabel& b) const;
  Eigen::Index index(Level l, int n_h, int n_v) const { return index(BasisLabel{l, n_h, n_v}); }
  BasisLabel label(Eigen::Index i) const;
  // Total excitation number: electron-hole pairs plus photons.
  int excitation_number(Eigen::Index i) const;

 private:
  int n_max_;
  EmitterModel model_;
  std::vector<Level> levels_;
  Eigen::Index fock_ = 0;  // (n_max+1)^2
  Eigen::Index dim_ = 0;
};

enum class Mode { H = 0, V = 1 };

std::string_view mode_name(Mode m);

// Dense operators on a CompositeSpace. Built once, immutable afterwards.
class OperatorSet {
 public:
  explicit OperatorSet(const CompositeSpace& space);

  const CompositeSpace& space() const { return space_; }
  const Matrix& annihilation(Mode m) const { return m == Mode::H ? a_h_ : a_v_; }
  const Matrix& creation(Mode m) const { return m == Mode::H ? a_h_dag_ : a_v_dag_; }
  const Matrix& number(Mode m) const { return m == Mode::H ? n_h_ : n_v_; }
  const Matrix& identity() const { return id_; }
  // |i><j| on the emitter, identity on the photons.
  Matrix dyad(Level i, Level j) const;
  Matrix projector(Level l) const { return dyad(l, l); }
  // |i,n_H,n_V><j,m_H,m_V|: a single nonzero entry.
  Matrix basis_dyad(const BasisLabel& ket, const BasisLabel& bra) const;

 private:
  CompositeSpace space_;
  Matrix a_h_, a_h_dag_, a_v_, a_v_dag_, n_h_, n_v_, id_;
};

enum class InitialKind { ground, excited_biexciton, custom };

struct InitialState {
  InitialKind kind = InitialKind::ground;
  BasisLabel custom{};
};

// Pure-state projector onto the requested basis state.
DensityMatrix initial_state(const CompositeSpace& space, const InitialState& init);

struct DensityDiagnostics {
  double hermiticity_error = 0.0;  // max |rho - rho^dagger|
  double trace_error = 0.0;        // |tr rho - 1|
  double min_eigenvalue = 0.0;
  double purity = 0.0;             // tr rho^2
};

double hermiticity_error(const Matrix& m);
DensityDiagnostics diagnose(const DensityMatrix& rho, bool with_spectrum = true);

}  // namespace superqd
