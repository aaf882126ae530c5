#pragma once

#include "superqd/dynamics.hpp"
#include "superqd/hilbert.hpp"
#include "superqd/rk4.hpp"

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace superqd {

// Samples of a two-time function on the triangle spanned by a trajectory's
// nodes: row i holds tau_j = t_{i+j} - t_i for j = 0 .. size()-1-i.
class TwoTimeGrid {
 public:
  TwoTimeGrid() = default;
  TwoTimeGrid(std::string name, std::vector<double> t_nodes);

  const std::string& name() const { return name_; }
  void rename(std::string name) { name_ = std::move(name); }
  std::size_t size() const { return t_.size(); }
  bool empty() const { return t_.empty(); }
  const std::vector<double>& t_nodes() const { return t_; }
  double t(std::size_t i) const { return t_[i]; }
  double tau(std::size_t i, std::size_t j) const { return t_[i + j] - t_[i]; }
  std::size_t row_size(std::size_t i) const { return t_.size() - i; }

  Complex& at(std::size_t i, std::size_t j) { return values_[offset_[i] + j]; }
  Complex at(std::size_t i, std::size_t j) const { return values_[offset_[i] + j]; }
  std::span<Complex> row(std::size_t i) { return {values_.data() + offset_[i], row_size(i)}; }
  std::span<const Complex> row(std::size_t i) const { return {values_.data() + offset_[i], row_size(i)}; }

 private:
  std::string name_;
  std::vector<double> t_;
  std::vector<std::size_t> offset_;
  std::vector<Complex> values_;
};

struct QrtOptions {
  // Used for tau-propagation while the field is on.
  Tolerances tolerances{};
  // false: RK4 for every tau step and every anchor, serially. Kept as the
  // reference route for tests and benchmarks.
  bool exact_free_evolution = true;
};

// <A(t) B_b(t+tau) C(t)> for every B_b, from rho_bar = C rho(t) A
// propagated in tau and traced against B_b.
// Throws std::invalid_argument when the trajectory has no snapshots.
std::vector<TwoTimeGrid> qrt_correlators(const Trajectory& traj, const Matrix& a, std::span<const Matrix> bs,
                                         const Matrix& c, const QrtOptions& opt = {});
TwoTimeGrid qrt_correlator(const Trajectory& traj, const Matrix& a, const Matrix& b, const Matrix& c,
                           const QrtOptions& opt = {});

// Iterated trapezoid over the triangle 0 <= t <= t_max, 0 <= tau <= t_max - t.
Complex double_integral(const TwoTimeGrid& grid);

struct ModeCorrelations {
  Mode mode = Mode::H;
  TwoTimeGrid g1;        // <a^dag(t) a(t+tau)>
  TwoTimeGrid g2;        // <a^dag(t) a^dag(t+tau) a(t+tau) a(t)>
  TwoTimeGrid pop;       // <n(t)> <n(t+tau)>
  TwoTimeGrid hom;       // (pop + g2 - |g1|^2) / 2
  TwoTimeGrid coherent;  // |<a(t+tau)> <a^dag(t)>|^2
};

struct GFunctionRequest {
  std::vector<Mode> modes{Mode::H};
  // G2, G_HOM for every mode; off leaves those grids empty.
  bool second_order = true;
  // Double integrals of all sixteen G2_{ijkl}; needed by the two-photon matrix.
  bool pair_integrals = false;
};

struct GFunctions {
  std::vector<ModeCorrelations> modes;
  // Index ((i*2 + j)*2 + k)*2 + l of int int <a_i^dag(t) a_j^dag(t+tau) a_k(t+tau) a_l(t)>.
  std::optional<std::array<Complex, 16>> pair_integrals;

  const ModeCorrelations& mode(Mode m) const;
};

inline constexpr std::size_t pair_index(Mode i, Mode j, Mode k, Mode l) {
  return ((static_cast<std::size_t>(i) * 2 + static_cast<std::size_t>(j)) * 2 + static_cast<std::size_t>(k)) * 2 +
         static_cast<std::size_t>(l);
}

GFunctions g_functions(const Trajectory& traj, const GFunctionRequest& req = {}, const QrtOptions& opt = {});

}  // namespace superqd
