#include "superqd/liouvillian.hpp"

#include "superqd/units.hpp"

namespace superqd {

namespace {

constexpr Complex kI{0.0, 1.0};

}  // namespace

Liouvillian::Liouvillian(const SystemSpec& spec, const CompositeSpace& space)
    : spec_(spec),
      dim_(space.dimension()),
      exciton_h_meV_(spec.levels.e_exciton_h()),
      frame_meV_(spec.frame_meV()),
      jump_rate_(spec.jump_rate()),
      drive_off_(superqd::drive_off_time(spec.drive)),
      drive_on_(superqd::drive_on_time(spec.drive)),
      driven_(has_field(spec.drive)) {
  spec.validate();
  const OperatorSet ops(space);
  a_h_ = ops.annihilation(Mode::H);
  a_v_ = ops.annihilation(Mode::V);

  const double cav_h = spec.cavity.energy_h_meV - frame_meV_;
  const double cav_v = spec.cavity.energy_v_meV - frame_meV_;
  eps_.resize(dim_);
  decay_.resize(dim_);
  for (Eigen::Index i = 0; i < dim_; ++i) {
    const auto b = space.label(i);
    const double e_level = spec.levels.energy(b.level) - excitation_count(b.level) * frame_meV_;
    eps_(i) = meV_to_rad_per_ps(e_level + cav_h * b.n_h + cav_v * b.n_v);
    decay_(i) = 0.5 * jump_rate_ * (b.n_h + b.n_v);
  }
  diag_factor_.resize(dim_, dim_);
  diag_factor_adjoint_.resize(dim_, dim_);
  for (Eigen::Index n = 0; n < dim_; ++n) {
    for (Eigen::Index m = 0; m < dim_; ++m) {
      const Complex dm{eps_(m), -decay_(m)};
      const Complex dn{eps_(n), -decay_(n)};
      diag_factor_(m, n) = -kI * (dm - std::conj(dn));
      diag_factor_adjoint_(m, n) = kI * (std::conj(dm) - dn);
    }
  }

  // QD-cavity coupling g (a_i |X_i><G| + a_i |B><X_i|) + h.c.
  const double g = spec.cavity.g_rad_per_ps();
  static_dense_ = Matrix::Zero(dim_, dim_);
  if (g != 0.0) {
    auto couple = [&](Level upper, Level lower, Mode m) {
      if (!space.has_level(upper) || !space.has_level(lower)) return;
      static_dense_ += g * ops.dyad(upper, lower) * ops.annihilation(m);
    };
    couple(Level::XH, Level::G, Mode::H);
    couple(Level::XV, Level::G, Mode::V);
    couple(Level::B, Level::XH, Mode::H);
    couple(Level::B, Level::XV, Mode::V);
    static_dense_ += static_dense_.adjoint().eval();
  }
  for (Eigen::Index c = 0; c < dim_; ++c) {
    for (Eigen::Index r = 0; r < dim_; ++r) {
      if (static_dense_(r, c) != Complex{0.0, 0.0}) static_.push_back({r, c, static_dense_(r, c)});
    }
  }

  // H-polarised drive couples G <-> X_H and X_H <-> B.
  raising_dense_ = ops.dyad(Level::XH, Level::G);
  if (space.has_level(Level::B)) raising_dense_ += ops.dyad(Level::B, Level::XH);
  for (Eigen::Index c = 0; c < dim_; ++c) {
    for (Eigen::Index r = 0; r < dim_; ++r) {
      if (raising_dense_(r, c) != Complex{0.0, 0.0}) raising_.emplace_back(r, c);
    }
  }

  for (const Matrix* a : {&a_h_, &a_v_}) {
    JumpMap j;
    for (Eigen::Index col = 0; col < dim_; ++col) {
      for (Eigen::Index row = 0; row < dim_; ++row) {
        const double w = (*a)(row, col).real();
        if (w != 0.0) {
          j.target.push_back(row);
          j.source.push_back(col);
          j.weight.push_back(w);
        }
      }
    }
    jumps_.push_back(std::move(j));
  }
}

Complex Liouvillian::drive(double t) const {
  if (!driven_ || t >= drive_off_ || t < drive_on_) return {0.0, 0.0};
  if (const auto* p = std::get_if<PulsePair>(&spec_.drive)) {
    return drive_amplitude_rotating(t, *p, exciton_h_meV_, frame_meV_);
  }
  if (const auto* s = std::get_if<SquarePulse>(&spec_.drive)) {
    return drive_amplitude_rotating(t, *s, exciton_h_meV_, frame_meV_);
  }
  return {0.0, 0.0};
}

void Liouvillian::collect_entries(double t, std::vector<Entry>& v) const {
  v.clear();
  v.insert(v.end(), static_.begin(), static_.end());
  const Complex omega = drive(t);
  if (omega == Complex{0.0, 0.0}) return;
  for (const auto& [up, low] : raising_) {
    v.push_back({up, low, -0.5 * omega});
    v.push_back({low, up, -0.5 * std::conj(omega)});
  }
}

// out += sign * (-i) [V, x]
void Liouvillian::add_commutator(const std::vector<Entry>& v, const Matrix& x, Matrix& out,
                                 double sign) const {
  const Complex f = -sign * kI;
  thread_local std::vector<Complex> scaled;
  scaled.resize(v.size());
  for (std::size_t q = 0; q < v.size(); ++q) scaled[q] = f * v[q].value;
  // V x, one column at a time so the column of x stays in cache.
  const Eigen::Index n = x.cols();
  for (Eigen::Index col = 0; col < n; ++col) {
    const Complex* xc = x.col(col).data();
    Complex* oc = out.col(col).data();
    for (std::size_t q = 0; q < v.size(); ++q) oc[v[q].row] += scaled[q] * xc[v[q].col];
  }
  // - x V
  for (std::size_t q = 0; q < v.size(); ++q) out.col(v[q].col) -= scaled[q] * x.col(v[q].row);
}

void Liouvillian::apply(double t, const Matrix& rho, Matrix& out) const {
  out = diag_factor_.cwiseProduct(rho);
  thread_local std::vector<Entry> entries;
  collect_entries(t, entries);
  add_commutator(entries, rho, out, 1.0);
  if (jump_rate_ == 0.0) return;
  for (const auto& j : jumps_) {
    const auto n = j.target.size();
    for (std::size_t q = 0; q < n; ++q) {
      const double wq = jump_rate_ * j.weight[q];
      const auto tq = j.target[q];
      const auto sq = j.source[q];
      for (std::size_t p = 0; p < n; ++p) {
        out(j.target[p], tq) += wq * j.weight[p] * rho(j.source[p], sq);
      }
    }
  }
}

void Liouvillian::apply_adjoint(double t, const Matrix& op, Matrix& out) const {
  out = diag_factor_adjoint_.cwiseProduct(op);
  thread_local std::vector<Entry> entries;
  collect_entries(t, entries);
  add_commutator(entries, op, out, -1.0);
  if (jump_rate_ == 0.0) return;
  for (const auto& j : jumps_) {
    const auto n = j.target.size();
    for (std::size_t q = 0; q < n; ++q) {
      const double wq = jump_rate_ * j.weight[q];
      const auto tq = j.target[q];
      const auto sq = j.source[q];
      for (std::size_t p = 0; p < n; ++p) {
        out(j.source[p], sq) += wq * j.weight[p] * op(j.target[p], tq);
      }
    }
  }
}

Matrix Liouvillian::hamiltonian(double t) const {
  Matrix h = static_dense_;
  h.diagonal() += eps_.cast<Complex>();
  const Complex omega = drive(t);
  h += -0.5 * omega * raising_dense_ - 0.5 * std::conj(omega) * raising_dense_.adjoint();
  return h;
}

Matrix Liouvillian::reference_rhs(double t, const Matrix& rho) const {
  const Matrix h = hamiltonian(t);
  Matrix out = -kI * (h * rho - rho * h);
  for (const Matrix* a : {&a_h_, &a_v_}) {
    const Matrix ad = a->adjoint();
    const Matrix n = ad * (*a);
    out += jump_rate_ * ((*a) * rho * ad - 0.5 * (n * rho + rho * n));
  }
  return out;
}

Matrix Liouvillian::reference_adjoint(double t, const Matrix& op) const {
  const Matrix h = hamiltonian(t);
  Matrix out = kI * (h * op - op * h);
  for (const Matrix* a : {&a_h_, &a_v_}) {
    const Matrix ad = a->adjoint();
    const Matrix n = ad * (*a);
    out += jump_rate_ * (ad * op * (*a) - 0.5 * (n * op + op * n));
  }
  return out;
}

Matrix build_liouvillian(const DensityMatrix& rho, double t, const SystemSpec& spec) {
  const auto space = build_space(spec);
  const Liouvillian l(spec, space);
  Matrix out;
  l.apply(t, rho, out);
  return out;
}

}  // namespace superqd
