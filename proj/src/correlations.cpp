#include "superqd/correlations.hpp"

#include "superqd/liouvillian.hpp"
#include "superqd/propagator.hpp"

#include <omp.h>

#include <exception>
#include <stdexcept>

namespace superqd {

TwoTimeGrid::TwoTimeGrid(std::string name, std::vector<double> t_nodes)
    : name_(std::move(name)), t_(std::move(t_nodes)) {
  offset_.resize(t_.size());
  std::size_t total = 0;
  for (std::size_t i = 0; i < t_.size(); ++i) {
    offset_[i] = total;
    total += t_.size() - i;
  }
  values_.assign(total, Complex{0.0, 0.0});
}

Complex double_integral(const TwoTimeGrid& grid) {
  const auto n = grid.size();
  if (n < 2) return {0.0, 0.0};
  Complex outer{0.0, 0.0};
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const auto row = grid.row(i);
    Complex inner{0.0, 0.0};
    for (std::size_t j = 0; j + 1 < row.size(); ++j) {
      inner += 0.5 * (grid.tau(i, j + 1) - grid.tau(i, j)) * (row[j] + row[j + 1]);
    }
    const double left = i > 0 ? grid.t(i) - grid.t(i - 1) : 0.0;
    const double right = grid.t(i + 1) - grid.t(i);
    outer += 0.5 * (left + right) * inner;
  }
  // The last node has an empty tau range.
  return outer;
}

namespace {

Complex trace_product(const Matrix& b, const Matrix& x) {
  // tr(B X) = sum_{m,n} B(n,m) X(m,n)
  return (b.transpose().array() * x.array()).sum();
}

Eigen::VectorXcd gather(const FreePropagator::Block& blk, const Matrix& x) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(blk.elements.size()));
  for (std::size_t p = 0; p < blk.elements.size(); ++p) {
    v(static_cast<Eigen::Index>(p)) = x(blk.elements[p].first, blk.elements[p].second);
  }
  return v;
}

// Heisenberg-picture coefficient series of one B under the field-free
// generator: tr(B e^{L s} X) = sum_k series[k].col(s / lattice) . X_k.
struct Series {
  std::vector<int> ks;
  std::vector<Eigen::MatrixXcd> columns;
};

StepPolicy qrt_policy(const SystemSpec& spec) {
  return step_policy(spec, EvolveOptions{});
}

}  // namespace

std::vector<TwoTimeGrid> qrt_correlators(const Trajectory& traj, const Matrix& a, std::span<const Matrix> bs,
                                         const Matrix& c, const QrtOptions& opt) {
  const auto n = traj.size();
  if (n == 0) throw std::invalid_argument("qrt_correlators: empty trajectory");
  if (traj.snapshots.size() != n) {
    const auto missing = std::min(traj.snapshots.size(), n - 1);
    throw std::invalid_argument("qrt_correlators: no snapshot for anchor t = " + std::to_string(traj.times[missing]) +
                                " ps");
  }
  const auto space = build_space(traj.spec);
  const Liouvillian lv(traj.spec, space);
  const auto d = space.dimension();
  for (const Matrix* m : {&a, &c}) {
    if (m->rows() != d || m->cols() != d) throw std::invalid_argument("qrt_correlators: operator dimension mismatch");
  }
  for (const auto& b : bs) {
    if (b.rows() != d || b.cols() != d) throw std::invalid_argument("qrt_correlators: operator dimension mismatch");
  }

  std::vector<TwoTimeGrid> out;
  for (std::size_t q = 0; q < bs.size(); ++q) out.emplace_back("qrt", traj.times);
  if (bs.empty()) return out;

  auto propagate = [&](double t_from, Matrix x, std::size_t i, std::size_t j_last, auto&& record) {
    AdaptiveRk4 rk(
        [&](double t, const OdeState& y, OdeState& dy) { lv.apply(t, y.rho, dy.rho); },
        opt.tolerances, qrt_policy(traj.spec));
    OdeState y{std::move(x), Eigen::VectorXcd()};
    double t = t_from;
    for (std::size_t j = i + 1; j <= j_last; ++j) {
      rk.advance(t, y, traj.times[j]);
      record(j, y.rho);
    }
    return std::move(y.rho);
  };

  if (!opt.exact_free_evolution) {
    // Serial reference: every anchor integrated to the end with RK4.
    for (std::size_t i = 0; i < n; ++i) {
      const Matrix x = c * traj.snapshots[i] * a;
      for (std::size_t q = 0; q < bs.size(); ++q) out[q].at(i, 0) = trace_product(bs[q], x);
      propagate(traj.times[i], x, i, n - 1, [&](std::size_t j, const Matrix& y) {
        for (std::size_t q = 0; q < bs.size(); ++q) out[q].at(i, j - i) = trace_product(bs[q], y);
      });
    }
    return out;
  }

  const std::size_t k_free = std::min(traj.drive_off_index, n - 1);
  const FreePropagator prop(lv, space, traj.times[k_free]);
  const long span_lattice = traj.lattice[n - 1] - traj.lattice[k_free];

  std::vector<Series> series(bs.size());
  std::vector<const FreePropagator::Block*> blocks;
  std::vector<Matrix> step_t;  // e^{L_k h}^T per block, built on demand
  for (int k = prop.min_k(); k <= prop.max_k(); ++k) {
    blocks.push_back(&prop.block(k));
    step_t.emplace_back();
  }
  for (std::size_t q = 0; q < bs.size(); ++q) {
    for (int k = prop.min_k(); k <= prop.max_k(); ++k) {
      const auto kk = static_cast<std::size_t>(k - prop.min_k());
      Eigen::VectorXcd coeff = prop.pairing(bs[q], k);
      if (coeff.cwiseAbs().maxCoeff() == 0.0) continue;
      if (step_t[kk].size() == 0) step_t[kk] = prop.block_exponential(k, traj.grid_spacing_ps).transpose();
      Eigen::MatrixXcd cols(coeff.size(), span_lattice + 1);
      cols.col(0) = coeff;
      for (long s = 1; s <= span_lattice; ++s) cols.col(s).noalias() = step_t[kk] * cols.col(s - 1);
      series[q].ks.push_back(k);
      series[q].columns.push_back(std::move(cols));
    }
  }

  // G(i, j) for j >= j_from from the state x at the reference node.
  auto fill_tail = [&](std::size_t i, std::size_t ref, const Matrix& x) {
    std::vector<std::vector<Eigen::VectorXcd>> parts(bs.size());
    for (std::size_t q = 0; q < bs.size(); ++q) {
      for (int k : series[q].ks) parts[q].push_back(gather(*blocks[static_cast<std::size_t>(k - prop.min_k())], x));
    }
    for (std::size_t j = std::max(ref, i); j < n; ++j) {
      const long s = traj.lattice[j] - traj.lattice[ref];
      for (std::size_t q = 0; q < bs.size(); ++q) {
        Complex v{0.0, 0.0};
        for (std::size_t p = 0; p < series[q].ks.size(); ++p) {
          v += (series[q].columns[p].col(s).array() * parts[q][p].array()).sum();
        }
        out[q].at(i, j - i) = v;
      }
    }
  };

  const auto anchors = static_cast<long>(n);
  // Anchors inside the driven span are far more expensive; hand them out first.
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (long ii = 0; ii < anchors; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    try {
      const Matrix x = c * traj.snapshots[i] * a;
      if (i >= k_free) {
        fill_tail(i, i, x);
        continue;
      }
      for (std::size_t q = 0; q < bs.size(); ++q) out[q].at(i, 0) = trace_product(bs[q], x);
      const Matrix x_free = propagate(traj.times[i], x, i, k_free, [&](std::size_t j, const Matrix& y) {
        for (std::size_t q = 0; q < bs.size(); ++q) out[q].at(i, j - i) = trace_product(bs[q], y);
      });
      fill_tail(i, k_free, x_free);
    } catch (...) {
#pragma omp critical(qrt_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

TwoTimeGrid qrt_correlator(const Trajectory& traj, const Matrix& a, const Matrix& b, const Matrix& c,
                           const QrtOptions& opt) {
  const Matrix bs[] = {b};
  return std::move(qrt_correlators(traj, a, bs, c, opt).front());
}

const ModeCorrelations& GFunctions::mode(Mode m) const {
  for (const auto& mc : modes) {
    if (mc.mode == m) return mc;
  }
  throw std::out_of_range(std::string("GFunctions: mode ") + (m == Mode::H ? "H" : "V") + " was not computed");
}

GFunctions g_functions(const Trajectory& traj, const GFunctionRequest& req, const QrtOptions& opt) {
  const auto space = build_space(traj.spec);
  const OperatorSet ops(space);
  const Matrix id = ops.identity();
  const auto n = traj.size();
  const char* tag[] = {"H", "V"};

  GFunctions gf;
  std::array<TwoTimeGrid, 2> g2_diag;
  auto wanted = [&](Mode m) {
    for (auto r : req.modes) {
      if (r == m) return true;
    }
    return false;
  };

  if (req.pair_integrals) {
    std::array<Complex, 16> ints{};
    const Mode both[] = {Mode::H, Mode::V};
    std::vector<Matrix> bs;
    for (Mode j : both) {
      for (Mode k : both) bs.push_back(ops.creation(j) * ops.annihilation(k));
    }
    // (i, l) = (V, H) follows from (H, V): a_H rho a_V^dag is the adjoint of
    // a_V rho a_H^dag, so its correlator with a_j^dag a_k is the conjugate of
    // the one with a_k^dag a_j.
    const std::pair<Mode, Mode> pairs[] = {{Mode::H, Mode::H}, {Mode::V, Mode::V}, {Mode::H, Mode::V}};
    for (const auto& [i, l] : pairs) {
      auto grids = qrt_correlators(traj, ops.creation(i), bs, ops.annihilation(l), opt);
      std::size_t q = 0;
      for (Mode j : both) {
        for (Mode k : both) {
          ints[pair_index(i, j, k, l)] = double_integral(grids[q]);
          if (i != l) ints[pair_index(l, k, j, i)] = std::conj(ints[pair_index(i, j, k, l)]);
          if (i == l && j == l && k == l && wanted(l)) g2_diag[static_cast<std::size_t>(l)] = std::move(grids[q]);
          ++q;
        }
      }
    }
    gf.pair_integrals = ints;
  }

  for (Mode m : req.modes) {
    const auto mi = static_cast<std::size_t>(m);
    ModeCorrelations mc;
    mc.mode = m;
    const Matrix an = ops.annihilation(m);
    const Matrix cr = ops.creation(m);
    mc.g1 = qrt_correlator(traj, cr, an, id, opt);
    mc.g1.rename(std::string("G1,") + tag[mi]);
    if (req.second_order) {
      if (g2_diag[mi].empty()) g2_diag[mi] = qrt_correlator(traj, cr, cr * an, an, opt);
      mc.g2 = std::move(g2_diag[mi]);
      mc.g2.rename(std::string("G2,") + tag[mi]);
      mc.hom = TwoTimeGrid(std::string("G_HOM,") + tag[mi], traj.times);
    }
    mc.pop = TwoTimeGrid(std::string("G_pop,") + tag[mi], traj.times);
    mc.coherent = TwoTimeGrid(std::string("coherent,") + tag[mi], traj.times);
    for (std::size_t i = 0; i < n; ++i) {
      const double n_t = traj.records[i].photons[mi];
      const Complex field_t = traj.records[i].field[mi];
      for (std::size_t j = 0; i + j < n; ++j) {
        const auto& later = traj.records[i + j];
        const double pop = n_t * later.photons[mi];
        mc.pop.at(i, j) = pop;
        mc.coherent.at(i, j) = std::norm(later.field[mi] * std::conj(field_t));
        if (req.second_order) mc.hom.at(i, j) = 0.5 * (pop + mc.g2.at(i, j) - std::norm(mc.g1.at(i, j)));
      }
    }
    gf.modes.push_back(std::move(mc));
  }
  return gf;
}

}  // namespace superqd
