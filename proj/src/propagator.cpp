#include "superqd/propagator.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <Eigen/LU>

#include <stdexcept>
#include <string>

namespace superqd {

FreePropagator::FreePropagator(const Liouvillian& lv, const CompositeSpace& space, double t_free)
    : dim_(space.dimension()), lv_(&lv), t_free_(t_free) {
  if (lv.driven() && t_free < lv.drive_off_time() && t_free >= lv.drive_on_time()) {
    throw std::invalid_argument("FreePropagator: drive is still on at t = " + std::to_string(t_free));
  }
  excitation_.resize(static_cast<std::size_t>(dim_));
  photons_[0].resize(dim_);
  photons_[1].resize(dim_);
  int n_top = 0;
  for (Eigen::Index i = 0; i < dim_; ++i) {
    excitation_[static_cast<std::size_t>(i)] = space.excitation_number(i);
    n_top = std::max(n_top, space.excitation_number(i));
    const auto b = space.label(i);
    photons_[0](i) = b.n_h;
    photons_[1](i) = b.n_v;
  }
  min_k_ = -n_top;
  max_k_ = n_top;
}

int FreePropagator::block_of(Eigen::Index row, Eigen::Index col) const {
  return excitation_[static_cast<std::size_t>(row)] - excitation_[static_cast<std::size_t>(col)];
}

void FreePropagator::ensure(int k) const {
  if (k < min_k_ || k > max_k_) throw std::out_of_range("FreePropagator: no block k = " + std::to_string(k));
  std::lock_guard<std::mutex> lock(mutex_);
  if (blocks_.count(k)) return;
  auto b = std::make_unique<Block>();
  b->k = k;
  for (Eigen::Index c = 0; c < dim_; ++c) {
    for (Eigen::Index r = 0; r < dim_; ++r) {
      if (block_of(r, c) == k) b->elements.emplace_back(r, c);
    }
  }
  const auto n = static_cast<Eigen::Index>(b->elements.size());
  b->generator = Matrix::Zero(n, n);
  Matrix unit = Matrix::Zero(dim_, dim_);
  Matrix out;
  for (Eigen::Index q = 0; q < n; ++q) {
    const auto [r, c] = b->elements[static_cast<std::size_t>(q)];
    unit(r, c) = 1.0;
    lv_->apply(t_free_, unit, out);
    unit(r, c) = 0.0;
    for (Eigen::Index p = 0; p < n; ++p) {
      const auto [pr, pc] = b->elements[static_cast<std::size_t>(p)];
      b->generator(p, q) = out(pr, pc);
    }
  }
  blocks_.emplace(k, std::move(b));
}

const FreePropagator::Block& FreePropagator::block(int k) const {
  ensure(k);
  std::lock_guard<std::mutex> lock(mutex_);
  return *blocks_.at(k);
}

Eigen::VectorXcd FreePropagator::gather(const Matrix& x, int k) const {
  const auto& b = block(k);
  Eigen::VectorXcd v(static_cast<Eigen::Index>(b.elements.size()));
  for (std::size_t p = 0; p < b.elements.size(); ++p) {
    v(static_cast<Eigen::Index>(p)) = x(b.elements[p].first, b.elements[p].second);
  }
  return v;
}

void FreePropagator::scatter(const Eigen::VectorXcd& v, int k, Matrix& x) const {
  const auto& b = block(k);
  for (std::size_t p = 0; p < b.elements.size(); ++p) {
    x(b.elements[p].first, b.elements[p].second) = v(static_cast<Eigen::Index>(p));
  }
}

Eigen::VectorXcd FreePropagator::pairing(const Matrix& op, int k) const {
  const auto& b = block(k);
  Eigen::VectorXcd c(static_cast<Eigen::Index>(b.elements.size()));
  for (std::size_t p = 0; p < b.elements.size(); ++p) {
    c(static_cast<Eigen::Index>(p)) = op(b.elements[p].second, b.elements[p].first);
  }
  return c;
}

Matrix FreePropagator::block_exponential(int k, double h) const {
  const auto& b = block(k);
  return (b.generator * h).exp();
}

Eigen::MatrixXcd FreePropagator::occupation_integral_weights(double h) const {
  const auto& b = block(0);
  const auto n = static_cast<Eigen::Index>(b.elements.size());
  // exp([[L^T h, N h], [0, 0]]) carries int_0^h e^{L^T s} ds N in its top-right block.
  Matrix aug = Matrix::Zero(n + 2, n + 2);
  aug.topLeftCorner(n, n) = b.generator.transpose() * h;
  for (std::size_t p = 0; p < b.elements.size(); ++p) {
    const auto [r, c] = b.elements[p];
    if (r != c) continue;
    aug(static_cast<Eigen::Index>(p), n) = photons_[0](r) * h;
    aug(static_cast<Eigen::Index>(p), n + 1) = photons_[1](r) * h;
  }
  const Matrix e = aug.exp();
  return e.topRightCorner(n, 2);
}

Eigen::MatrixXcd FreePropagator::occupation_tail_weights() const {
  // States reachable from a photon state through the static couplings.
  const Matrix h = lv_->hamiltonian(t_free_);
  std::vector<char> bright(static_cast<std::size_t>(dim_), 0);
  std::vector<Eigen::Index> queue;
  for (Eigen::Index i = 0; i < dim_; ++i) {
    if (photons_[0](i) + photons_[1](i) > 0.0) {
      bright[static_cast<std::size_t>(i)] = 1;
      queue.push_back(i);
    }
  }
  while (!queue.empty()) {
    const auto i = queue.back();
    queue.pop_back();
    for (Eigen::Index j = 0; j < dim_; ++j) {
      if (j != i && h(j, i) != Complex{0.0, 0.0} && !bright[static_cast<std::size_t>(j)]) {
        bright[static_cast<std::size_t>(j)] = 1;
        queue.push_back(j);
      }
    }
  }

  const auto& b = block(0);
  std::vector<Eigen::Index> keep;
  for (std::size_t p = 0; p < b.elements.size(); ++p) {
    const auto [r, c] = b.elements[p];
    if (bright[static_cast<std::size_t>(r)] || bright[static_cast<std::size_t>(c)]) keep.push_back(static_cast<Eigen::Index>(p));
  }
  const auto n = static_cast<Eigen::Index>(keep.size());
  Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(b.elements.size()), 2);
  if (n == 0) return w;

  // int_0^inf e^{L^T s} n ds = -(L^T)^{-1} n on the decaying subspace.
  Matrix lt(n, n);
  Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(n, 2);
  for (Eigen::Index q = 0; q < n; ++q) {
    for (Eigen::Index p = 0; p < n; ++p) lt(q, p) = b.generator(keep[static_cast<std::size_t>(p)], keep[static_cast<std::size_t>(q)]);
    const auto [r, c] = b.elements[static_cast<std::size_t>(keep[static_cast<std::size_t>(q)])];
    if (r == c) {
      rhs(q, 0) = -photons_[0](r);
      rhs(q, 1) = -photons_[1](r);
    }
  }
  const Eigen::FullPivLU<Matrix> lu(lt);
  if (!lu.isInvertible()) throw std::runtime_error("FreePropagator: undamped mode coupled to the cavity");
  const Eigen::MatrixXcd sol = lu.solve(rhs);
  for (Eigen::Index q = 0; q < n; ++q) w.row(keep[static_cast<std::size_t>(q)]) = sol.row(q);
  return w;
}

FreeStep::FreeStep(const FreePropagator& prop, double h) : prop_(&prop), h_(h) {
  if (!(h > 0.0)) throw std::invalid_argument("FreeStep: step must be > 0");
  for (int k = prop.min_k(); k <= prop.max_k(); ++k) exps_.push_back(prop.block_exponential(k, h));
  weights_ = prop.occupation_integral_weights(h);
}

FreeStep::FreeStep(const FreeStep& base, int repeat) : prop_(base.prop_), h_(base.h_ * repeat) {
  if (repeat < 1) throw std::invalid_argument("FreeStep: repeat must be >= 1");
  const int k0 = -prop_->min_k();
  // Occupation integral over the fused step: sum_j (E^j)^T w.
  const Matrix& e0 = base.exps_[static_cast<std::size_t>(k0)];
  Eigen::MatrixXcd w = base.weights_;
  weights_ = Eigen::MatrixXcd::Zero(w.rows(), w.cols());
  for (int j = 0; j < repeat; ++j) {
    weights_ += w;
    w = e0.transpose() * w;
  }
  for (const auto& e : base.exps_) {
    Matrix p = e;
    for (int j = 1; j < repeat; ++j) p = e * p;
    exps_.push_back(std::move(p));
  }
}

void FreeStep::apply(Matrix& rho) const {
  for (int k = prop_->min_k(); k <= prop_->max_k(); ++k) {
    const Eigen::VectorXcd v = exps_[static_cast<std::size_t>(k - prop_->min_k())] * prop_->gather(rho, k);
    prop_->scatter(v, k, rho);
  }
}

std::array<double, 2> FreeStep::occupation_integral(const Matrix& rho) const {
  const Eigen::VectorXcd v = prop_->gather(rho, 0);
  return {(weights_.col(0).transpose() * v)(0).real(), (weights_.col(1).transpose() * v)(0).real()};
}

}  // namespace superqd
