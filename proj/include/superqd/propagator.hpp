#pragma once

#include "superqd/hilbert.hpp"
#include "superqd/liouvillian.hpp"

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

namespace superqd {

// Exact propagation under the field-free generator.
//
// Without the drive the generator conserves k = N(m) - N(n) for every matrix
// element (m, n), N being the total excitation number, so it splits into
// blocks that are exponentiated independently. Blocks are built on first use.
class FreePropagator {
 public:
  struct Block {
    int k = 0;
    std::vector<std::pair<Eigen::Index, Eigen::Index>> elements;  // (row, col)
    Matrix generator;
  };

  // t_free: any time at which the drive of lv vanishes.
  FreePropagator(const Liouvillian& lv, const CompositeSpace& space, double t_free);

  Eigen::Index dimension() const { return dim_; }
  int min_k() const { return min_k_; }
  int max_k() const { return max_k_; }
  const Block& block(int k) const;
  // Block index of the trace pairing: tr(B X) only sees X elements in block
  // k when B is nonzero in block -k.
  int block_of(Eigen::Index row, Eigen::Index col) const;

  Eigen::VectorXcd gather(const Matrix& x, int k) const;
  void scatter(const Eigen::VectorXcd& v, int k, Matrix& x) const;
  // Coefficients c with tr(B X) = c . gather(X, k) for X restricted to block k.
  Eigen::VectorXcd pairing(const Matrix& b, int k) const;

  // e^{L_k h}.
  Matrix block_exponential(int k, double h) const;
  // Columns w_i with  int_0^h tr(n_i e^{L s} rho) ds = w_i . gather(rho, 0).
  Eigen::MatrixXcd occupation_integral_weights(double h) const;
  // Columns w_i with int_0^inf tr(n_i e^{L s} rho) ds = w_i . gather(rho, 0).
  // Elements whose two states both lack any coupling path to a photon state
  // never produce photons and get weight zero; the rest must decay.
  // Throws std::runtime_error when that remainder has an undamped mode.
  Eigen::MatrixXcd occupation_tail_weights() const;

 private:
  void ensure(int k) const;

  Eigen::Index dim_;
  int min_k_ = 0;
  int max_k_ = 0;
  const Liouvillian* lv_;
  double t_free_;
  std::vector<int> excitation_;
  std::array<Eigen::VectorXd, 2> photons_;
  mutable std::map<int, std::unique_ptr<Block>> blocks_;
  mutable std::mutex mutex_;
};

// One fixed time step of the free propagator for all blocks that are used.
class FreeStep {
 public:
  FreeStep(const FreePropagator& prop, double h);
  // `repeat` consecutive applications of `base` fused into one step.
  FreeStep(const FreeStep& base, int repeat);

  double step() const { return h_; }
  // rho <- e^{L h} rho (all blocks).
  void apply(Matrix& rho) const;
  // int_0^h <n_H>, <n_V> along the step that starts at rho.
  std::array<double, 2> occupation_integral(const Matrix& rho) const;

 private:
  const FreePropagator* prop_;
  double h_;
  std::vector<Matrix> exps_;  // indexed by k - min_k
  Eigen::MatrixXcd weights_;
};

}  // namespace superqd
