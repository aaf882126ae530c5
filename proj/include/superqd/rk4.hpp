#pragma once

#include "superqd/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace superqd {

// Density-like matrix plus a few scalar accumulators integrated alongside it
// (running time integrals of expectation values).
struct OdeState {
  Matrix rho;
  Eigen::VectorXcd aux;
};

struct Tolerances {
  double relative = 1e-10;
  double absolute = 1e-12;
};

// Step-size caps: max_step_window inside [window_begin, window_end],
// max_step_free elsewhere. Steps never straddle a breakpoint.
struct StepPolicy {
  double window_begin = 0.0;
  double window_end = 0.0;
  double max_step_window = 0.05;
  double max_step_free = 1.0;
  double min_step = 1e-11;
  std::vector<double> breakpoints;
};

class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double t) : std::runtime_error(what), time_(t) {}
  double time() const { return time_; }

 private:
  double time_;
};

// Classic fourth-order Runge-Kutta with step doubling. The local error
// estimate is the Frobenius norm of (two half steps - one full step); on
// acceptance the Richardson-extrapolated value is kept.
class AdaptiveRk4 {
 public:
  using Rhs = std::function<void(double, const OdeState&, OdeState&)>;

  AdaptiveRk4(Rhs rhs, Tolerances tol, StepPolicy policy)
      : rhs_(std::move(rhs)), tol_(tol), policy_(std::move(policy)) {
    std::sort(policy_.breakpoints.begin(), policy_.breakpoints.end());
  }

  // Advances y from t to exactly t_target.
  void advance(double& t, OdeState& y, double t_target) {
    ensure_buffers(y);
    while (t < t_target) {
      double h = std::min(next_step_, max_step_at(t));
      const double limit = next_limit(t, t_target);
      const double snap = 1e-12 * std::max(1.0, std::abs(limit));
      if (limit - t <= snap) {
        t = limit;
        continue;
      }
      bool clipped = false;
      // Never leave a sliver shorter than min_step before the limit.
      if (t + h >= limit - policy_.min_step) {
        h = limit - t;
        clipped = true;
      }
      if (h < policy_.min_step) {
        throw IntegrationError("step size underflow at t = " + std::to_string(t) + " ps", t);
      }

      // Full step and two half steps share the first stage.
      rhs_(t, y, k1_);
      ++evals_;
      stage(t, y, k1_, h, full_);
      stage(t, y, k1_, 0.5 * h, half_);
      rhs_(t + 0.5 * h, half_, k1b_);
      ++evals_;
      stage(t + 0.5 * h, half_, k1b_, 0.5 * h, half2_);

      const double err = (half2_.rho - full_.rho).norm();
      const double scale = std::max(y.rho.norm(), half2_.rho.norm());
      const double tol = tol_.absolute + tol_.relative * scale;
      if (err <= tol) {
        y.rho = half2_.rho + (half2_.rho - full_.rho) / 15.0;
        if (y.aux.size() > 0) y.aux = half2_.aux + (half2_.aux - full_.aux) / 15.0;
        t = clipped ? limit : t + h;
        ++accepted_;
        const double grow = err == 0.0 ? 4.0 : std::clamp(0.9 * std::pow(tol / err, 0.2), 0.2, 4.0);
        // A step shortened only to hit a node says nothing about the error.
        if (!clipped || grow < 1.0) next_step_ = std::max(next_step_ * std::min(grow, 1.0), h * grow);
      } else {
        ++rejected_;
        next_step_ = h * std::clamp(0.9 * std::pow(tol / err, 0.25), 0.1, 0.9);
      }
    }
  }

  std::size_t accepted() const { return accepted_; }
  std::size_t rejected() const { return rejected_; }
  std::size_t rhs_evaluations() const { return evals_; }
  double proposed_step() const { return next_step_; }
  void set_proposed_step(double h) { next_step_ = h; }

 private:
  double max_step_at(double t) const {
    const bool in_window = t >= policy_.window_begin && t < policy_.window_end;
    return in_window ? policy_.max_step_window : policy_.max_step_free;
  }

  double next_limit(double t, double t_target) const {
    double limit = t_target;
    auto consider = [&](double b) {
      if (b > t && b < limit) limit = b;
    };
    consider(policy_.window_begin);
    consider(policy_.window_end);
    auto it = std::upper_bound(policy_.breakpoints.begin(), policy_.breakpoints.end(), t);
    if (it != policy_.breakpoints.end()) consider(*it);
    return limit;
  }

  void ensure_buffers(const OdeState& y) {
    for (OdeState* s : {&k1_, &k1b_, &k2_, &k3_, &k4_, &tmp_, &full_, &half_, &half2_}) {
      if (s->rho.rows() != y.rho.rows() || s->rho.cols() != y.rho.cols()) {
        s->rho.resize(y.rho.rows(), y.rho.cols());
      }
      if (s->aux.size() != y.aux.size()) s->aux.resize(y.aux.size());
    }
  }

  // One classic RK4 step from (t, y) with precomputed k1 = f(t, y).
  void stage(double t, const OdeState& y, const OdeState& k1, double h, OdeState& out) {
    const bool aux = y.aux.size() > 0;
    tmp_.rho = y.rho + (0.5 * h) * k1.rho;
    if (aux) tmp_.aux = y.aux + (0.5 * h) * k1.aux;
    rhs_(t + 0.5 * h, tmp_, k2_);
    tmp_.rho = y.rho + (0.5 * h) * k2_.rho;
    if (aux) tmp_.aux = y.aux + (0.5 * h) * k2_.aux;
    rhs_(t + 0.5 * h, tmp_, k3_);
    tmp_.rho = y.rho + h * k3_.rho;
    if (aux) tmp_.aux = y.aux + h * k3_.aux;
    rhs_(t + h, tmp_, k4_);
    evals_ += 3;
    out.rho = y.rho + (h / 6.0) * (k1.rho + 2.0 * k2_.rho + 2.0 * k3_.rho + k4_.rho);
    if (aux) out.aux = y.aux + (h / 6.0) * (k1.aux + 2.0 * k2_.aux + 2.0 * k3_.aux + k4_.aux);
  }

  Rhs rhs_;
  Tolerances tol_;
  StepPolicy policy_;
  double next_step_ = 1e-3;
  std::size_t accepted_ = 0;
  std::size_t rejected_ = 0;
  std::size_t evals_ = 0;
  OdeState k1_, k1b_, k2_, k3_, k4_, tmp_, full_, half_, half2_;
};

}  // namespace superqd
