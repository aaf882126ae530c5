#include "superqd/dynamics.hpp"

#include "superqd/propagator.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

namespace superqd {

std::pair<double, double> excitation_window(const SystemSpec& spec) {
  if (const auto* p = std::get_if<PulsePair>(&spec.drive); p && has_field(spec.drive)) {
    auto w = pulse_window(*p);
    w.first = std::max(w.first, 0.0);
    return w;
  }
  if (const auto* s = std::get_if<SquarePulse>(&spec.drive); s && has_field(spec.drive)) {
    return {std::max(s->t_on_ps, 0.0), s->t_off_ps};
  }
  return {0.0, 0.0};
}

StepPolicy step_policy(const SystemSpec& spec, const EvolveOptions& opt) {
  StepPolicy p;
  const auto w = excitation_window(spec);
  p.window_begin = w.first;
  p.window_end = w.second;
  p.max_step_window = opt.max_step_window_ps;
  p.max_step_free = opt.max_step_free_ps;
  if (has_field(spec.drive)) {
    p.breakpoints = {drive_on_time(spec.drive), drive_off_time(spec.drive)};
  }
  return p;
}

PopulationRecord measure(const CompositeSpace& space, const DensityMatrix& rho) {
  PopulationRecord r;
  const auto d = space.dimension();
  const int n = space.n_max();
  for (Eigen::Index i = 0; i < d; ++i) {
    const auto b = space.label(i);
    const double p = rho(i, i).real();
    r.level[static_cast<std::size_t>(b.level)] += p;
    r.photons[0] += b.n_h * p;
    r.photons[1] += b.n_v * p;
    r.trace += p;
    // <a> = tr(a rho) = sum sqrt(n) rho(n, n-1)
    if (b.n_h > 0) {
      r.field[0] += std::sqrt(static_cast<double>(b.n_h)) * rho(i, space.index(b.level, b.n_h - 1, b.n_v));
    }
    if (b.n_v > 0) {
      r.field[1] += std::sqrt(static_cast<double>(b.n_v)) * rho(i, space.index(b.level, b.n_h, b.n_v - 1));
    }
  }
  (void)n;
  r.ground_vacuum = rho(space.index(Level::G, 0, 0), space.index(Level::G, 0, 0)).real();
  return r;
}

Trajectory evolve(const SystemSpec& spec, const EvolveOptions& opt) {
  spec.validate();
  if (!(opt.grid_spacing_ps > 0.0)) throw std::invalid_argument("evolve: grid spacing must be > 0");
  const double h = opt.grid_spacing_ps;
  const double ratio = opt.coarse_spacing_ps / h;
  const long coarse_steps = std::lround(ratio);
  if (coarse_steps < 1 || std::abs(ratio - static_cast<double>(coarse_steps)) > 1e-9) {
    throw std::invalid_argument("evolve: coarse spacing must be a positive multiple of the grid spacing");
  }
  const auto space = build_space(spec);
  const Liouvillian lv(spec, space);
  const auto d = space.dimension();

  // Diagonal photon-number weights for the running emission integrals.
  Eigen::VectorXd nh(d), nv(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const auto b = space.label(i);
    nh(i) = b.n_h;
    nv(i) = b.n_v;
  }

  AdaptiveRk4 rk(
      [&](double t, const OdeState& y, OdeState& dy) {
        lv.apply(t, y.rho, dy.rho);
        dy.aux.resize(2);
        dy.aux(0) = (y.rho.diagonal().real().cwiseProduct(nh)).sum();
        dy.aux(1) = (y.rho.diagonal().real().cwiseProduct(nv)).sum();
      },
      opt.tolerances, step_policy(spec, opt));

  Trajectory tr;
  tr.spec = spec;
  tr.grid_spacing_ps = h;
  tr.coarse_spacing_ps = opt.coarse_spacing_ps;
  tr.pulse_window = excitation_window(spec);
  tr.drive_off_ps = lv.driven() ? lv.drive_off_time() : 0.0;
  tr.auto_stop = !opt.t_end_ps.has_value();

  const double t_limit = opt.t_end_ps ? *opt.t_end_ps : opt.max_time_ps;
  const long last_node = static_cast<long>(std::ceil(t_limit / h - 1e-9));
  // Auto stop and coarsening are only considered once the field has vanished.
  const double settle = std::max(tr.pulse_window.second, tr.drive_off_ps);

  std::unique_ptr<FreePropagator> free_prop;
  std::unique_ptr<FreeStep> fine_step, coarse_step;

  OdeState y{initial_state(space, spec.initial), Eigen::VectorXcd::Zero(2)};
  double t = 0.0;
  long node = 0;
  bool have_off_index = false;
  bool coarse = false;
  tr.coarse_index = std::numeric_limits<std::size_t>::max();
  for (;;) {
    const double tk = static_cast<double>(node) * h;
    tr.lattice.push_back(node);
    tr.times.push_back(tk);
    tr.records.push_back(measure(space, y.rho));
    tr.photon_integral.push_back({y.aux(0).real(), y.aux(1).real()});
    if (opt.store_snapshots) tr.snapshots.push_back(y.rho);
    const auto k = tr.times.size() - 1;
    if (!have_off_index && tk >= tr.drive_off_ps) {
      tr.drive_off_index = k;
      have_off_index = true;
    }
    const auto& rec = tr.records.back();
    if (tr.auto_stop && tk >= settle && have_off_index && rec.ground_vacuum >= 1.0 - opt.decay_threshold) {
      tr.decayed = true;
      break;
    }
    if (node >= last_node) {
      tr.cap_hit = tr.auto_stop;
      break;
    }
    if (!coarse && coarse_steps > 1 && have_off_index && tk >= settle &&
        rec.photons[0] + rec.photons[1] + rec.level[1] + rec.level[2] < opt.coarsen_threshold) {
      coarse = true;
      tr.coarse_index = k;
    }
    const long stride = coarse && node + coarse_steps <= last_node ? coarse_steps : 1;
    const double t_next = static_cast<double>(node + stride) * h;

    if (opt.exact_free_evolution && have_off_index) {
      if (!free_prop) free_prop = std::make_unique<FreePropagator>(lv, space, tk);
      if (!fine_step) fine_step = std::make_unique<FreeStep>(*free_prop, h);
      if (stride > 1 && !coarse_step) coarse_step = std::make_unique<FreeStep>(*fine_step, static_cast<int>(stride));
      const FreeStep* step = stride == 1 ? fine_step.get() : coarse_step.get();
      const auto occ = step->occupation_integral(y.rho);
      step->apply(y.rho);
      y.aux(0) += occ[0];
      y.aux(1) += occ[1];
      t = t_next;
    } else {
      rk.advance(t, y, t_next);
    }
    node += stride;
  }
  if (!have_off_index) tr.drive_off_index = tr.times.size() - 1;
  if (opt.complete_tail && have_off_index && spec.jump_rate() > 0.0) {
    if (!free_prop) free_prop = std::make_unique<FreePropagator>(lv, space, tr.times.back());
    const Eigen::MatrixXcd w = free_prop->occupation_tail_weights();
    const Eigen::VectorXcd v = free_prop->gather(y.rho, 0);
    tr.photon_tail = std::array<double, 2>{(w.col(0).transpose() * v)(0).real(), (w.col(1).transpose() * v)(0).real()};
  }
  if (tr.coarse_index == std::numeric_limits<std::size_t>::max()) tr.coarse_index = tr.times.size();
  tr.rhs_evaluations = rk.rhs_evaluations();
  return tr;
}

}  // namespace superqd
