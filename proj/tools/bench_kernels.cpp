// Fast kernels against their serial references.

#include "superqd/correlations.hpp"
#include "superqd/dynamics.hpp"
#include "superqd/liouvillian.hpp"
#include "superqd/scenario.hpp"

#include <benchmark/benchmark.h>

using namespace superqd;

namespace {

SystemSpec set1_spec(int n_max) {
  Scenario s = preset("table1-set1").scenarios.at(0);
  s.n_max = n_max;
  return build_system(s);
}

Matrix mixed_state(Eigen::Index d) {
  Matrix x = Matrix::Random(d, d);
  Matrix rho = x * x.adjoint();
  return rho / rho.trace();
}

void liouvillian_apply(benchmark::State& st) {
  const auto spec = set1_spec(static_cast<int>(st.range(0)));
  const auto space = build_space(spec);
  const Liouvillian l(spec, space);
  const Matrix rho = mixed_state(l.dimension());
  Matrix out(l.dimension(), l.dimension());
  for (auto _ : st) {
    l.apply(10.0, rho, out);
    benchmark::DoNotOptimize(out.data());
  }
}

void liouvillian_reference(benchmark::State& st) {
  const auto spec = set1_spec(static_cast<int>(st.range(0)));
  const auto space = build_space(spec);
  const Liouvillian l(spec, space);
  const Matrix rho = mixed_state(l.dimension());
  for (auto _ : st) {
    Matrix out = l.reference_rhs(10.0, rho);
    benchmark::DoNotOptimize(out.data());
  }
}

const Trajectory& short_trajectory() {
  static const Trajectory tr = [] {
    EvolveOptions eo;
    eo.t_end_ps = 80.0;
    return evolve(set1_spec(1), eo);
  }();
  return tr;
}

void qrt(benchmark::State& st, bool fast) {
  const auto& tr = short_trajectory();
  GFunctionRequest gr;
  gr.second_order = false;
  QrtOptions qo;
  qo.exact_free_evolution = fast;
  for (auto _ : st) {
    auto gf = g_functions(tr, gr, qo);
    benchmark::DoNotOptimize(gf.modes.data());
  }
}

void qrt_fast(benchmark::State& st) { qrt(st, true); }
void qrt_serial(benchmark::State& st) { qrt(st, false); }

}  // namespace

BENCHMARK(liouvillian_apply)->Arg(1)->Arg(2)->Arg(3);
BENCHMARK(liouvillian_reference)->Arg(1)->Arg(2)->Arg(3);
BENCHMARK(qrt_fast)->Unit(benchmark::kMillisecond);
BENCHMARK(qrt_serial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
