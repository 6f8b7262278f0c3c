// Microbenchmarks for the hot kernels: curvature assembly, flow and heat
// steps, and the pointwise quadratic supremum.

#include <benchmark/benchmark.h>

#include "torusflow/harnack.hpp"
#include "torusflow/setups.hpp"

using namespace torusflow;

namespace {

FlowSpec ricci_spec(double T, double dt) {
  FlowSpec s;
  s.variant = FlowVariant::Ricci;
  s.horizon = T;
  s.dt = dt;
  return s;
}

MetricState conformal_state(int N) {
  PeriodicGrid g = PeriodicGrid::square(N);
  return MetricState{0.0, make_initial_metric(g, MetricSelector::Conformal, 0.3), std::nullopt, {}};
}

void BM_Curvature(benchmark::State& state) {
  const int N = int(state.range(0));
  SymTensorField g = make_initial_metric(PeriodicGrid::square(N), MetricSelector::Conformal, 0.3);
  for (auto _ : state) {
    MetricAlgebra alg(g);
    benchmark::DoNotOptimize(alg.curvature().scalar[0]);
  }
  state.SetComplexityN(N * N);
}
BENCHMARK(BM_Curvature)->Arg(32)->Arg(64)->Arg(128)->Complexity();

void BM_Laplacian(benchmark::State& state) {
  const int N = int(state.range(0));
  PeriodicGrid grid = PeriodicGrid::square(N);
  MetricAlgebra alg(make_initial_metric(grid, MetricSelector::Conformal, 0.3));
  ScalarField s = make_wave_field(grid, 1.0);
  for (auto _ : state) {
    ScalarField lap = alg.laplacian(s);
    benchmark::DoNotOptimize(lap[0]);
  }
  state.SetComplexityN(N * N);
}
BENCHMARK(BM_Laplacian)->Arg(32)->Arg(64)->Arg(128)->Complexity();

void BM_FlowStep(benchmark::State& state) {
  const int N = int(state.range(0));
  MetricState st = conformal_state(N);
  const double dt = 0.05 * (1.0 / (N * N));
  FlowSpec spec = ricci_spec(dt, dt);
  for (auto _ : state) {
    MetricState next = step_flow(st, spec);
    benchmark::DoNotOptimize(next.t);
  }
}
BENCHMARK(BM_FlowStep)->Arg(32)->Arg(64);

void BM_HeatSolve(benchmark::State& state) {
  const int N = int(state.range(0));
  const double dt = 0.05 * (1.0 / (N * N));
  const int steps = 32;
  FlowTrajectory traj = run_flow(conformal_state(N), ricci_spec(steps * dt, dt));
  HeatParams hp;
  hp.gamma = GammaFn::constant(1.0);
  hp.a = 2.0;
  hp.profile = TerminalProfile::fourier(0.1);
  for (auto _ : state) {
    HeatSolution sol = solve_backward_heat(traj, hp);
    benchmark::DoNotOptimize(sol.max_f());
  }
}
BENCHMARK(BM_HeatSolve)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_SupE(benchmark::State& state) {
  const int N = int(state.range(0));
  const double dt = 0.05 * (1.0 / (N * N));
  FlowTrajectory traj = run_flow(conformal_state(N), ricci_spec(8 * dt, dt));
  for (auto _ : state) {
    SupEField sup = sup_E_over_X(traj, 4, 1.0, {1e-9, 1e-6});
    benchmark::DoNotOptimize(sup.value[0]);
  }
}
BENCHMARK(BM_SupE)->Arg(32)->Arg(64);

} // namespace

BENCHMARK_MAIN();
