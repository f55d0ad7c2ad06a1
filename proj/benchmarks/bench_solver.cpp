#include <benchmark/benchmark.h>

#include "fastdiff/grid.hpp"
#include "fastdiff/profiles.hpp"
#include "fastdiff/solver_physical.hpp"
#include "fastdiff/solver_rescaled.hpp"

using namespace fastdiff;

namespace {

const ModelParams kRef{.n = 2, .m = 0.75, .p = 2.0};

Field profile_state(int cells) {
  auto g = build_grid(2, 34.0, cells);
  return rho_profile(11.0716, kRef, g);
}

void BM_StepPhysical(benchmark::State& state) {
  const int cells = static_cast<int>(state.range(0));
  auto g = build_grid(2, 120.0, cells, Grading::geometric, 1.002);
  const BarenblattSpec spec = solve_theta(1.0, kRef);
  Field u = u_profile(spec.beta, kRef, 1.0, g);
  StepControl ctrl;
  for (auto _ : state) {
    benchmark::DoNotOptimize(step_physical(u, 0.0, 1e-3, kRef, ctrl));
  }
  state.SetItemsProcessed(state.iterations() * cells);
}
BENCHMARK(BM_StepPhysical)->Arg(512)->Arg(2048)->Arg(8192);

void BM_StepRescaled(benchmark::State& state) {
  const int cells = static_cast<int>(state.range(0));
  Field rho = profile_state(cells);
  StepControl ctrl;
  for (auto _ : state) {
    benchmark::DoNotOptimize(step_rescaled(rho, 1.0, 1e-3, kRef, ctrl));
  }
  state.SetItemsProcessed(state.iterations() * cells);
}
BENCHMARK(BM_StepRescaled)->Arg(512)->Arg(2048)->Arg(8192);

void BM_RunRescaledUnitTime(benchmark::State& state) {
  Field rho = profile_state(2048);
  StepControl ctrl;
  ctrl.dt_init = 1e-3;
  ctrl.dt_max = 0.02;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_rescaled(rho, 1.0, kRef, ctrl, {1.0}));
  }
}
BENCHMARK(BM_RunRescaledUnitTime)->Unit(benchmark::kMillisecond);

}  // namespace
