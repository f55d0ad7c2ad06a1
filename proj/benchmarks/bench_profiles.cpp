#include <benchmark/benchmark.h>

#include "fastdiff/grid.hpp"
#include "fastdiff/profiles.hpp"

using namespace fastdiff;

namespace {

const ModelParams kRef{.n = 2, .m = 0.75, .p = 2.0};

void BM_MassOfTheta(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(mass_of_theta(11.07, kRef));
  }
}
BENCHMARK(BM_MassOfTheta);

void BM_SolveTheta(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_theta(1.0, kRef));
  }
}
BENCHMARK(BM_SolveTheta)->Unit(benchmark::kMicrosecond);

void BM_SolveThetaOnGrid(benchmark::State& state) {
  auto g = build_grid(2, 34.0, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_theta_on_grid(1.0, kRef, g, 11.07));
  }
}
BENCHMARK(BM_SolveThetaOnGrid)->Arg(2048)->Unit(benchmark::kMicrosecond);

void BM_ProfileSample(benchmark::State& state) {
  auto g = build_grid(2, 34.0, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(rho_profile(11.07, kRef, g));
  }
}
BENCHMARK(BM_ProfileSample)->Arg(2048)->Arg(8192);

}  // namespace
