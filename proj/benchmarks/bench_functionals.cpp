#include <benchmark/benchmark.h>

#include "fastdiff/functionals.hpp"
#include "fastdiff/grid.hpp"
#include "fastdiff/profiles.hpp"

using namespace fastdiff;

namespace {

const ModelParams kRef{.n = 2, .m = 0.75, .p = 2.0};

Field profile_state(int cells) {
  auto g = build_grid(2, 34.0, cells);
  return rho_profile(11.0716, kRef, g);
}

void BM_Entropy(benchmark::State& state) {
  Field rho = profile_state(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(entropy(rho, kRef));
  }
}
BENCHMARK(BM_Entropy)->Arg(2048)->Arg(8192);

void BM_Dissipation(benchmark::State& state) {
  Field rho = profile_state(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(dissipation(rho, kRef));
  }
}
BENCHMARK(BM_Dissipation)->Arg(2048)->Arg(8192);

void BM_Bregman(benchmark::State& state) {
  Field rho = profile_state(2048);
  const BarenblattSpec spec = solve_theta_on_grid(mass(rho), kRef, rho.grid_ptr());
  for (auto _ : state) {
    benchmark::DoNotOptimize(bregman(rho, spec, kRef));
  }
}
BENCHMARK(BM_Bregman);

void BM_LrNorm(benchmark::State& state) {
  Field rho = profile_state(8192);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lr_norm(rho, 2.0));
  }
}
BENCHMARK(BM_LrNorm);

}  // namespace
