#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "ferrotorque/noise.hpp"
#include "ferrotorque/sweeps.hpp"

namespace {

ferrotorque::DerivedSensor baseline_sensor() {
  return ferrotorque::derive({.radius = 30e-6,
                              .material = ferrotorque::builtin_material("NdFeB"),
                              .temperature = 4.2,
                              .q_alpha = 1e7,
                              .q_beta = 1e7,
                              .f_alpha = ferrotorque::AlphaRatio{10.0}});
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(n - 1));
  }
  return g;
}

void BM_Spectrum(benchmark::State& state) {
  const auto d = baseline_sensor();
  const auto grid = log_grid(1e-2, 1e2, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ferrotorque::spectrum(d, grid, d.omega_alpha));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Spectrum)->RangeMultiplier(8)->Range(64, 32768)->Complexity();

void BM_RadiusSweep(benchmark::State& state) {
  const auto grid = log_grid(1e-9, 1.0, static_cast<std::size_t>(state.range(0)));
  const ferrotorque::RadiusSweepParams params{.material = ferrotorque::builtin_material("NdFeB"),
                                              .temperature = 4.2,
                                              .q = 1e7,
                                              .lock_ratio = 10.0,
                                              .gamma_rel = ferrotorque::FixedGammaRel{11.8}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(ferrotorque::radius_sweep(params, grid));
  }
}
BENCHMARK(BM_RadiusSweep)->Arg(400)->Arg(4000);

void BM_Crossing(benchmark::State& state) {
  const auto m = ferrotorque::builtin_material("NdFeB");
  for (auto _ : state) {
    benchmark::DoNotOptimize(ferrotorque::find_erl_sql_crossing(m, 10.0));
  }
}
BENCHMARK(BM_Crossing);

}  // namespace
