#include <benchmark/benchmark.h>

#include "ferrotorque/dynamics.hpp"

namespace {

ferrotorque::DerivedSensor trapped_sensor() {
  return ferrotorque::derive({.radius = 30e-6,
                              .material = ferrotorque::builtin_material("NdFeB"),
                              .temperature = 4.2,
                              .q_alpha = 1e3,
                              .q_beta = 1e3,
                              .f_alpha = ferrotorque::AlphaRatio{10.0},
                              .z0 = 1e-3});
}

void BM_IntegrateLinear(benchmark::State& state) {
  const auto d = trapped_sensor();
  const ferrotorque::StepControl control{.duration = 10.0, .dt = 1e-4, .decimation = 100};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        ferrotorque::integrate_linear(d, {.alpha = 1e-4}, {}, control, true));
  }
  state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_IntegrateLinear)->Unit(benchmark::kMillisecond);

void BM_IntegrateNonlinear(benchmark::State& state) {
  const auto d = ferrotorque::derive({.radius = 30e-6,
                                      .material = ferrotorque::builtin_material("NdFeB"),
                                      .temperature = 4.2,
                                      .q_alpha = 1e3,
                                      .q_beta = 1e3,
                                      .f_alpha = ferrotorque::AlphaRatio{10.0}});
  const ferrotorque::StepControl control{.duration = 10.0, .dt = 1e-3, .decimation = 10};
  for (auto _ : state) {
    benchmark::DoNotOptimize(ferrotorque::integrate_nonlinear(
        d, {.alpha = 1e-4}, {}, ferrotorque::ImageField::meissner, control));
  }
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_IntegrateNonlinear)->Unit(benchmark::kMillisecond);

void BM_Eigenmodes(benchmark::State& state) {
  const auto d = trapped_sensor();
  for (auto _ : state) benchmark::DoNotOptimize(ferrotorque::eigenmodes(d));
}
BENCHMARK(BM_Eigenmodes);

}  // namespace
