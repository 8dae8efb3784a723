#include <benchmark/benchmark.h>

#include "ferrotorque/exclusion.hpp"

namespace {

const ferrotorque::DerivedSensor& large_sensor() {
  static const auto d = ferrotorque::derive({.radius = 0.2e-3,
                                             .material = ferrotorque::builtin_material("NdFeB"),
                                             .temperature = 4.2,
                                             .q_alpha = 1e7,
                                             .q_beta = 1e7,
                                             .f_alpha = ferrotorque::AlphaRatio{10.0}});
  return d;
}

void BM_PointDipole(benchmark::State& state) {
  const ferrotorque::SourceConfig source;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ferrotorque::pseudomagnetic_field(
        source, large_sensor(), 1e-2, 1.0, ferrotorque::GeometryMode::point_dipole));
  }
}
BENCHMARK(BM_PointDipole);

// range(0): boson mass in units of 1e-6 eV; larger masses raise the quadrature order.
void BM_VolumeIntegral(benchmark::State& state) {
  const ferrotorque::SourceConfig source;
  const double lambda = ferrotorque::boson_range(static_cast<double>(state.range(0)) * 1e-6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ferrotorque::pseudomagnetic_field(
        source, large_sensor(), lambda, 1.0, ferrotorque::GeometryMode::volume_integral));
  }
}
BENCHMARK(BM_VolumeIntegral)->Arg(1)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace
