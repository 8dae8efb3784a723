#pragma once

#include <cmath>
#include <vector>

#include "ferrotorque/material.hpp"
#include "ferrotorque/sensor.hpp"

namespace ferrotorque::testing {

inline double rel_err(double actual, double expected) {
  return std::abs(actual - expected) / std::abs(expected);
}

inline SensorConfig baseline_config() {
  return {.radius = 30e-6,
          .material = builtin_material("NdFeB"),
          .temperature = 4.2,
          .q_alpha = 1e7,
          .q_beta = 1e7,
          .f_alpha = AlphaRatio{10.0}};
}

inline SensorConfig large_sensor_config() {
  SensorConfig c = baseline_config();
  c.radius = 0.2e-3;
  return c;
}

inline std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) g[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  return g;
}

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace ferrotorque::testing
