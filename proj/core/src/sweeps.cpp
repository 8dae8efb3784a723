#include "ferrotorque/sweeps.hpp"

#include <cmath>

#include "ferrotorque/error.hpp"
#include "ferrotorque/noise.hpp"
#include "ferrotorque/parallel.hpp"
#include "ferrotorque/sensor.hpp"

namespace ferrotorque {

namespace {

DerivedSensor locked_sensor(const Material& material, double radius, double temperature,
                            double q, double lock_ratio) {
  return derive(SensorConfig{.radius = radius,
                             .material = material,
                             .temperature = temperature,
                             .q_alpha = q,
                             .q_beta = q,
                             .f_alpha = AlphaRatio{lock_ratio}});
}

// ln(S_SQL(0) / S_ERL), monotone decreasing in R.
double log_sql_over_erl(const Material& material, double lock_ratio, double radius) {
  const DerivedSensor d = locked_sensor(material, radius, 0.0, 1.0, lock_ratio);
  return std::log(torque_to_field_psd(sql_torque_psd(d, 0.0), d) / erl_field_psd(d));
}

}  // namespace

RadiusSweepResult radius_sweep(const RadiusSweepParams& p, std::span<const double> radii) {
  if (!(p.lock_ratio > 0.0)) throw ValidationError("lock ratio k must be positive");
  if (radii.empty()) throw ValidationError("radius grid is empty");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0) || (i > 0 && !(radii[i] > radii[i - 1]))) {
      throw ValidationError("radii must be positive and strictly increasing");
    }
  }
  if (const auto* fixed = std::get_if<FixedGammaRel>(&p.gamma_rel); fixed && !(fixed->rate > 0.0)) {
    throw ValidationError("fixed gamma_rel must be positive");
  }

  const std::size_t n = radii.size();
  RadiusSweepResult out{.radii = {radii.begin(), radii.end()},
                        .f_alpha = std::vector<double>(n),
                        .thermal = std::vector<double>(n),
                        .sql = std::vector<double>(n),
                        .erl = std::vector<double>(n),
                        .spin_projection = std::vector<double>(n),
                        .lock_ratio = p.lock_ratio};
  parallel_for(n, [&](std::size_t i) {
    const DerivedSensor d = locked_sensor(p.material, radii[i], p.temperature, p.q, p.lock_ratio);
    const double gamma_rel = std::holds_alternative<FixedGammaRel>(p.gamma_rel)
                                 ? std::get<FixedGammaRel>(p.gamma_rel).rate
                                 : d.omega_alpha;
    out.f_alpha[i] = d.f_alpha();
    out.thermal[i] = std::sqrt(torque_to_field_psd(thermal_torque_psd(d), d));
    out.sql[i] = std::sqrt(torque_to_field_psd(sql_torque_psd(d, 0.0), d));
    out.erl[i] = std::sqrt(erl_field_psd(d));
    out.spin_projection[i] = std::sqrt(spin_projection_psd(d, gamma_rel));
  });
  return out;
}

double find_erl_sql_crossing(const Material& material, double lock_ratio, CrossingBracket bracket,
                             double rel_tol) {
  if (!(bracket.lo > 0.0 && bracket.hi > bracket.lo)) {
    throw ValidationError("crossing bracket must satisfy 0 < lo < hi");
  }
  double log_lo = std::log(bracket.lo);
  double log_hi = std::log(bracket.hi);
  double f_lo = log_sql_over_erl(material, lock_ratio, bracket.lo);
  const double f_hi = log_sql_over_erl(material, lock_ratio, bracket.hi);
  if (f_lo == 0.0) return bracket.lo;
  if (f_hi == 0.0) return bracket.hi;
  if ((f_lo > 0.0) == (f_hi > 0.0)) {
    throw NoCrossingError("SQL and ERL do not cross within [" + std::to_string(bracket.lo) +
                          ", " + std::to_string(bracket.hi) + "] m");
  }
  const double log_tol = std::log1p(rel_tol);
  while (log_hi - log_lo > log_tol) {
    const double mid = 0.5 * (log_lo + log_hi);
    const double f_mid = log_sql_over_erl(material, lock_ratio, std::exp(mid));
    if (f_mid == 0.0) return std::exp(mid);
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      log_lo = mid;
      f_lo = f_mid;
    } else {
      log_hi = mid;
    }
  }
  return std::exp(0.5 * (log_lo + log_hi));
}

ReferenceLine::Label reference_label(const std::string& name) {
  if (name == "de_sitter") return ReferenceLine::Label::de_sitter;
  if (name == "lense_thirring") return ReferenceLine::Label::lense_thirring;
  return ReferenceLine::Label::custom;
}

ReferenceLine frame_dragging_line(ReferenceLine::Label label, double omega, double gamma0,
                                  std::string name) {
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw ValidationError("reference line rotation rate must be positive");
  }
  if (name.empty()) {
    switch (label) {
      case ReferenceLine::Label::de_sitter: name = "de_sitter"; break;
      case ReferenceLine::Label::lense_thirring: name = "lense_thirring"; break;
      case ReferenceLine::Label::custom: name = "custom"; break;
    }
  }
  return {label, std::move(name), omega, omega / gamma0};
}

}  // namespace ferrotorque
