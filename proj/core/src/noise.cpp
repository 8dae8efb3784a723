#include "ferrotorque/noise.hpp"

#include <cmath>
#include <complex>

#include "ferrotorque/constants.hpp"
#include "ferrotorque/dynamics.hpp"
#include "ferrotorque/error.hpp"
#include "ferrotorque/parallel.hpp"

namespace ferrotorque {

double thermal_torque_psd(const DerivedSensor& d) {
  return 4.0 * constants::k_B * d.config.temperature * d.inertia * d.omega_alpha / d.config.q_alpha;
}

double sql_torque_psd(const DerivedSensor& d, double omega) {
  const double wa = d.omega_alpha;
  const double detuning = -omega * omega + wa * wa;
  const double loss = omega * wa / d.config.q_alpha;
  return 2.0 * constants::hbar * d.inertia * std::hypot(detuning, loss);
}

double SqlSplit::total_torque_psd(const DerivedSensor& d, double omega) const {
  const double chi = std::abs(susceptibility(d, omega));
  return s_imprecision / (chi * chi) + s_backaction;
}

SqlSplit optimal_sql_split(const DerivedSensor& d, double omega) {
  const double chi = std::abs(susceptibility(d, omega));
  return {.s_imprecision = constants::hbar * chi, .s_backaction = constants::hbar / chi};
}

double torque_to_field_psd(double s_tau, const DerivedSensor& d) { return s_tau / (d.mu * d.mu); }

double erl_field_psd(const DerivedSensor& d) {
  return 2.0 * constants::mu_0 * constants::hbar / d.volume;
}

double spin_projection_field_resolution(const DerivedSensor& d, double gamma_rel, double t) {
  if (!(t > 0.0)) throw ValidationError("measurement time must be positive");
  if (!(gamma_rel >= 0.0)) throw ValidationError("gamma_rel must be >= 0");
  const double rate = std::max(gamma_rel, 1.0 / t);
  return std::sqrt(rate / (d.n_spins * t)) / d.config.material.gamma0;
}

double spin_projection_psd(const DerivedSensor& d, double gamma_rel) {
  if (!(gamma_rel > 0.0) || !std::isfinite(gamma_rel)) {
    throw ValidationError("spin-projection PSD needs gamma_rel > 0 (use the resolution form for gamma_rel = 0)");
  }
  const double g = d.config.material.gamma0;
  return gamma_rel / (g * g * d.n_spins);
}

std::string_view to_string(NoiseSource source) {
  switch (source) {
    case NoiseSource::thermal: return "thermal";
    case NoiseSource::sql: return "sql";
    case NoiseSource::erl: return "erl_floor";
    case NoiseSource::spin_projection: return "spin_projection";
  }
  return "unknown";
}

const std::vector<double>& NoiseSpectrum::psd(NoiseSource source) const {
  switch (source) {
    case NoiseSource::thermal: return thermal;
    case NoiseSource::sql: return sql;
    case NoiseSource::erl: return erl;
    case NoiseSource::spin_projection: return spin_projection;
  }
  return thermal;
}

NoiseSpectrum spectrum(const DerivedSensor& d, std::span<const double> grid, double gamma_rel) {
  if (grid.empty()) throw ValidationError("frequency grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]) || grid[i] < 0.0) {
      throw ValidationError("frequency grid values must be finite and >= 0");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw ValidationError("frequency grid must be strictly increasing");
    }
  }
  const std::size_t n = grid.size();
  NoiseSpectrum s{.frequencies = {grid.begin(), grid.end()},
                  .thermal = std::vector<double>(n, torque_to_field_psd(thermal_torque_psd(d), d)),
                  .sql = std::vector<double>(n),
                  .erl = std::vector<double>(n, erl_field_psd(d)),
                  .spin_projection = std::vector<double>(n, spin_projection_psd(d, gamma_rel)),
                  .gamma_rel = gamma_rel,
                  .sensor = d};
  parallel_for(n, [&](std::size_t i) {
    s.sql[i] = torque_to_field_psd(sql_torque_psd(d, constants::two_pi * grid[i]), d);
  });
  for (NoiseSource src : kNoiseSources) {
    for (double v : s.psd(src)) {
      if (!std::isfinite(v) || v < 0.0) throw NonFiniteError("non-finite PSD value");
    }
  }
  return s;
}

}  // namespace ferrotorque
