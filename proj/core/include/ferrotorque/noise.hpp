// Noise floors of a levitated ferromagnetic torque magnetometer, expressed as
// one-sided power spectral densities.
#pragma once

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include "ferrotorque/sensor.hpp"

namespace ferrotorque {

/// Thermal torque PSD 4 k_B T I omega_alpha / Q_alpha [(N m)^2/Hz], flat in frequency.
double thermal_torque_psd(const DerivedSensor& d);

/// Standard quantum limit on torque, 2 hbar I |(-w^2 + w_a^2) + i w w_a / Q_a|
/// [(N m)^2/Hz]. At omega = 0 this is the subresonant value 2 hbar I w_a^2.
double sql_torque_psd(const DerivedSensor& d, double omega);

/// Imprecision (angle) and back-action (torque) noise of a linear detector.
struct SqlSplit {
  double s_imprecision;  ///< [rad^2/Hz]
  double s_backaction;   ///< [(N m)^2/Hz]

  /// Imprecision referred to torque plus back-action at the given frequency.
  double total_torque_psd(const DerivedSensor& d, double omega) const;
};

/// The Heisenberg-limited split (product hbar^2) that minimizes the total
/// torque noise at omega: s_backaction / s_imprecision = |chi(omega)|^-2.
SqlSplit optimal_sql_split(const DerivedSensor& d, double omega);

/// S_B = S_tau / mu^2 for a field along y (torque along z).
double torque_to_field_psd(double s_tau, const DerivedSensor& d);

/// Energy resolution limit at equality, 2 mu_0 hbar / V [T^2/Hz].
double erl_field_psd(const DerivedSensor& d);

/// Spin-projection field uncertainty (1/gamma0) sqrt(G / (N t)) [T] with
/// G = max(gamma_rel, 1/t).
double spin_projection_field_resolution(const DerivedSensor& d, double gamma_rel, double t);

/// Frequency-flat spin-projection PSD gamma_rel / (gamma0^2 N) [T^2/Hz].
/// Requires gamma_rel > 0.
double spin_projection_psd(const DerivedSensor& d, double gamma_rel);

enum class NoiseSource { thermal, sql, erl, spin_projection };

inline constexpr std::array kNoiseSources{NoiseSource::thermal, NoiseSource::sql,
                                          NoiseSource::erl, NoiseSource::spin_projection};

std::string_view to_string(NoiseSource source);

struct NoiseSpectrum {
  std::vector<double> frequencies;  ///< [Hz]
  std::vector<double> thermal;      ///< [T^2/Hz]
  std::vector<double> sql;
  std::vector<double> erl;
  std::vector<double> spin_projection;
  double gamma_rel = 0.0;           ///< relaxation rate used for spin projection [1/s]
  DerivedSensor sensor;

  const std::vector<double>& psd(NoiseSource source) const;
};

/// Evaluates every source over a strictly increasing, non-negative frequency grid.
NoiseSpectrum spectrum(const DerivedSensor& d, std::span<const double> grid, double gamma_rel);

}  // namespace ferrotorque
