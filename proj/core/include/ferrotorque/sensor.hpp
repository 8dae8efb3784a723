// Levitated spherical ferromagnet: configuration and derived quantities.
#pragma once

#include <optional>
#include <string_view>
#include <variant>

#include "ferrotorque/material.hpp"

namespace ferrotorque {

/// Libration frequency given directly in Hz.
struct AlphaFrequency {
  double hz;
  bool operator==(const AlphaFrequency&) const = default;
};

/// Libration frequency locked to the Einstein-de Haas frequency: f_alpha = k * f_I.
struct AlphaRatio {
  double k;
  bool operator==(const AlphaRatio&) const = default;
};

using AlphaSpec = std::variant<AlphaFrequency, AlphaRatio>;

struct SensorConfig {
  double radius = 0.0;       ///< [m]
  Material material;
  double temperature = 0.0;  ///< [K]
  double q_alpha = 1.0;
  double q_beta = 1.0;
  AlphaSpec f_alpha = AlphaRatio{10.0};
  std::optional<double> z0;  ///< levitation height above the superconductor [m]
  double gamma_dot = 0.0;    ///< intrinsic rotation rate about the spin axis [rad/s]
};

void validate(const SensorConfig& config);

struct DerivedSensor {
  SensorConfig config;
  double volume = 0.0;    ///< [m^3]
  double mass = 0.0;      ///< [kg]
  double inertia = 0.0;   ///< [kg m^2]
  double mu = 0.0;        ///< magnetic moment [J/T]
  double spin = 0.0;      ///< intrinsic spin [J s]
  double omega_I = 0.0;   ///< Einstein-de Haas frequency [rad/s]
  double n_spins = 0.0;
  std::optional<double> b_image;     ///< Meissner image field at equilibrium [T]
  std::optional<double> omega_L;     ///< Larmor frequency in b_image [rad/s]
  std::optional<double> omega_beta;  ///< [rad/s]
  double omega_alpha = 0.0;                ///< [rad/s]

  double f_I() const;
  double f_alpha() const;
};

/// Computes every derived quantity of a uniform sphere. Throws
/// ValidationError on invalid configuration and NonFiniteError if any derived
/// value is not finite.
DerivedSensor derive(const SensorConfig& config);

enum class Regime { librational, intermediate, gyroscopic };

std::string_view to_string(Regime regime);

/// Librational if omega_I < 0.1 min(omega_alpha, omega_beta), gyroscopic if
/// omega_I > 10 min(...), intermediate otherwise. A missing omega_beta counts as
/// infinite.
Regime regime(const DerivedSensor& derived);

}  // namespace ferrotorque
