#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ferrotorque {

/// Bulk properties of a hard ferromagnet.
struct Material {
  std::string name;
  double density;          ///< [kg/m^3]
  double magnetization;    ///< volume magnetization M [A/m]
  double gamma0;           ///< gyromagnetic ratio [rad/(s T)]
  double moment_per_spin;  ///< [J/T]

  bool operator==(const Material&) const = default;
};

/// Throws ValidationError unless every field is strictly positive and finite.
void validate(const Material& material);

/// Magnetization that places the Einstein-de Haas frequency of a sphere of
/// `radius` at `f_I_Hz`: M = 2 pi f_I * gamma0 * (2/5) rho R^2.
double calibrated_magnetization(double density, double gamma0, double radius, double f_I_Hz);

/// Built-in materials. "NdFeB" is the sintered rare-earth magnet calibrated to
/// f_I = 0.188 Hz at R = 30 um with density 7430 kg/m^3.
Material builtin_material(std::string_view name);

std::vector<std::string> builtin_material_names();

}  // namespace ferrotorque
