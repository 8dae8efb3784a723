#include "ferrotorque/material.hpp"

#include <cmath>

#include "ferrotorque/constants.hpp"
#include "ferrotorque/error.hpp"

namespace ferrotorque {

namespace {

constexpr double kNdFeBDensity = 7430.0;
constexpr double kNdFeBCalibrationRadius = 30e-6;
constexpr double kNdFeBCalibrationFI = 0.188;

}  // namespace

void validate(const Material& m) {
  auto check = [&](double v, const char* field) {
    if (!(std::isfinite(v) && v > 0.0)) {
      throw ValidationError("material." + std::string(field) + " must be positive and finite");
    }
  };
  check(m.density, "density");
  check(m.magnetization, "magnetization");
  check(m.gamma0, "gamma0");
  check(m.moment_per_spin, "moment_per_spin");
}

double calibrated_magnetization(double density, double gamma0, double radius, double f_I_Hz) {
  return constants::two_pi * f_I_Hz * gamma0 * 0.4 * density * radius * radius;
}

std::vector<std::string> builtin_material_names() { return {"NdFeB"}; }

Material builtin_material(std::string_view name) {
  if (name == "NdFeB") {
    return Material{
        .name = "NdFeB",
        .density = kNdFeBDensity,
        .magnetization = calibrated_magnetization(kNdFeBDensity, constants::gamma_e,
                                                  kNdFeBCalibrationRadius, kNdFeBCalibrationFI),
        .gamma0 = constants::gamma_e,
        .moment_per_spin = constants::mu_B,
    };
  }
  std::string known;
  for (const auto& n : builtin_material_names()) {
    known += known.empty() ? n : ", " + n;
  }
  throw UnknownMaterialError("unknown material '" + std::string(name) + "' (available: " + known + ")");
}

}  // namespace ferrotorque
