// Physical constants (CODATA 2018, SI units).
#pragma once

#include <numbers>

namespace ferrotorque {

struct PhysicalConstants {
  double hbar;         ///< reduced Planck constant [J s]
  double k_B;          ///< Boltzmann constant [J/K]
  double mu_0;         ///< vacuum permeability [T m/A]
  double mu_B;         ///< Bohr magneton [J/T]
  double gamma_e;      ///< electron gyromagnetic ratio [rad/(s T)]
  double c;            ///< speed of light [m/s]
  double hbar_c_eV_m;  ///< hbar*c [eV m], boson mass to range
  double m_e;          ///< electron mass [kg]
};

inline constexpr PhysicalConstants kCodata2018{
    .hbar = 1.054571817e-34,
    .k_B = 1.380649e-23,
    .mu_0 = 1.25663706212e-6,
    .mu_B = 9.2740100783e-24,
    .gamma_e = 1.76085963023e11,
    .c = 299792458.0,
    .hbar_c_eV_m = 1.973269804e-7,
    .m_e = 9.1093837015e-31,
};

namespace constants {
inline constexpr double hbar = kCodata2018.hbar;
inline constexpr double k_B = kCodata2018.k_B;
inline constexpr double mu_0 = kCodata2018.mu_0;
inline constexpr double mu_B = kCodata2018.mu_B;
inline constexpr double gamma_e = kCodata2018.gamma_e;
inline constexpr double c = kCodata2018.c;
inline constexpr double hbar_c_eV_m = kCodata2018.hbar_c_eV_m;
inline constexpr double m_e = kCodata2018.m_e;
inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
}  // namespace constants

}  // namespace ferrotorque
