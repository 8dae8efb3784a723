// Projected bounds on an electron-electron pseudoscalar (axionlike) spin-spin
// coupling from a rotating polarized source near the levitated sensor.
//
// Geometry: sensor at the origin with its sensitive field axis along y, source
// sphere centred a distance d below it at (0, 0, -d). The interaction is the
// pseudoscalar-exchange dipole-dipole potential
//   V = g^2 hbar^3 / (16 pi m_e^2 c) [ (s1.s2)(1/(l r^2) + 1/r^3)
//       - (s1.r)(s2.r)(1/(l^2 r) + 3/(l r^2) + 3/r^3) ] exp(-r/l)
// with g^2 = normalization * g_p2 and s1, s2 Pauli vectors. The sensor spins
// see an effective field V / (moment per spin) along s1.
#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ferrotorque/constants.hpp"
#include "ferrotorque/sensor.hpp"

namespace ferrotorque {

struct SourceConfig {
  double radius = 2e-3;                    ///< [m]
  double spin_density = 4e28;              ///< polarized spins per volume [1/m^3]
  double distance = 4e-3;                  ///< centre-to-centre separation [m]
  std::array<double, 3> polarization{0.0, 1.0, 0.0};  ///< unit vector at peak signal
};

enum class GeometryMode { point_dipole, volume_integral };

/// Per-sphere Gauss-Legendre order: radial and polar use
/// min(max_order, base_order + ceil(R / lambda)) points, azimuth twice that.
struct QuadratureOrder {
  int base_order = 8;
  int max_order = 48;
};

struct CouplingModel {
  /// g^2 = normalization * g_p2, i.e. g_p2 = g^2 / (4 pi hbar c) by default.
  double normalization = 4.0 * constants::pi;
};

/// Reduced Compton wavelength hbar c / (m c^2) [m] for a boson mass in eV.
double boson_range(double mass_eV);

/// Amplitude of the effective field along the sensor y axis [T].
double pseudomagnetic_field(const SourceConfig& source, const DerivedSensor& sensor, double lambda,
                            double g_p2, GeometryMode mode, const CouplingModel& coupling = {},
                            const QuadratureOrder& order = {});

struct SubresonantModulation {};
struct ResonantModulation {};
struct ExplicitModulation {
  double hz;
};
using Modulation = std::variant<SubresonantModulation, ResonantModulation, ExplicitModulation>;

enum class ExclusionNoise { thermal, sql };

struct ExclusionParams {
  SourceConfig source;
  double t_meas = 1e6;  ///< [s]
  GeometryMode mode = GeometryMode::volume_integral;
  Modulation modulation = SubresonantModulation{};
  CouplingModel coupling;
  QuadratureOrder order;
  std::vector<ExclusionNoise> noise_models{ExclusionNoise::thermal, ExclusionNoise::sql};
};

struct ExclusionCurve {
  std::vector<double> masses;  ///< [eV]
  std::vector<double> thermal; ///< g_p2 bounds, empty if the model was not requested
  std::vector<double> sql;
  double f_mod = 0.0;          ///< signal frequency used for the noise [Hz]
  double delta_b_thermal = 0.0;  ///< field resolution sqrt(S_B / t) [T]
  double delta_b_sql = 0.0;
  double t_meas = 0.0;
};

/// Modulation frequency in Hz for a sensor (0 for subresonant).
double modulation_frequency(const Modulation& modulation, const DerivedSensor& sensor);

/// g_p2 bound at unit signal-to-noise for each mass: sqrt(S_B(f_mod) / t) / B_eff(g_p2 = 1).
ExclusionCurve exclusion_curve(const DerivedSensor& sensor, const ExclusionParams& params,
                               const std::vector<double>& masses);

struct ReferenceCurve {
  std::string label;
  std::vector<double> masses;  ///< [eV]
  std::vector<double> g_p2;
  std::vector<std::string> warnings;

  /// Log-log interpolation; nullopt outside the tabulated range.
  std::optional<double> at(double mass) const;
};

/// Two-column numeric text (mass_eV g_p2), '#' comments and blank lines allowed.
/// Throws ParseError (with line number) on malformed, non-positive or empty input.
/// Non-increasing masses produce a warning.
ReferenceCurve parse_reference_bound(std::istream& in, std::string label);

ReferenceCurve reference_bound_overlay(const std::filesystem::path& path);

}  // namespace ferrotorque
