#include "ferrotorque/exclusion.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ferrotorque/error.hpp"
#include "ferrotorque/noise.hpp"
#include "ferrotorque/parallel.hpp"
#include "ferrotorque/quadrature.hpp"

namespace ferrotorque {

namespace {

using Vec = std::array<double, 3>;

double dot(const Vec& a, const Vec& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

// y component of s2 A(r) - r_hat (s2.r_hat) B(r), times exp(-r/lambda).
double kernel_y(const Vec& r, const Vec& s2, double lambda) {
  const double r2 = dot(r, r);
  const double rn = std::sqrt(r2);
  const double inv_r = 1.0 / rn;
  const double inv_r3 = inv_r / r2;
  const double inv_l = 1.0 / lambda;
  const double a = inv_l / r2 + inv_r3;
  const double b = inv_l * inv_l * inv_r + 3.0 * inv_l / r2 + 3.0 * inv_r3;
  const double s2_rhat = dot(s2, r) * inv_r;
  return (s2[1] * a - r[1] * inv_r * s2_rhat * b) * std::exp(-rn * inv_l);
}

struct BallNodes {
  std::vector<Vec> points;
  std::vector<double> weights;  // sum to one
};

int order_for(double radius, double lambda, const QuadratureOrder& order) {
  const double extra = std::ceil(radius / lambda);
  const double n = std::min<double>(order.max_order, order.base_order + std::min(extra, 1e6));
  return std::max(1, static_cast<int>(n));
}

BallNodes ball_nodes(const Vec& centre, double radius, int n) {
  const QuadratureRule gl = gauss_legendre(n);
  const int n_phi = 2 * n;
  BallNodes out;
  out.points.reserve(static_cast<std::size_t>(n) * n * n_phi);
  out.weights.reserve(out.points.capacity());
  for (int i = 0; i < n; ++i) {
    const double r = 0.5 * radius * (gl.nodes[i] + 1.0);
    // (3 / R^3) int r^2 dr, mapped from [-1, 1]
    const double wr = 3.0 * r * r / (radius * radius * radius) * 0.5 * radius * gl.weights[i];
    for (int j = 0; j < n; ++j) {
      const double ct = gl.nodes[j];
      const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
      const double wt = 0.5 * gl.weights[j];
      for (int k = 0; k < n_phi; ++k) {
        const double phi = 2.0 * constants::pi * (k + 0.5) / n_phi;
        out.points.push_back({centre[0] + r * st * std::cos(phi), centre[1] + r * st * std::sin(phi),
                              centre[2] + r * ct});
        out.weights.push_back(wr * wt / n_phi);
      }
    }
  }
  return out;
}

Vec normalized_polarization(const SourceConfig& source) {
  const Vec& p = source.polarization;
  const double n = std::sqrt(dot(p, p));
  if (!(n > 0.0) || !std::isfinite(n)) throw ValidationError("source polarization must be nonzero");
  return {p[0] / n, p[1] / n, p[2] / n};
}

void validate_geometry(const SourceConfig& source, const DerivedSensor& sensor) {
  if (!(source.radius > 0.0)) throw ValidationError("source radius must be positive");
  if (!(source.spin_density > 0.0)) throw ValidationError("source spin density must be positive");
  if (!(source.distance > source.radius + sensor.config.radius)) {
    throw GeometryError("source and sensor spheres overlap: distance must exceed the sum of radii");
  }
}

}  // namespace

double boson_range(double mass_eV) {
  if (!(mass_eV > 0.0) || !std::isfinite(mass_eV)) {
    throw ValidationError("boson mass must be positive");
  }
  return constants::hbar_c_eV_m / mass_eV;
}

double pseudomagnetic_field(const SourceConfig& source, const DerivedSensor& sensor, double lambda,
                            double g_p2, GeometryMode mode, const CouplingModel& coupling,
                            const QuadratureOrder& order) {
  validate_geometry(source, sensor);
  if (!(lambda > 0.0)) throw ValidationError("interaction range must be positive");
  if (!(g_p2 > 0.0)) throw ValidationError("coupling must be positive");
  const Vec s2 = normalized_polarization(source);

  const double g2 = coupling.normalization * g_p2;
  const double prefactor = g2 * std::pow(constants::hbar, 3) /
                           (16.0 * constants::pi * constants::m_e * constants::m_e * constants::c);
  const double source_volume = 4.0 / 3.0 * constants::pi * std::pow(source.radius, 3);
  const double n_source = source.spin_density * source_volume;
  const double scale = prefactor * n_source / sensor.config.material.moment_per_spin;

  const Vec source_centre{0.0, 0.0, -source.distance};
  double sum = 0.0;
  if (mode == GeometryMode::point_dipole) {
    sum = kernel_y({0.0, 0.0, source.distance}, s2, lambda);
  } else {
    const BallNodes src = ball_nodes(source_centre, source.radius, order_for(source.radius, lambda, order));
    const double rs = sensor.config.radius;
    const BallNodes sen = ball_nodes({0.0, 0.0, 0.0}, rs, order_for(rs, lambda, order));
    for (std::size_t i = 0; i < sen.points.size(); ++i) {
      double inner = 0.0;
      const Vec& x = sen.points[i];
      for (std::size_t j = 0; j < src.points.size(); ++j) {
        const Vec& y = src.points[j];
        inner += src.weights[j] * kernel_y({x[0] - y[0], x[1] - y[1], x[2] - y[2]}, s2, lambda);
      }
      sum += sen.weights[i] * inner;
    }
  }
  const double field = std::abs(scale * sum);
  if (!std::isfinite(field)) throw NonFiniteError("pseudomagnetic field is not finite");
  return field;
}

double modulation_frequency(const Modulation& modulation, const DerivedSensor& sensor) {
  if (std::holds_alternative<ResonantModulation>(modulation)) return sensor.f_alpha();
  if (const auto* e = std::get_if<ExplicitModulation>(&modulation)) return e->hz;
  return 0.0;
}

ExclusionCurve exclusion_curve(const DerivedSensor& sensor, const ExclusionParams& params,
                               const std::vector<double>& masses) {
  if (!(params.t_meas > 0.0)) throw ValidationError("measurement time must be positive");
  if (masses.empty()) throw ValidationError("mass grid is empty");
  if (const auto* e = std::get_if<ExplicitModulation>(&params.modulation)) {
    if (!(e->hz > 0.0) || e->hz * params.t_meas < 1.0) {
      throw ValidationError("source rotation frequency must complete at least one cycle in t_meas");
    }
  }
  validate_geometry(params.source, sensor);

  const double f_mod = modulation_frequency(params.modulation, sensor);
  const double omega_mod = constants::two_pi * f_mod;
  ExclusionCurve out{.masses = masses, .f_mod = f_mod, .t_meas = params.t_meas};
  out.delta_b_thermal =
      std::sqrt(torque_to_field_psd(thermal_torque_psd(sensor), sensor) / params.t_meas);
  out.delta_b_sql =
      std::sqrt(torque_to_field_psd(sql_torque_psd(sensor, omega_mod), sensor) / params.t_meas);

  std::vector<double> unit_field(masses.size());
  parallel_for(masses.size(), [&](std::size_t i) {
    unit_field[i] = pseudomagnetic_field(params.source, sensor, boson_range(masses[i]), 1.0,
                                         params.mode, params.coupling, params.order);
  });
  auto wants = [&](ExclusionNoise model) {
    return std::find(params.noise_models.begin(), params.noise_models.end(), model) !=
           params.noise_models.end();
  };
  for (std::size_t i = 0; i < masses.size(); ++i) {
    if (!(unit_field[i] > 0.0)) {
      throw NonFiniteError("signal vanishes at mass " + std::to_string(masses[i]) + " eV");
    }
    if (wants(ExclusionNoise::thermal)) out.thermal.push_back(out.delta_b_thermal / unit_field[i]);
    if (wants(ExclusionNoise::sql)) out.sql.push_back(out.delta_b_sql / unit_field[i]);
  }
  return out;
}

std::optional<double> ReferenceCurve::at(double mass) const {
  if (masses.empty() || mass < masses.front() || mass > masses.back()) return std::nullopt;
  const auto hi = std::lower_bound(masses.begin(), masses.end(), mass);
  const auto j = static_cast<std::size_t>(hi - masses.begin());
  if (masses[j] == mass || j == 0) return g_p2[j];
  const double t = std::log(mass / masses[j - 1]) / std::log(masses[j] / masses[j - 1]);
  return std::exp(std::log(g_p2[j - 1]) + t * std::log(g_p2[j] / g_p2[j - 1]));
}

ReferenceCurve parse_reference_bound(std::istream& in, std::string label) {
  ReferenceCurve curve{.label = std::move(label)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string first;
    if (!(fields >> first)) continue;
    std::string second;
    std::string extra;
    if (!(fields >> second) || (fields >> extra)) {
      throw ParseError("expected two columns (mass_eV g_p2)", line_no);
    }
    double mass = 0.0;
    double g = 0.0;
    try {
      std::size_t used = 0;
      mass = std::stod(first, &used);
      if (used != first.size()) throw std::invalid_argument(first);
      g = std::stod(second, &used);
      if (used != second.size()) throw std::invalid_argument(second);
    } catch (const std::exception&) {
      throw ParseError("non-numeric value", line_no);
    }
    if (!(mass > 0.0) || !std::isfinite(mass)) throw ParseError("mass must be positive", line_no);
    if (!(g > 0.0) || !std::isfinite(g)) throw ParseError("g_p2 must be positive", line_no);
    if (!curve.masses.empty() && !(mass > curve.masses.back())) {
      curve.warnings.push_back("line " + std::to_string(line_no) + ": masses not increasing");
    }
    curve.masses.push_back(mass);
    curve.g_p2.push_back(g);
  }
  if (curve.masses.empty()) throw ParseError("no data rows", std::max(line_no, 1));
  if (!curve.warnings.empty()) {
    std::vector<std::size_t> idx(curve.masses.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return curve.masses[a] < curve.masses[b]; });
    std::vector<double> m;
    std::vector<double> g;
    for (std::size_t i : idx) {
      m.push_back(curve.masses[i]);
      g.push_back(curve.g_p2[i]);
    }
    curve.masses = std::move(m);
    curve.g_p2 = std::move(g);
  }
  return curve;
}

ReferenceCurve reference_bound_overlay(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open reference bound file " + path.string());
  return parse_reference_bound(in, path.stem().string());
}

}  // namespace ferrotorque
