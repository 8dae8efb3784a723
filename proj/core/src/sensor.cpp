#include "ferrotorque/sensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ferrotorque/constants.hpp"
#include "ferrotorque/error.hpp"

namespace ferrotorque {

void validate(const SensorConfig& c) {
  validate(c.material);
  if (!(std::isfinite(c.radius) && c.radius > 0.0)) {
    throw ValidationError("sensor.radius must be positive");
  }
  if (!(std::isfinite(c.temperature) && c.temperature >= 0.0)) {
    throw ValidationError("sensor.temperature must be >= 0");
  }
  if (!(std::isfinite(c.q_alpha) && c.q_alpha >= 1.0)) {
    throw ValidationError("sensor.q_alpha must be >= 1");
  }
  if (!(std::isfinite(c.q_beta) && c.q_beta >= 1.0)) {
    throw ValidationError("sensor.q_beta must be >= 1");
  }
  if (const auto* f = std::get_if<AlphaFrequency>(&c.f_alpha)) {
    if (!(std::isfinite(f->hz) && f->hz > 0.0)) {
      throw ValidationError("sensor.f_alpha must be positive");
    }
  } else if (const auto* r = std::get_if<AlphaRatio>(&c.f_alpha)) {
    if (!(std::isfinite(r->k) && r->k > 0.0)) {
      throw ValidationError("sensor.f_alpha_over_f_I must be positive");
    }
  }
  if (c.z0 && !(std::isfinite(*c.z0) && *c.z0 > 0.0)) {
    throw ValidationError("sensor.z0 must be positive");
  }
  if (!std::isfinite(c.gamma_dot)) {
    throw ValidationError("sensor.gamma_dot must be finite");
  }
}

double DerivedSensor::f_I() const { return omega_I / constants::two_pi; }
double DerivedSensor::f_alpha() const { return omega_alpha / constants::two_pi; }

DerivedSensor derive(const SensorConfig& config) {
  validate(config);
  const Material& m = config.material;
  const double r = config.radius;

  DerivedSensor d{.config = config};
  d.volume = 4.0 / 3.0 * constants::pi * r * r * r;
  d.mass = m.density * d.volume;
  d.inertia = 0.4 * d.mass * r * r;
  d.mu = m.magnetization * d.volume;
  d.spin = d.mu / m.gamma0;
  d.omega_I = d.spin / d.inertia;
  d.n_spins = d.mu / m.moment_per_spin;
  if (config.z0) {
    const double z0 = *config.z0;
    d.b_image = constants::mu_0 * d.mu / (32.0 * constants::pi * z0 * z0 * z0);
    d.omega_L = m.gamma0 * *d.b_image;
    d.omega_beta = std::sqrt(*d.omega_L * d.omega_I);
  }
  d.omega_alpha = std::visit(
      [&](const auto& spec) -> double {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, AlphaFrequency>) {
          return constants::two_pi * spec.hz;
        } else {
          return spec.k * d.omega_I;
        }
      },
      config.f_alpha);

  const double values[] = {d.volume, d.mass, d.inertia, d.mu, d.spin, d.omega_I, d.n_spins,
                           d.omega_alpha, d.b_image.value_or(1.0), d.omega_L.value_or(1.0),
                           d.omega_beta.value_or(1.0)};
  for (double v : values) {
    if (!std::isfinite(v) || v <= 0.0) {
      throw NonFiniteError("derived sensor quantity is not finite and positive (R = " +
                           std::to_string(r) + " m)");
    }
  }
  return d;
}

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::librational: return "librational";
    case Regime::intermediate: return "intermediate";
    case Regime::gyroscopic: return "gyroscopic";
  }
  return "unknown";
}

Regime regime(const DerivedSensor& d) {
  const double beta = d.omega_beta.value_or(std::numeric_limits<double>::infinity());
  const double slowest = std::min(d.omega_alpha, beta);
  // 10*omega_I keeps the k = 10 lock exactly on the boundary.
  if (10.0 * d.omega_I < slowest) return Regime::librational;
  if (d.omega_I > 10.0 * slowest) return Regime::gyroscopic;
  return Regime::intermediate;
}

}  // namespace ferrotorque
