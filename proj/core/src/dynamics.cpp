#include "ferrotorque/dynamics.hpp"

#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <string>

#include "ferrotorque/constants.hpp"
#include "ferrotorque/error.hpp"

namespace ferrotorque {

namespace {

constexpr double kInstabilityAngle = 1e3;
constexpr double kQuaternionDriftTolerance = 1e-6;

using Vec3 = Eigen::Vector3d;
using Quat = Eigen::Quaterniond;

void check_control(const DerivedSensor& d, const TorqueDrive& drive, const StepControl& c) {
  if (!(c.duration > 0.0) || !std::isfinite(c.duration)) {
    throw ValidationError("integration duration must be positive");
  }
  if (!(c.dt > 0.0) || !std::isfinite(c.dt)) throw ValidationError("time step must be positive");
  if (c.decimation == 0) throw ValidationError("decimation must be >= 1");
  if (drive.amplitude < 0.0 || drive.frequency < 0.0) {
    throw ValidationError("drive amplitude and frequency must be >= 0");
  }
  const double limit = max_time_step(d, drive);
  if (c.dt > limit * (1.0 + 1e-12)) {
    throw StepSizeError("time step " + std::to_string(c.dt) + " s exceeds the limit " +
                        std::to_string(limit) + " s (50 steps per fastest period)");
  }
}

std::size_t step_count(const StepControl& c) {
  return static_cast<std::size_t>(std::ceil(c.duration / c.dt - 1e-9));
}

bool finite(const DynamicsState& s) {
  return std::isfinite(s.alpha) && std::isfinite(s.beta) && std::isfinite(s.gamma) &&
         std::isfinite(s.alpha_dot) && std::isfinite(s.beta_dot) && std::isfinite(s.gamma_dot);
}

void check_stable(const DynamicsState& s) {
  if (!finite(s) || std::abs(s.alpha) > kInstabilityAngle || std::abs(s.beta) > kInstabilityAngle) {
    throw InstabilityError("trajectory diverged at t = " + std::to_string(s.time) + " s");
  }
}

// Linear model state: alpha, beta, alpha_dot, beta_dot.
using LinearState = std::array<double, 4>;

// Rigid-body state: quaternion (w, x, y, z) and lab-frame total angular momentum.
struct BodyState {
  Eigen::Vector4d q;
  Vec3 j;
};

BodyState axpy(const BodyState& s, double h, const BodyState& k) {
  return {s.q + h * k.q, s.j + h * k.j};
}

Quat to_quat(const Eigen::Vector4d& v) { return Quat(v[0], v[1], v[2], v[3]); }

Quat orientation(double alpha, double beta, double gamma) {
  return Quat(Eigen::AngleAxisd(alpha, Vec3::UnitZ())) *
         Quat(Eigen::AngleAxisd(-beta, Vec3::UnitY())) *
         Quat(Eigen::AngleAxisd(gamma, Vec3::UnitX()));
}

}  // namespace

double TorqueDrive::torque_z(double t, double mu) const {
  const double s = std::sin(constants::two_pi * frequency * t + phase);
  switch (kind) {
    case Kind::none: return 0.0;
    case Kind::sinusoidal_field: return -mu * amplitude * s;
    case Kind::sinusoidal_torque: return amplitude * s;
  }
  return 0.0;
}

double TorqueDrive::field_y(double t) const {
  if (kind != Kind::sinusoidal_field) return 0.0;
  return amplitude * std::sin(constants::two_pi * frequency * t + phase);
}

std::complex<double> susceptibility(const DerivedSensor& d, double omega) {
  const double wa = d.omega_alpha;
  const std::complex<double> denom(-omega * omega + wa * wa, omega * wa / d.config.q_alpha);
  return 1.0 / (d.inertia * denom);
}

double max_time_step(const DerivedSensor& d, const TorqueDrive& drive) {
  double fastest = std::max(d.f_alpha(), d.f_I());
  if (d.omega_beta) fastest = std::max(fastest, *d.omega_beta / constants::two_pi);
  if (drive.kind != TorqueDrive::Kind::none) fastest = std::max(fastest, drive.frequency);
  return 1.0 / (50.0 * fastest);
}

Trajectory integrate_linear(const DerivedSensor& d, const DynamicsState& initial,
                            const TorqueDrive& drive, const StepControl& control,
                            bool include_gyroscopic) {
  check_control(d, drive, control);
  const double wa = d.omega_alpha;
  const double wb = d.omega_beta.value_or(0.0);
  const double ga = wa / d.config.q_alpha;
  const double gb = wb / d.config.q_beta;
  const double gamma_dot = initial.gamma_dot;
  const double coupling = include_gyroscopic ? d.omega_I + gamma_dot : 0.0;
  const double inv_i = 1.0 / d.inertia;

  auto rhs = [&](double t, const LinearState& y) -> LinearState {
    const double tau_z = drive.torque_z(t, d.mu);
    const double tau_y = 0.0;
    return {y[2], y[3], -wa * wa * y[0] - ga * y[2] - coupling * y[3] + tau_z * inv_i,
            -wb * wb * y[1] - gb * y[3] + coupling * y[2] - tau_y * inv_i};
  };

  const std::size_t steps = step_count(control);
  const double h = control.dt;
  Trajectory traj{.sample_rate = 1.0 / (h * static_cast<double>(control.decimation))};
  traj.states.reserve(steps / control.decimation + 1);

  LinearState y{initial.alpha, initial.beta, initial.alpha_dot, initial.beta_dot};
  auto record = [&](std::size_t n) {
    const double t = initial.time + static_cast<double>(n) * h;
    DynamicsState s{.alpha = y[0], .beta = y[1], .gamma = initial.gamma + gamma_dot * (t - initial.time),
                    .alpha_dot = y[2], .beta_dot = y[3], .gamma_dot = gamma_dot, .time = t};
    check_stable(s);
    if (n % control.decimation == 0) traj.states.push_back(s);
  };
  record(0);
  for (std::size_t n = 0; n < steps; ++n) {
    const double t = initial.time + static_cast<double>(n) * h;
    const LinearState k1 = rhs(t, y);
    LinearState tmp;
    for (int i = 0; i < 4; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    const LinearState k2 = rhs(t + 0.5 * h, tmp);
    for (int i = 0; i < 4; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    const LinearState k3 = rhs(t + 0.5 * h, tmp);
    for (int i = 0; i < 4; ++i) tmp[i] = y[i] + h * k3[i];
    const LinearState k4 = rhs(t + h, tmp);
    for (int i = 0; i < 4; ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    record(n + 1);
  }
  return traj;
}

Trajectory integrate_nonlinear(const DerivedSensor& d, const DynamicsState& initial,
                               const TorqueDrive& drive, ImageField image,
                               const StepControl& control) {
  check_control(d, drive, control);
  const double inertia = d.inertia;
  const double spin = d.spin;
  const double mu = d.mu;
  const double wa = d.omega_alpha;
  const double wb = d.omega_beta.value_or(0.0);
  const double damp_a = inertia * wa / d.config.q_alpha;
  const double damp_b = inertia * wb / d.config.q_beta;
  const double k_alpha = inertia * wa * wa;
  // B_i = -image_coeff * (mu_x, mu_y, 2 mu_z)
  double image_coeff = 0.0;
  if (image == ImageField::meissner && d.config.z0) {
    const double z0 = *d.config.z0;
    image_coeff = constants::mu_0 / (32.0 * constants::pi * z0 * z0 * z0);
  }

  auto omega_of = [&](const Quat& q, const Vec3& j) -> Vec3 {
    return (j - spin * (q * Vec3::UnitX())) / inertia;
  };

  auto rhs = [&](double t, const BodyState& s) -> BodyState {
    const Quat q = to_quat(s.q).normalized();
    const Vec3 axis = q * Vec3::UnitX();
    const Vec3 omega = omega_of(q, s.j);

    // Magnetic moment is antiparallel to the spin: mu = -gamma0 S.
    const Vec3 moment = -mu * axis;
    Vec3 torque = -k_alpha * axis.y() * axis.cross(Vec3::UnitY());
    if (image_coeff != 0.0) {
      const Vec3 b_image = -image_coeff * Vec3(moment.x(), moment.y(), 2.0 * moment.z());
      torque += moment.cross(b_image);
    }
    const Vec3 omega_body = q.conjugate() * omega;
    torque += q * Vec3(0.0, -damp_b * omega_body.y(), -damp_a * omega_body.z());
    switch (drive.kind) {
      case TorqueDrive::Kind::none: break;
      case TorqueDrive::Kind::sinusoidal_field:
        torque += moment.cross(Vec3(0.0, drive.field_y(t), 0.0));
        break;
      case TorqueDrive::Kind::sinusoidal_torque:
        torque += Vec3(0.0, 0.0, drive.torque_z(t, mu));
        break;
    }

    const Quat qdot_raw = Quat(0.0, omega.x(), omega.y(), omega.z()) * to_quat(s.q);
    BodyState out;
    out.q = 0.5 * Eigen::Vector4d(qdot_raw.w(), qdot_raw.x(), qdot_raw.y(), qdot_raw.z());
    out.j = torque;
    return out;
  };

  auto to_angles = [&](const BodyState& s, double t) {
    const Quat q = to_quat(s.q).normalized();
    const Vec3 axis = q * Vec3::UnitX();
    const Vec3 omega = omega_of(q, s.j);
    const Vec3 axis_dot = omega.cross(axis);
    const double rho2 = axis.x() * axis.x() + axis.y() * axis.y();
    DynamicsState out;
    out.time = t;
    out.alpha = std::atan2(axis.y(), axis.x());
    out.beta = std::asin(std::clamp(axis.z(), -1.0, 1.0));
    const Quat twist = orientation(out.alpha, out.beta, 0.0).conjugate() * q;
    out.gamma = 2.0 * std::atan2(twist.x(), twist.w());
    out.alpha_dot = (axis.x() * axis_dot.y() - axis.y() * axis_dot.x()) / rho2;
    out.beta_dot = axis_dot.z() / std::sqrt(rho2);
    out.gamma_dot = omega.dot(axis) - out.alpha_dot * axis.z();
    return out;
  };

  const Quat q0 = orientation(initial.alpha, initial.beta, initial.gamma);
  const Vec3 axis0 = q0 * Vec3::UnitX();
  const Vec3 y_alpha = Eigen::AngleAxisd(initial.alpha, Vec3::UnitZ()) * Vec3::UnitY();
  const Vec3 omega0 =
      initial.alpha_dot * Vec3::UnitZ() - initial.beta_dot * y_alpha + initial.gamma_dot * axis0;
  BodyState y{Eigen::Vector4d(q0.w(), q0.x(), q0.y(), q0.z()), inertia * omega0 + spin * axis0};

  const std::size_t steps = step_count(control);
  const double h = control.dt;
  Trajectory traj{.sample_rate = 1.0 / (h * static_cast<double>(control.decimation))};
  traj.states.reserve(steps / control.decimation + 1);

  auto record = [&](std::size_t n) {
    const double t = initial.time + static_cast<double>(n) * h;
    const DynamicsState s = to_angles(y, t);
    check_stable(s);
    if (n % control.decimation == 0) traj.states.push_back(s);
  };
  record(0);
  for (std::size_t n = 0; n < steps; ++n) {
    const double t = initial.time + static_cast<double>(n) * h;
    const BodyState k1 = rhs(t, y);
    const BodyState k2 = rhs(t + 0.5 * h, axpy(y, 0.5 * h, k1));
    const BodyState k3 = rhs(t + 0.5 * h, axpy(y, 0.5 * h, k2));
    const BodyState k4 = rhs(t + h, axpy(y, h, k3));
    y.q += h / 6.0 * (k1.q + 2.0 * k2.q + 2.0 * k3.q + k4.q);
    y.j += h / 6.0 * (k1.j + 2.0 * k2.j + 2.0 * k3.j + k4.j);
    const double drift = std::abs(y.q.norm() - 1.0);
    if (!(drift <= kQuaternionDriftTolerance)) {
      throw QuaternionDriftError("quaternion norm drifted by " + std::to_string(drift) +
                                 " at t = " + std::to_string(t + h) + " s");
    }
    y.q.normalize();
    record(n + 1);
  }
  return traj;
}

std::array<std::complex<double>, 2> eigenmodes(const DerivedSensor& d, double gamma_dot) {
  if (!d.omega_beta) throw ValidationError("eigenmodes need omega_beta (set z0)");
  const double wa = d.omega_alpha;
  const double wb = *d.omega_beta;
  const double g = d.omega_I + gamma_dot;
  Eigen::Matrix4d a = Eigen::Matrix4d::Zero();
  // x = (alpha, beta, alpha_dot, beta_dot)
  a(0, 2) = 1.0;
  a(1, 3) = 1.0;
  a(2, 0) = -wa * wa;
  a(2, 2) = -wa / d.config.q_alpha;
  a(2, 3) = -g;
  a(3, 1) = -wb * wb;
  a(3, 3) = -wb / d.config.q_beta;
  a(3, 2) = g;
  const Eigen::EigenSolver<Eigen::Matrix4d> solver(a, false);
  std::array<std::complex<double>, 4> omegas;
  for (int i = 0; i < 4; ++i) {
    // x ~ e^{lambda t} = e^{i omega t}
    omegas[i] = std::complex<double>(0.0, -1.0) * solver.eigenvalues()[i];
  }
  std::sort(omegas.begin(), omegas.end(),
            [](const auto& l, const auto& r) { return l.real() > r.real(); });
  std::array<std::complex<double>, 2> out{omegas[0], omegas[1]};
  std::sort(out.begin(), out.end(), [](const auto& l, const auto& r) { return l.real() < r.real(); });
  return out;
}

}  // namespace ferrotorque
