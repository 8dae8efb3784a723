// Librational dynamics of the levitated magnet.
//
// Angle conventions: the spin axis s sits along +x at equilibrium. alpha is the
// rotation about z, beta the tilt toward +z (a rotation by -beta about y) and
// gamma the rotation about s itself, so that for small angles
// s ~ (1, alpha, beta) and Omega ~ (gamma_dot, -beta_dot, alpha_dot).
#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

#include "ferrotorque/sensor.hpp"

namespace ferrotorque {

struct DynamicsState {
  double alpha = 0.0;      ///< [rad]
  double beta = 0.0;       ///< [rad]
  double gamma = 0.0;      ///< [rad]
  double alpha_dot = 0.0;  ///< [rad/s]
  double beta_dot = 0.0;   ///< [rad/s]
  double gamma_dot = 0.0;  ///< [rad/s]
  double time = 0.0;       ///< [s]
};

/// External excitation. A sinusoidal field is applied along y and produces a
/// torque along z (tau_z = -mu B); a sinusoidal torque acts along z directly.
struct TorqueDrive {
  enum class Kind { none, sinusoidal_field, sinusoidal_torque };
  Kind kind = Kind::none;
  double amplitude = 0.0;  ///< [T] for a field, [N m] for a torque
  double frequency = 0.0;  ///< [Hz]
  double phase = 0.0;      ///< [rad]

  /// z torque at time t for a sensor of moment mu, A sin(2 pi f t + phase) form.
  double torque_z(double t, double mu) const;
  /// Drive field along y [T] at time t (zero unless kind is sinusoidal_field).
  double field_y(double t) const;
};

struct Trajectory {
  double sample_rate = 0.0;  ///< [Hz]
  std::vector<DynamicsState> states;
};

/// Fixed-step integration controls. Every `decimation`-th step is recorded,
/// starting with the initial state.
struct StepControl {
  double duration = 0.0;  ///< [s]
  double dt = 0.0;        ///< [s]
  std::size_t decimation = 1;
};

/// Librational susceptibility 1 / (I (-w^2 + w_a^2 + i w w_a / Q_a)) [rad/(N m)].
std::complex<double> susceptibility(const DerivedSensor& d, double omega);

/// Largest admissible time step: 1 / (50 max(f_alpha, f_beta, f_I, f_drive)).
double max_time_step(const DerivedSensor& d, const TorqueDrive& drive);

/// Integrates the linearized coupled equations with classical RK4:
///   alpha'' = -w_a^2 alpha - (w_a/Q_a) alpha' - g beta' + tau_z / I
///   beta''  = -w_b^2 beta  - (w_b/Q_b) beta'  + g alpha' - tau_y / I
/// with g = omega_I + gamma_dot when `include_gyroscopic`, else 0. gamma_dot is
/// taken from the initial state and stays constant. Without z0 the beta mode
/// has no restoring torque.
Trajectory integrate_linear(const DerivedSensor& d, const DynamicsState& initial,
                            const TorqueDrive& drive, const StepControl& control,
                            bool include_gyroscopic);

enum class ImageField { meissner, off };

/// Integrates the rigid-body equations dJ/dt = tau_i + tau with J = I Omega + S,
/// the spin locked to the body x axis, orientation as a unit quaternion. The
/// alpha mode is held by a torque -I w_a^2 s_y (s x y_hat); the beta mode by the
/// full vector image-dipole field when `image` is meissner and z0 is set.
/// Damping is applied as body-frame torques -I (w_a/Q_a) Omega_z and
/// -I (w_b/Q_b) Omega_y.
Trajectory integrate_nonlinear(const DerivedSensor& d, const DynamicsState& initial,
                               const TorqueDrive& drive, ImageField image,
                               const StepControl& control);

/// Positive-frequency eigenvalues omega (time dependence e^{i omega t}) of the
/// damped, gyroscopically coupled linear system, sorted by real part. The
/// imaginary parts are the amplitude decay rates. Requires omega_beta.
std::array<std::complex<double>, 2> eigenmodes(const DerivedSensor& d, double gamma_dot = 0.0);

}  // namespace ferrotorque
