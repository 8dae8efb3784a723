// Parameter sweeps and root finding over sensor radius.
#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ferrotorque/material.hpp"

namespace ferrotorque {

/// Spin-projection relaxation rate held fixed across the sweep [1/s].
struct FixedGammaRel {
  double rate;
};

/// Relaxation rate equal to omega_alpha at each radius.
struct TrackAlphaGammaRel {};

using GammaRelPolicy = std::variant<FixedGammaRel, TrackAlphaGammaRel>;

struct RadiusSweepResult {
  std::vector<double> radii;            ///< [m]
  std::vector<double> f_alpha;          ///< [Hz]
  std::vector<double> thermal;          ///< subresonant amplitudes [T/sqrt(Hz)]
  std::vector<double> sql;
  std::vector<double> erl;
  std::vector<double> spin_projection;
  double lock_ratio = 0.0;
};

struct RadiusSweepParams {
  Material material;
  double temperature = 0.0;  ///< [K]
  double q = 1.0;            ///< Q_alpha (Q_beta is set equal)
  double lock_ratio = 10.0;  ///< f_alpha / f_I
  GammaRelPolicy gamma_rel = TrackAlphaGammaRel{};
};

/// Subresonant (omega = 0) amplitude spectral densities at each radius with
/// f_alpha = k f_I. Radii must be positive and strictly increasing.
RadiusSweepResult radius_sweep(const RadiusSweepParams& params, std::span<const double> radii);

struct CrossingBracket {
  double lo = 1e-10;  ///< [m]
  double hi = 1e-2;   ///< [m]
};

/// Radius at which the subresonant SQL field PSD equals the ERL, by bisection
/// in log R to relative tolerance `rel_tol`. Throws NoCrossingError when the
/// bracket ends do not straddle a crossing.
double find_erl_sql_crossing(const Material& material, double lock_ratio,
                             CrossingBracket bracket = {}, double rel_tol = 1e-6);

struct ReferenceLine {
  enum class Label { de_sitter, lense_thirring, custom };
  Label label;
  std::string name;  ///< display name; equals the label for the named effects
  double omega;      ///< [rad/s]
  double b_eff;      ///< [T]
};

/// Effective field of a rotating frame, B_eff = omega / gamma0.
ReferenceLine frame_dragging_line(ReferenceLine::Label label, double omega, double gamma0,
                                  std::string name = {});

/// Maps "de_sitter" and "lense_thirring" to their labels, anything else to custom.
ReferenceLine::Label reference_label(const std::string& name);

}  // namespace ferrotorque
