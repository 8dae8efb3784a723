// Typed views of a configuration document, one builder per section.
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ferrotorque/cli/config.hpp"
#include "ferrotorque/dynamics.hpp"
#include "ferrotorque/exclusion.hpp"
#include "ferrotorque/material.hpp"
#include "ferrotorque/sensor.hpp"
#include "ferrotorque/sweeps.hpp"

namespace ferrotorque::cli {

/// [material]: a built-in name, optionally with field overrides, or a fully
/// specified custom material.
Material material_from(const Document& doc);

/// Serializes a material as a [material] table that material_from reads back
/// exactly (17 significant digits).
std::string material_to_toml(const Material& material);

/// [sensor] combined with the material.
SensorConfig sensor_from(const Document& doc);

enum class GridQuantity { frequency, radius, mass };

struct GridSpec {
  double min = 0.0;
  double max = 0.0;
  int points = 0;
  bool log_spacing = true;
};

GridSpec grid_spec_from(const Document& doc, GridQuantity quantity);
std::vector<double> make_grid(const GridSpec& spec);

/// [noise] policy. When fixed without an explicit rate the rate is omega_alpha
/// of the [sensor] radius.
GammaRelPolicy gamma_rel_policy_from(const Document& doc, const DerivedSensor& reference,
                                     bool fixed_by_default);

std::vector<ReferenceLine> reference_lines_from(const Document& doc, double gamma0);

struct SimulateSpec {
  enum class Mode { linear, nonlinear };
  Mode mode = Mode::linear;
  DynamicsState initial;
  TorqueDrive drive;
  StepControl control;
  bool gyroscopic = true;
  bool image_field = true;
};

SimulateSpec simulate_from(const Document& doc, const DerivedSensor& sensor);

struct ExclusionSpec {
  ExclusionParams params;
  std::optional<std::filesystem::path> overlay;  ///< resolved against the config directory
};

ExclusionSpec exclusion_from(const Document& doc);

struct OutputSpec {
  std::filesystem::path directory = "out";
  bool csv = true;
  bool json = false;
};

OutputSpec output_from(const Document& doc);

}  // namespace ferrotorque::cli
