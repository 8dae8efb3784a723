#include "ferrotorque/cli/run_config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "ferrotorque/constants.hpp"
#include "ferrotorque/error.hpp"

namespace ferrotorque::cli {

namespace {

std::string exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

}  // namespace

Material material_from(const Document& doc) {
  const Table& t = doc.section_or_empty("material");
  t.restrict_keys({"name", "density_kg_m3", "magnetization_A_m", "gamma0_rad_s_T", "moment_per_spin_J_T"});
  const std::string name = t.string("name", "NdFeB");
  Material m;
  const auto builtins = builtin_material_names();
  const bool is_builtin = std::find(builtins.begin(), builtins.end(), name) != builtins.end();
  const bool custom = t.contains("density_kg_m3") || t.contains("magnetization_A_m") ||
                      t.contains("gamma0_rad_s_T");
  if (is_builtin || !custom) {
    m = builtin_material(name);  // throws for an unknown name, listing the built-ins
  } else {
    m.name = name;
    m.density = t.require_number("density_kg_m3");
    m.magnetization = t.require_number("magnetization_A_m");
    m.gamma0 = t.require_number("gamma0_rad_s_T");
    m.moment_per_spin = constants::mu_B;
  }
  m.density = t.number("density_kg_m3", m.density);
  m.magnetization = t.number("magnetization_A_m", m.magnetization);
  m.gamma0 = t.number("gamma0_rad_s_T", m.gamma0);
  m.moment_per_spin = t.number("moment_per_spin_J_T", m.moment_per_spin);
  validate(m);
  return m;
}

std::string material_to_toml(const Material& m) {
  std::ostringstream out;
  out << "[material]\n"
      << "name = \"" << m.name << "\"\n"
      << "density_kg_m3 = " << exact(m.density) << "\n"
      << "magnetization_A_m = " << exact(m.magnetization) << "\n"
      << "gamma0_rad_s_T = " << exact(m.gamma0) << "\n"
      << "moment_per_spin_J_T = " << exact(m.moment_per_spin) << "\n";
  return out.str();
}

SensorConfig sensor_from(const Document& doc) {
  if (!doc.has_section("sensor")) throw ValidationError("missing required section [sensor]");
  const Table& t = doc.section_or_empty("sensor");
  t.restrict_keys({"radius_m", "temperature_K", "q_alpha", "q_beta", "f_alpha_Hz",
                   "f_alpha_over_f_I", "z0_m", "gamma_dot_rad_s"});
  SensorConfig c;
  c.material = material_from(doc);
  c.radius = t.require_number("radius_m");
  c.temperature = t.require_number("temperature_K");
  c.q_alpha = t.require_number("q_alpha");
  c.q_beta = t.number("q_beta", c.q_alpha);
  const auto hz = t.number("f_alpha_Hz");
  const auto ratio = t.number("f_alpha_over_f_I");
  if (hz && ratio) throw ValidationError("sensor: give only one of f_alpha_Hz and f_alpha_over_f_I");
  if (hz) {
    c.f_alpha = AlphaFrequency{*hz};
  } else {
    c.f_alpha = AlphaRatio{ratio.value_or(10.0)};
  }
  c.z0 = t.number("z0_m");
  c.gamma_dot = t.number("gamma_dot_rad_s", 0.0);
  validate(c);
  return c;
}

GridSpec grid_spec_from(const Document& doc, GridQuantity quantity) {
  if (!doc.has_section("grid")) throw ValidationError("missing required section [grid]");
  const Table& t = doc.section_or_empty("grid");
  t.restrict_keys({"quantity", "min", "max", "points", "spacing"});
  const char* expected = quantity == GridQuantity::frequency ? "frequency"
                         : quantity == GridQuantity::radius  ? "radius"
                                                             : "mass";
  if (auto q = t.string("quantity"); q && *q != expected) {
    throw ValidationError("grid.quantity is '" + *q + "' but this command needs '" + expected + "'");
  }
  GridSpec g;
  g.min = t.require_number("min");
  g.max = t.require_number("max");
  const double points = t.require_number("points");
  if (!(points >= 1.0) || points != std::floor(points) || points > 1e7) {
    throw ValidationError("grid.points must be a positive integer");
  }
  g.points = static_cast<int>(points);
  const std::string spacing = t.string("spacing", "log");
  if (spacing != "log" && spacing != "linear") {
    throw ValidationError("grid.spacing must be \"log\" or \"linear\"");
  }
  g.log_spacing = spacing == "log";
  if (g.points == 1 ? g.max != g.min : !(g.max > g.min)) {
    throw ValidationError("grid.max must exceed grid.min");
  }
  if (g.log_spacing && !(g.min > 0.0)) throw ValidationError("log grid needs grid.min > 0");
  if (quantity != GridQuantity::frequency && !(g.min > 0.0)) {
    throw ValidationError("grid.min must be positive");
  }
  if (!(g.min >= 0.0)) throw ValidationError("grid.min must be >= 0");
  return g;
}

std::vector<double> make_grid(const GridSpec& g) {
  std::vector<double> out(static_cast<std::size_t>(g.points));
  if (g.points == 1) {
    out[0] = g.min;
    return out;
  }
  const double n = g.points - 1;
  for (int i = 0; i < g.points; ++i) {
    if (g.log_spacing) {
      const double lo = std::log10(g.min);
      const double hi = std::log10(g.max);
      out[i] = std::pow(10.0, lo + (hi - lo) * i / n);
    } else {
      out[i] = g.min + (g.max - g.min) * i / n;
    }
  }
  out.front() = g.min;
  out.back() = g.max;
  return out;
}

GammaRelPolicy gamma_rel_policy_from(const Document& doc, const DerivedSensor& reference,
                                     bool fixed_by_default) {
  const Table& t = doc.section_or_empty("noise");
  t.restrict_keys({"gamma_rel_policy", "gamma_rel_s"});
  const std::string policy = t.string("gamma_rel_policy", fixed_by_default ? "fixed" : "track_alpha");
  if (policy == "track_alpha") {
    if (t.contains("gamma_rel_s")) {
      throw ValidationError("noise.gamma_rel_s only applies with gamma_rel_policy = \"fixed\"");
    }
    return TrackAlphaGammaRel{};
  }
  if (policy == "fixed") {
    const double rate = t.number("gamma_rel_s", reference.omega_alpha);
    if (!(rate > 0.0)) throw ValidationError("noise.gamma_rel_s must be positive");
    return FixedGammaRel{rate};
  }
  throw ValidationError("noise.gamma_rel_policy must be \"track_alpha\" or \"fixed\"");
}

std::vector<ReferenceLine> reference_lines_from(const Document& doc, double gamma0) {
  std::vector<ReferenceLine> lines;
  const Table* t = doc.section("reference_lines");
  if (!t) return lines;
  for (const auto& [name, value] : t->entries()) {
    if (value.kind != Value::Kind::number) {
      throw ValidationError("reference_lines." + name + " must be a rotation rate in rad/s");
    }
    lines.push_back(frame_dragging_line(reference_label(name), value.number, gamma0, name));
  }
  return lines;
}

SimulateSpec simulate_from(const Document& doc, const DerivedSensor& sensor) {
  if (!doc.has_section("simulate")) throw ValidationError("missing required section [simulate]");
  const Table& t = doc.section_or_empty("simulate");
  t.restrict_keys({"mode", "duration_s", "dt_s", "decimation", "gyroscopic", "image_field",
                   "alpha0_rad", "beta0_rad", "gamma0_rad", "alpha_dot0_rad_s", "beta_dot0_rad_s",
                   "drive", "drive_amplitude", "drive_frequency_Hz", "drive_phase_rad"});
  SimulateSpec s;
  const std::string mode = t.string("mode", "linear");
  if (mode == "linear") {
    s.mode = SimulateSpec::Mode::linear;
  } else if (mode == "nonlinear") {
    s.mode = SimulateSpec::Mode::nonlinear;
  } else {
    throw ValidationError("simulate.mode must be \"linear\" or \"nonlinear\"");
  }
  s.control.duration = t.require_number("duration_s");
  s.control.dt = t.require_number("dt_s");
  const double decimation = t.number("decimation", 1.0);
  if (!(decimation >= 1.0) || decimation != std::floor(decimation)) {
    throw ValidationError("simulate.decimation must be a positive integer");
  }
  s.control.decimation = static_cast<std::size_t>(decimation);
  if (!(s.control.duration > 0.0)) throw ValidationError("simulate.duration_s must be positive");
  if (!(s.control.dt > 0.0)) throw ValidationError("simulate.dt_s must be positive");
  s.gyroscopic = t.boolean("gyroscopic").value_or(true);
  s.image_field = t.boolean("image_field").value_or(true);
  s.initial.alpha = t.number("alpha0_rad", 0.0);
  s.initial.beta = t.number("beta0_rad", 0.0);
  s.initial.gamma = t.number("gamma0_rad", 0.0);
  s.initial.alpha_dot = t.number("alpha_dot0_rad_s", 0.0);
  s.initial.beta_dot = t.number("beta_dot0_rad_s", 0.0);
  s.initial.gamma_dot = sensor.config.gamma_dot;

  const std::string drive = t.string("drive", "none");
  if (drive == "none") {
    s.drive.kind = TorqueDrive::Kind::none;
  } else if (drive == "torque") {
    s.drive.kind = TorqueDrive::Kind::sinusoidal_torque;
  } else if (drive == "field") {
    s.drive.kind = TorqueDrive::Kind::sinusoidal_field;
  } else {
    throw ValidationError("simulate.drive must be \"none\", \"torque\" or \"field\"");
  }
  if (s.drive.kind != TorqueDrive::Kind::none) {
    s.drive.amplitude = t.require_number("drive_amplitude");
    s.drive.frequency = t.number("drive_frequency_Hz", sensor.f_alpha());
    s.drive.phase = t.number("drive_phase_rad", 0.0);
    if (s.drive.amplitude < 0.0) throw ValidationError("simulate.drive_amplitude must be >= 0");
    if (s.drive.frequency < 0.0) throw ValidationError("simulate.drive_frequency_Hz must be >= 0");
  }
  return s;
}

ExclusionSpec exclusion_from(const Document& doc) {
  const Table& t = doc.section_or_empty("exclusion");
  t.restrict_keys({"source_radius_m", "source_spin_density_m3", "distance_m", "polarization",
                   "t_meas_s", "modulation", "rotation_frequency_Hz", "geometry",
                   "coupling_normalization", "quadrature_base_order", "quadrature_max_order",
                   "noise_models", "overlay"});
  ExclusionSpec spec;
  ExclusionParams& p = spec.params;
  p.source.radius = t.number("source_radius_m", p.source.radius);
  p.source.spin_density = t.number("source_spin_density_m3", p.source.spin_density);
  p.source.distance = t.number("distance_m", p.source.distance);
  if (auto pol = t.numbers("polarization")) {
    if (pol->size() != 3) throw ValidationError("exclusion.polarization must have three components");
    p.source.polarization = {(*pol)[0], (*pol)[1], (*pol)[2]};
  }
  p.t_meas = t.number("t_meas_s", p.t_meas);
  if (!(p.t_meas > 0.0)) throw ValidationError("exclusion.t_meas_s must be positive");

  const std::string modulation = t.string("modulation", "subresonant");
  if (modulation == "subresonant") {
    if (t.contains("rotation_frequency_Hz")) {
      throw ValidationError("exclusion.rotation_frequency_Hz needs modulation = \"explicit\"");
    }
    p.modulation = SubresonantModulation{};
  } else if (modulation == "resonant") {
    p.modulation = ResonantModulation{};
  } else if (modulation == "explicit") {
    p.modulation = ExplicitModulation{t.require_number("rotation_frequency_Hz")};
  } else {
    throw ValidationError("exclusion.modulation must be subresonant, resonant or explicit");
  }

  const std::string geometry = t.string("geometry", "volume_integral");
  if (geometry == "volume_integral") {
    p.mode = GeometryMode::volume_integral;
  } else if (geometry == "point_dipole") {
    p.mode = GeometryMode::point_dipole;
  } else {
    throw ValidationError("exclusion.geometry must be \"point_dipole\" or \"volume_integral\"");
  }
  p.coupling.normalization = t.number("coupling_normalization", p.coupling.normalization);
  if (!(p.coupling.normalization > 0.0)) {
    throw ValidationError("exclusion.coupling_normalization must be positive");
  }
  const double base = t.number("quadrature_base_order", p.order.base_order);
  const double max = t.number("quadrature_max_order", p.order.max_order);
  if (base < 1 || max < base || base != std::floor(base) || max != std::floor(max) || max > 256) {
    throw ValidationError("exclusion quadrature orders must be integers with 1 <= base <= max <= 256");
  }
  p.order = {static_cast<int>(base), static_cast<int>(max)};

  if (auto models = t.strings("noise_models")) {
    p.noise_models.clear();
    for (const auto& m : *models) {
      if (m == "thermal") {
        p.noise_models.push_back(ExclusionNoise::thermal);
      } else if (m == "sql") {
        p.noise_models.push_back(ExclusionNoise::sql);
      } else {
        throw ValidationError("exclusion.noise_models entries must be \"thermal\" or \"sql\"");
      }
    }
    if (p.noise_models.empty()) throw ValidationError("exclusion.noise_models is empty");
  }
  if (auto overlay = t.string("overlay")) {
    std::filesystem::path path(*overlay);
    if (path.is_relative()) path = doc.base_dir / path;
    if (!std::filesystem::exists(path)) {
      throw ValidationError("exclusion.overlay file not found: " + path.string());
    }
    spec.overlay = path;
  }
  return spec;
}

OutputSpec output_from(const Document& doc) {
  const Table& t = doc.section_or_empty("output");
  t.restrict_keys({"directory", "format"});
  OutputSpec o;
  o.directory = t.string("directory", "out");
  const std::string format = t.string("format", "csv");
  if (format == "csv") {
    o.csv = true;
    o.json = false;
  } else if (format == "json") {
    o.csv = false;
    o.json = true;
  } else if (format == "both") {
    o.csv = o.json = true;
  } else {
    throw ValidationError("output.format must be csv, json or both");
  }
  return o;
}

}  // namespace ferrotorque::cli
