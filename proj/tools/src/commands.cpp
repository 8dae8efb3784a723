#include "ferrotorque/cli/commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "ferrotorque/cli/output.hpp"
#include "ferrotorque/constants.hpp"
#include "ferrotorque/error.hpp"
#include "ferrotorque/noise.hpp"

namespace ferrotorque::cli {

namespace {

using nlohmann::json;

json number_array(const std::vector<double>& values) {
  json arr = json::array();
  for (double v : values) arr.push_back(round9(v));
  return arr;
}

json material_json(const Material& m) {
  return {{"name", m.name},
          {"density_kg_m3", round9(m.density)},
          {"magnetization_A_m", round9(m.magnetization)},
          {"gamma0_rad_s_T", round9(m.gamma0)},
          {"moment_per_spin_J_T", round9(m.moment_per_spin)}};
}

json derived_json(const DerivedSensor& d) {
  json j{{"radius_m", round9(d.config.radius)},
         {"temperature_K", round9(d.config.temperature)},
         {"q_alpha", round9(d.config.q_alpha)},
         {"q_beta", round9(d.config.q_beta)},
         {"gamma_dot_rad_s", round9(d.config.gamma_dot)},
         {"volume_m3", round9(d.volume)},
         {"mass_kg", round9(d.mass)},
         {"inertia_kg_m2", round9(d.inertia)},
         {"mu_J_T", round9(d.mu)},
         {"spin_J_s", round9(d.spin)},
         {"omega_I_rad_s", round9(d.omega_I)},
         {"f_I_Hz", round9(d.f_I())},
         {"n_spins", round9(d.n_spins)},
         {"omega_alpha_rad_s", round9(d.omega_alpha)},
         {"f_alpha_Hz", round9(d.f_alpha())},
         {"f_alpha_over_f_I", round9(d.omega_alpha / d.omega_I)},
         {"regime", std::string(to_string(regime(d)))},
         {"material", material_json(d.config.material)}};
  if (d.config.z0) j["z0_m"] = round9(*d.config.z0);
  if (d.b_image) j["b_image_T"] = round9(*d.b_image);
  if (d.omega_L) j["omega_L_rad_s"] = round9(*d.omega_L);
  if (d.omega_beta) {
    j["omega_beta_rad_s"] = round9(*d.omega_beta);
    j["f_beta_Hz"] = round9(*d.omega_beta / constants::two_pi);
  }
  return j;
}

json base_metadata(const Document& doc, const std::string& command) {
  json config = doc.to_json();
  // The output location does not affect results and would break byte identity
  // between runs into different directories.
  if (config.contains("output")) config["output"].erase("directory");
  return {{"tool", kToolName},
          {"version", kToolVersion},
          {"command", command},
          {"config", config},
          {"conventions",
           {{"psd", "one-sided"},
            {"field_orientation", "optimal: field along y, torque along z"},
            {"number_format", "scientific, 9 significant digits"}}}};
}

json calibration_json() {
  return {{"material", "NdFeB density fixed at 7430 kg/m^3; magnetization solved from f_I = 0.188 Hz at R = 30 um"},
          {"moment_per_spin", "one Bohr magneton"}};
}

std::string csv_row(std::initializer_list<double> values) {
  std::string row;
  for (double v : values) {
    if (!row.empty()) row += ',';
    row += format_number(v);
  }
  row += '\n';
  return row;
}

std::filesystem::path write_meta(const OutputSpec& output, const std::string& stem, const json& meta) {
  const auto path = output.directory / (stem + ".meta.json");
  write_atomic(path, dump_json(meta));
  return path;
}

void restrict_to_known_sections(const Document& doc) {
  doc.restrict_sections({"material", "sensor", "grid", "noise", "reference_lines", "simulate",
                         "exclusion", "output"});
}

double max_abs_delta_alpha(const Trajectory& a, const Trajectory& b) {
  const std::size_t n = std::min(a.states.size(), b.states.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    worst = std::max(worst, std::abs(a.states[i].alpha - b.states[i].alpha));
  }
  return worst;
}

}  // namespace

CommandResult cmd_derive(const Document& doc, const OutputSpec& output, std::ostream& report) {
  restrict_to_known_sections(doc);
  const DerivedSensor d = derive(sensor_from(doc));

  report << "ferrotorque derive\n";
  auto line = [&](const char* label, double v, const char* unit) {
    report << "  " << label << " = " << format_number(v) << ' ' << unit << '\n';
  };
  line("radius", d.config.radius, "m");
  line("volume", d.volume, "m^3");
  line("mass", d.mass, "kg");
  line("inertia", d.inertia, "kg m^2");
  line("magnetic moment", d.mu, "J/T");
  line("spin", d.spin, "J s");
  line("spins N", d.n_spins, "");
  line("omega_I", d.omega_I, "rad/s");
  line("f_I", d.f_I(), "Hz");
  line("omega_alpha", d.omega_alpha, "rad/s");
  line("f_alpha", d.f_alpha(), "Hz");
  if (d.b_image) line("image field", *d.b_image, "T");
  if (d.omega_L) line("omega_L", *d.omega_L, "rad/s");
  if (d.omega_beta) line("omega_beta", *d.omega_beta, "rad/s");
  report << "  regime = " << to_string(regime(d)) << '\n';

  json meta = base_metadata(doc, "derive");
  meta["derived"] = derived_json(d);
  meta["decisions"] = {{"calibration", calibration_json()},
                       {"regime_thresholds", "librational if 10 omega_I < min(omega_alpha, omega_beta); "
                                             "gyroscopic if omega_I > 10 min(...)"}};
  const auto path = output.directory / "derive.json";
  write_atomic(path, dump_json(meta));
  return {{path}, meta};
}

CommandResult cmd_spectrum(const Document& doc, const OutputSpec& output) {
  restrict_to_known_sections(doc);
  const DerivedSensor d = derive(sensor_from(doc));
  const GridSpec grid_spec = grid_spec_from(doc, GridQuantity::frequency);
  const std::vector<double> grid = make_grid(grid_spec);
  const GammaRelPolicy policy = gamma_rel_policy_from(doc, d, false);
  const double gamma_rel =
      std::holds_alternative<FixedGammaRel>(policy) ? std::get<FixedGammaRel>(policy).rate : d.omega_alpha;
  const NoiseSpectrum s = spectrum(d, grid, gamma_rel);

  CommandResult result;
  if (output.csv) {
    std::string csv = "frequency_Hz,thermal_T2_per_Hz,sql_T2_per_Hz,erl_T2_per_Hz,spin_projection_T2_per_Hz\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
      csv += csv_row({s.frequencies[i], s.thermal[i], s.sql[i], s.erl[i], s.spin_projection[i]});
    }
    result.files.push_back(output.directory / "spectrum.csv");
    write_atomic(result.files.back(), csv);
  }
  if (output.json) {
    const json data{{"frequency_Hz", number_array(s.frequencies)},
                    {"thermal_T2_per_Hz", number_array(s.thermal)},
                    {"sql_T2_per_Hz", number_array(s.sql)},
                    {"erl_T2_per_Hz", number_array(s.erl)},
                    {"spin_projection_T2_per_Hz", number_array(s.spin_projection)}};
    result.files.push_back(output.directory / "spectrum.json");
    write_atomic(result.files.back(), dump_json(data));
  }

  json meta = base_metadata(doc, "spectrum");
  meta["derived"] = derived_json(d);
  meta["decisions"] = {
      {"gamma_rel_policy", std::holds_alternative<FixedGammaRel>(policy) ? "fixed" : "track_alpha"},
      {"gamma_rel_s", round9(gamma_rel)},
      {"f_alpha_over_f_I", round9(d.omega_alpha / d.omega_I)},
      {"thermal_model", "velocity damping, 4 k_B T I omega_alpha / Q_alpha, frequency independent"},
      {"erl_label", "erl_floor (bound reported at equality)"},
      {"calibration", calibration_json()}};
  meta["grid"] = {{"points", grid_spec.points}, {"spacing", grid_spec.log_spacing ? "log" : "linear"}};
  result.files.push_back(write_meta(output, "spectrum", meta));
  result.metadata = std::move(meta);
  return result;
}

CommandResult cmd_radius_sweep(const Document& doc, const OutputSpec& output) {
  restrict_to_known_sections(doc);
  const SensorConfig config = sensor_from(doc);
  const auto* ratio = std::get_if<AlphaRatio>(&config.f_alpha);
  if (!ratio) {
    throw ValidationError("radius-sweep locks f_alpha to f_I: use sensor.f_alpha_over_f_I, not f_alpha_Hz");
  }
  const DerivedSensor reference = derive(config);
  const std::vector<double> radii = make_grid(grid_spec_from(doc, GridQuantity::radius));
  const RadiusSweepParams params{.material = config.material,
                                 .temperature = config.temperature,
                                 .q = config.q_alpha,
                                 .lock_ratio = ratio->k,
                                 .gamma_rel = gamma_rel_policy_from(doc, reference, true)};
  const RadiusSweepResult sweep = radius_sweep(params, radii);
  const double crossing = find_erl_sql_crossing(config.material, ratio->k);
  const auto lines = reference_lines_from(doc, config.material.gamma0);

  CommandResult result;
  if (output.csv) {
    std::string csv =
        "radius_m,f_alpha_Hz,thermal_T_per_sqrtHz,sql_T_per_sqrtHz,erl_T_per_sqrtHz,spin_projection_T_per_sqrtHz\n";
    for (std::size_t i = 0; i < radii.size(); ++i) {
      csv += csv_row({sweep.radii[i], sweep.f_alpha[i], sweep.thermal[i], sweep.sql[i], sweep.erl[i],
                      sweep.spin_projection[i]});
    }
    result.files.push_back(output.directory / "radius_sweep.csv");
    write_atomic(result.files.back(), csv);
    if (!lines.empty()) {
      std::string ref = "label,omega_rad_s,b_eff_T\n";
      for (const auto& l : lines) {
        ref += l.name + "," + format_number(l.omega) + "," + format_number(l.b_eff) + "\n";
      }
      result.files.push_back(output.directory / "reference_lines.csv");
      write_atomic(result.files.back(), ref);
    }
  }
  if (output.json) {
    json data{{"radius_m", number_array(sweep.radii)},
              {"f_alpha_Hz", number_array(sweep.f_alpha)},
              {"thermal_T_per_sqrtHz", number_array(sweep.thermal)},
              {"sql_T_per_sqrtHz", number_array(sweep.sql)},
              {"erl_T_per_sqrtHz", number_array(sweep.erl)},
              {"spin_projection_T_per_sqrtHz", number_array(sweep.spin_projection)}};
    json ref = json::array();
    for (const auto& l : lines) {
      ref.push_back({{"label", l.name}, {"omega_rad_s", round9(l.omega)}, {"b_eff_T", round9(l.b_eff)}});
    }
    data["reference_lines"] = ref;
    result.files.push_back(output.directory / "radius_sweep.json");
    write_atomic(result.files.back(), dump_json(data));
  }

  json meta = base_metadata(doc, "radius-sweep");
  meta["reference_sensor"] = derived_json(reference);
  meta["erl_sql_crossing_radius_m"] = round9(crossing);
  const bool fixed = std::holds_alternative<FixedGammaRel>(params.gamma_rel);
  meta["decisions"] = {
      {"evaluation", "subresonant, omega = 0"},
      {"f_alpha_over_f_I", round9(ratio->k)},
      {"gamma_rel_policy", fixed ? "fixed" : "track_alpha"},
      {"calibration", calibration_json()},
      {"crossing_search", "log-space bisection on [1e-10, 1e-2] m, relative tolerance 1e-6"}};
  if (fixed) meta["decisions"]["gamma_rel_s"] = round9(std::get<FixedGammaRel>(params.gamma_rel).rate);
  result.files.push_back(write_meta(output, "radius_sweep", meta));
  result.metadata = std::move(meta);
  return result;
}

CommandResult cmd_simulate(const Document& doc, const OutputSpec& output) {
  restrict_to_known_sections(doc);
  const DerivedSensor d = derive(sensor_from(doc));
  const SimulateSpec spec = simulate_from(doc, d);

  const Trajectory traj =
      spec.mode == SimulateSpec::Mode::linear
          ? integrate_linear(d, spec.initial, spec.drive, spec.control, spec.gyroscopic)
          : integrate_nonlinear(d, spec.initial, spec.drive,
                                spec.image_field ? ImageField::meissner : ImageField::off, spec.control);

  json meta = base_metadata(doc, "simulate");
  meta["derived"] = derived_json(d);
  meta["samples"] = traj.states.size();
  meta["sample_rate_Hz"] = round9(traj.sample_rate);
  meta["max_time_step_s"] = round9(max_time_step(d, spec.drive));
  meta["decisions"] = {{"integrator", "classical RK4, fixed step"},
                       {"damping", "phenomenological, -(omega/Q) rate terms"}};
  if (spec.mode == SimulateSpec::Mode::nonlinear) {
    const Trajectory linear = integrate_linear(d, spec.initial, spec.drive, spec.control, true);
    meta["max_abs_delta_alpha_vs_linear_rad"] = round9(max_abs_delta_alpha(traj, linear));
    meta["decisions"]["orientation"] = "unit quaternion, renormalized every step";
  }

  CommandResult result;
  if (output.csv) {
    std::string csv = "time_s,alpha_rad,beta_rad,gamma_rad,alpha_dot_rad_s,beta_dot_rad_s,gamma_dot_rad_s\n";
    for (const auto& s : traj.states) {
      csv += csv_row({s.time, s.alpha, s.beta, s.gamma, s.alpha_dot, s.beta_dot, s.gamma_dot});
    }
    result.files.push_back(output.directory / "trajectory.csv");
    write_atomic(result.files.back(), csv);
  }
  if (output.json) {
    std::vector<double> t, a, b, g, ad, bd, gd;
    for (const auto& s : traj.states) {
      t.push_back(s.time);
      a.push_back(s.alpha);
      b.push_back(s.beta);
      g.push_back(s.gamma);
      ad.push_back(s.alpha_dot);
      bd.push_back(s.beta_dot);
      gd.push_back(s.gamma_dot);
    }
    const json data{{"time_s", number_array(t)},          {"alpha_rad", number_array(a)},
                    {"beta_rad", number_array(b)},        {"gamma_rad", number_array(g)},
                    {"alpha_dot_rad_s", number_array(ad)}, {"beta_dot_rad_s", number_array(bd)},
                    {"gamma_dot_rad_s", number_array(gd)}};
    result.files.push_back(output.directory / "trajectory.json");
    write_atomic(result.files.back(), dump_json(data));
  }
  result.files.push_back(write_meta(output, "trajectory", meta));
  result.metadata = std::move(meta);
  return result;
}

CommandResult cmd_exclusion(const Document& doc, const OutputSpec& output, std::ostream& warnings) {
  restrict_to_known_sections(doc);
  const DerivedSensor d = derive(sensor_from(doc));
  const std::vector<double> masses = make_grid(grid_spec_from(doc, GridQuantity::mass));
  const ExclusionSpec spec = exclusion_from(doc);
  std::optional<ReferenceCurve> overlay;
  if (spec.overlay) {
    overlay = reference_bound_overlay(*spec.overlay);
    for (const auto& w : overlay->warnings) warnings << "warning: " << spec.overlay->filename().string() << ": " << w << '\n';
  }
  const ExclusionCurve curve = exclusion_curve(d, spec.params, masses);

  auto cell = [](const std::vector<double>& v, std::size_t i) {
    return v.empty() ? std::string() : format_number(v[i]);
  };
  CommandResult result;
  if (output.csv) {
    std::string csv = "mass_eV,g_p2_thermal,g_p2_sql";
    if (overlay) csv += ",g_p2_" + overlay->label;
    csv += '\n';
    for (std::size_t i = 0; i < masses.size(); ++i) {
      csv += format_number(masses[i]) + "," + cell(curve.thermal, i) + "," + cell(curve.sql, i);
      if (overlay) {
        const auto v = overlay->at(masses[i]);
        csv += "," + (v ? format_number(*v) : std::string());
      }
      csv += '\n';
    }
    result.files.push_back(output.directory / "exclusion.csv");
    write_atomic(result.files.back(), csv);
  }
  if (output.json) {
    json data{{"mass_eV", number_array(curve.masses)},
              {"g_p2_thermal", number_array(curve.thermal)},
              {"g_p2_sql", number_array(curve.sql)}};
    if (overlay) {
      data["overlay"] = {{"label", overlay->label},
                         {"mass_eV", number_array(overlay->masses)},
                         {"g_p2", number_array(overlay->g_p2)}};
    }
    result.files.push_back(output.directory / "exclusion.json");
    write_atomic(result.files.back(), dump_json(data));
  }

  const auto& p = spec.params;
  const char* modulation = std::holds_alternative<SubresonantModulation>(p.modulation) ? "subresonant"
                           : std::holds_alternative<ResonantModulation>(p.modulation) ? "resonant"
                                                                                       : "explicit";
  json meta = base_metadata(doc, "exclusion");
  meta["derived"] = derived_json(d);
  meta["f_mod_Hz"] = round9(curve.f_mod);
  meta["delta_b_thermal_T"] = round9(curve.delta_b_thermal);
  meta["delta_b_sql_T"] = round9(curve.delta_b_sql);
  meta["t_meas_s"] = round9(curve.t_meas);
  meta["decisions"] = {
      {"potential", "pseudoscalar-exchange dipole-dipole, Yukawa range hbar c / m"},
      {"coupling_normalization", round9(p.coupling.normalization)},
      {"coupling_definition", "g^2 = coupling_normalization * g_p2"},
      {"normalization_caveat", "absolute placement carries an O(1)-O(4 pi) convention factor"},
      {"modulation", modulation},
      {"geometry", p.mode == GeometryMode::point_dipole ? "point_dipole" : "volume_integral"},
      {"quadrature", {{"base_order", p.order.base_order}, {"max_order", p.order.max_order}}},
      {"source",
       {{"radius_m", round9(p.source.radius)},
        {"distance_m", round9(p.source.distance)},
        {"spin_density_m3", round9(p.source.spin_density)}}},
      {"signal_to_noise", 1}};
  if (overlay) meta["overlay_warnings"] = overlay->warnings;
  result.files.push_back(write_meta(output, "exclusion", meta));
  result.metadata = std::move(meta);
  return result;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Noise budget, dynamics and exclusion bounds for levitated ferromagnetic torque sensors",
               kToolName};
  app.set_version_flag("--version", kToolVersion);
  std::string config_path;
  std::string out_dir;
  std::vector<std::string> overrides;
  std::string format;
  app.add_option("--config", config_path, "Run configuration file")->required();
  app.add_option("--out", out_dir, "Output directory (overrides output.directory)");
  app.add_option("--set", overrides, "Override a config value, section.key=value (repeatable)");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json", "both"}));
  app.fallthrough();
  app.require_subcommand(1, 1);
  for (const char* name : {"derive", "spectrum", "radius-sweep", "simulate", "exclusion"}) {
    app.add_subcommand(name)->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitConfig;
  }

  try {
    Document doc = Document::load(config_path);
    for (const auto& o : overrides) doc.apply_override(o);
    if (!out_dir.empty()) doc.apply_override("output.directory=\"" + out_dir + "\"");
    if (!format.empty()) doc.apply_override("output.format=" + format);
    const OutputSpec output = output_from(doc);
    const std::string command = app.get_subcommands().front()->get_name();

    CommandResult result;
    if (command == "derive") {
      result = cmd_derive(doc, output, out);
    } else if (command == "spectrum") {
      result = cmd_spectrum(doc, output);
    } else if (command == "radius-sweep") {
      result = cmd_radius_sweep(doc, output);
    } else if (command == "simulate") {
      result = cmd_simulate(doc, output);
    } else {
      result = cmd_exclusion(doc, output, err);
    }
    for (const auto& f : result.files) out << "wrote " << f.string() << '\n';
    return kExitOk;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const PhysicsError& e) {
    err << "error: " << e.what() << '\n';
    return kExitPhysics;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitPhysics;
  }
}

}  // namespace ferrotorque::cli
