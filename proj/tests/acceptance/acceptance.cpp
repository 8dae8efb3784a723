// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ferrotorque/cli/commands.hpp"
#include "ferrotorque/cli/config.hpp"
#include "ferrotorque/cli/run_config.hpp"
#include "ferrotorque/constants.hpp"
#include "ferrotorque/dynamics.hpp"
#include "ferrotorque/exclusion.hpp"
#include "ferrotorque/noise.hpp"
#include "ferrotorque/sweeps.hpp"

namespace fs = std::filesystem;
using namespace ferrotorque;

namespace {

const fs::path kConfigs = FERROTORQUE_CONFIG_DIR;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

cli::Document config(const std::string& name) { return cli::Document::load(kConfigs / name); }

DerivedSensor sensor(const std::string& name) { return derive(cli::sensor_from(config(name))); }

double round_sig(double v, int digits) {
  const double scale = std::pow(10.0, digits - 1 - std::floor(std::log10(std::abs(v))));
  return std::round(v * scale) / scale;
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) g[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  return g;
}

Outcome derived_frequencies() {
  const double f_i = sensor("noise_spectrum.toml").f_I();
  const double f_a = sensor("exclusion.toml").f_alpha();
  const bool pass = round_sig(f_i, 3) == 0.188 && round_sig(f_a, 3) == 0.0423 && rel(f_a, 0.04) <= 0.10;
  return {pass, "f_I(30 um) = " + fmt("%.6g", f_i) + " Hz, f_alpha(0.2 mm) = " + fmt("%.6g", f_a) +
                    " Hz (" + fmt("%.1f", 100.0 * rel(f_a, 0.04)) + "% from 0.04)"};
}

Outcome spectrum_ordering() {
  const DerivedSensor d = sensor("noise_spectrum.toml");
  const std::vector<double> grid{0.1};
  const NoiseSpectrum s = spectrum(d, grid, d.omega_alpha);
  const double th = std::sqrt(s.thermal[0]), sq = std::sqrt(s.sql[0]), erl = std::sqrt(s.erl[0]);
  const double th_sq = std::log10(th / sq), erl_sq = std::log10(erl / sq);
  const bool pass = erl > th && th > sq && th_sq >= 1.5 && th_sq <= 2.5 && erl_sq >= 3.0 && erl_sq <= 5.0;
  return {pass, "ERL " + fmt("%.3e", erl) + " > thermal " + fmt("%.3e", th) + " > SQL " + fmt("%.3e", sq) +
                    "; log10 thermal/SQL = " + fmt("%.3f", th_sq) + ", log10 ERL/SQL = " + fmt("%.3f", erl_sq)};
}

Outcome radius_slopes() {
  const cli::Document doc = config("radius_sweep.toml");
  const SensorConfig c = cli::sensor_from(doc);
  const RadiusSweepParams p{.material = c.material,
                            .temperature = c.temperature,
                            .q = c.q_alpha,
                            .lock_ratio = std::get<AlphaRatio>(c.f_alpha).k,
                            .gamma_rel = cli::gamma_rel_policy_from(doc, derive(c), true)};
  const auto radii = log_grid(1e-8, 1e-3, 200);
  const RadiusSweepResult r = radius_sweep(p, radii);
  const double s_erl = slope(radii, r.erl), s_th = slope(radii, r.thermal);
  const double s_sp = slope(radii, r.spin_projection), s_sql = slope(radii, r.sql);
  const bool pass = std::abs(s_erl + 1.5) <= 0.005 && std::abs(s_th + 1.5) <= 0.005 &&
                    std::abs(s_sp + 1.5) <= 0.005 && std::abs(s_sql + 2.5) <= 0.005;
  return {pass, "ERL " + fmt("%.4f", s_erl) + ", thermal " + fmt("%.4f", s_th) + ", spin projection " +
                    fmt("%.4f", s_sp) + ", SQL " + fmt("%.4f", s_sql)};
}

Outcome crossing_radius() {
  const SensorConfig c = cli::sensor_from(config("radius_sweep.toml"));
  const double k = std::get<AlphaRatio>(c.f_alpha).k;
  const double r = find_erl_sql_crossing(c.material, k);
  SensorConfig at = c;
  at.radius = r;
  const DerivedSensor d = derive(at);
  const double sql = torque_to_field_psd(sql_torque_psd(d, 0.0), d);
  const double erl = erl_field_psd(d);
  const double mismatch = std::abs(sql - erl) / erl;
  const bool pass = r >= 0.3e-9 && r <= 3e-9 && mismatch < 1e-5;
  return {pass, "R* = " + fmt("%.6e", r) + " m, |SQL - ERL|/ERL = " + fmt("%.2e", mismatch)};
}

Outcome extrapolated_sensitivities() {
  const SensorConfig c = cli::sensor_from(config("radius_sweep.toml"));
  const RadiusSweepParams p{.material = c.material, .temperature = c.temperature, .q = c.q_alpha,
                            .lock_ratio = std::get<AlphaRatio>(c.f_alpha).k};
  const std::vector<double> radii{0.01, 1.0};
  const RadiusSweepResult r = radius_sweep(p, radii);
  auto within3 = [](double v, double target) { return v >= target / 3.0 && v <= target * 3.0; };
  const bool pass = within3(r.sql[0], 1e-24) && within3(r.sql[1], 1e-29);
  return {pass, "SQL(1 cm) = " + fmt("%.3e", r.sql[0]) + " T/rtHz, SQL(1 m) = " + fmt("%.3e", r.sql[1]) + " T/rtHz"};
}

Outcome sql_identities() {
  const DerivedSensor d = sensor("noise_spectrum.toml");
  const double direct = 2.0 * constants::hbar * d.inertia * d.omega_alpha * d.omega_alpha;
  const double e0 = rel(sql_torque_psd(d, 0.0), direct);
  const double heuristic = direct / (d.mu * d.mu);
  const double e1 = rel(torque_to_field_psd(sql_torque_psd(d, 0.0), d), heuristic);
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> log_ratio(-8.0, 8.0), log_freq(-3.0, 3.0);
  int violations = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 10000; ++i) {
    const double w = d.omega_alpha * std::pow(10.0, log_freq(rng));
    const SqlSplit opt = optimal_sql_split(d, w);
    const double k = std::pow(10.0, log_ratio(rng));
    const SqlSplit split{.s_imprecision = opt.s_imprecision * k, .s_backaction = opt.s_backaction / k};
    const double ratio = split.total_torque_psd(d, w) / sql_torque_psd(d, w);
    worst = std::min(worst, ratio);
    if (ratio < 1.0 - 1e-12) ++violations;
  }
  const bool pass = e0 <= 1e-12 && e1 <= 1e-12 && violations == 0;
  return {pass, "S_tau(0) vs 2 hbar I w^2: " + fmt("%.1e", e0) + ", field bound: " + fmt("%.1e", e1) +
                    ", random splits beating the SQL: " + std::to_string(violations) + "/10000 (min ratio " +
                    fmt("%.12f", worst) + ")"};
}

double lockin(const Trajectory& tr, double w, double t_start) {
  const double period = constants::two_pi / w;
  const double span = std::floor((tr.states.back().time - t_start) / period) * period;
  double c = 0, s = 0, n = 0;
  for (const auto& st : tr.states) {
    if (st.time < t_start || st.time >= t_start + span) continue;
    c += st.alpha * std::cos(w * st.time);
    s += st.alpha * std::sin(w * st.time);
    n += 1.0;
  }
  return 2.0 * std::hypot(c, s) / n;
}

Outcome dynamics_equivalence() {
  // Small-angle agreement over 100 periods of the shipped nonlinear example.
  const cli::Document doc = config("simulate_nonlinear.toml");
  const DerivedSensor d = derive(cli::sensor_from(doc));
  const cli::SimulateSpec spec = cli::simulate_from(doc, d);
  const StepControl ctl{.duration = 100.0 / d.f_alpha(), .dt = spec.control.dt, .decimation = 1};
  const Trajectory lin = integrate_linear(d, {.alpha = 1e-4}, {}, ctl, true);
  const Trajectory non = integrate_nonlinear(d, {.alpha = 1e-4}, {}, ImageField::meissner, ctl);
  double delta = 0.0;
  for (std::size_t i = 0; i < lin.states.size(); ++i) {
    delta = std::max(delta, std::abs(lin.states[i].alpha - non.states[i].alpha));
  }

  // Steady state and ring-down at Q = 100 so that 10 Q / w_a stays short.
  SensorConfig c = cli::sensor_from(config("simulate.toml"));
  c.q_alpha = c.q_beta = 100.0;
  const DerivedSensor low_q = derive(c);
  const double fa = low_q.f_alpha();
  double worst_amp = 0.0;
  for (double ratio : {1.0, 0.5, 2.0}) {
    const double f = ratio * fa;
    const double w = constants::two_pi * f;
    const TorqueDrive drive{.kind = TorqueDrive::Kind::sinusoidal_torque, .amplitude = 1e-20, .frequency = f};
    const double settle = 20.0 * c.q_alpha / low_q.omega_alpha;
    const Trajectory tr = integrate_linear(
        low_q, {}, drive, {.duration = settle + 20.0 / f, .dt = 1.0 / (200.0 * std::max(f, fa))}, false);
    worst_amp = std::max(worst_amp, rel(lockin(tr, w, settle), std::abs(susceptibility(low_q, w)) * 1e-20));
  }

  const Trajectory ring = integrate_linear(low_q, {.alpha = 1e-3}, {}, {.duration = 50.0 / fa, .dt = 1.0 / (200.0 * fa)},
                                           false);
  std::vector<double> t, le;
  for (const auto& s : ring.states) {
    t.push_back(s.time);
    le.push_back(std::log(0.5 * s.alpha_dot * s.alpha_dot +
                          0.5 * low_q.omega_alpha * low_q.omega_alpha * s.alpha * s.alpha));
  }
  double st = 0, se = 0, stt = 0, ste = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    st += t[i];
    se += le[i];
    stt += t[i] * t[i];
    ste += t[i] * le[i];
  }
  const double n = static_cast<double>(t.size());
  const double rate = -0.5 * (n * ste - st * se) / (n * stt - st * st);
  const double decay_err = rel(rate, low_q.omega_alpha / (2.0 * c.q_alpha));

  const bool pass = delta < 1e-8 && worst_amp <= 0.01 && decay_err <= 0.01;
  return {pass, "max |d alpha| = " + fmt("%.3e", delta) + " rad, steady-state amplitude error " +
                    fmt("%.3f", 100.0 * worst_amp) + "%, decay-rate error " + fmt("%.3f", 100.0 * decay_err) + "%"};
}

Outcome exclusion_properties() {
  const cli::Document doc = config("exclusion.toml");
  const DerivedSensor d = derive(cli::sensor_from(doc));
  ExclusionParams p = cli::exclusion_from(doc).params;
  const std::vector<double> masses = cli::make_grid(cli::grid_spec_from(doc, cli::GridQuantity::mass));
  const ExclusionCurve base = exclusion_curve(d, p, masses);

  ExclusionParams longer = p;
  longer.t_meas *= 4.0;
  const ExclusionCurve four = exclusion_curve(d, longer, masses);
  double t_err = 0.0, ratio_err = 0.0;
  const double noise_ratio =
      std::sqrt(thermal_torque_psd(d) / sql_torque_psd(d, constants::two_pi * base.f_mod));
  for (std::size_t i = 0; i < masses.size(); ++i) {
    t_err = std::max(t_err, rel(four.thermal[i], base.thermal[i] / 2.0));
    t_err = std::max(t_err, rel(four.sql[i], base.sql[i] / 2.0));
    ratio_err = std::max(ratio_err, rel(base.thermal[i] / base.sql[i], noise_ratio));
  }

  const double dist = p.source.distance;
  const double limit = pseudomagnetic_field(p.source, d, 1e6 * dist, 1.0, p.mode, p.coupling, p.order);
  double plateau = 0.0;
  for (double k : {100.0, 300.0, 1e3, 1e4, 1e5}) {
    plateau = std::max(plateau, rel(pseudomagnetic_field(p.source, d, k * dist, 1.0, p.mode, p.coupling, p.order), limit));
  }

  SourceConfig far = p.source;
  far.distance = 10.0 * far.radius;
  double converge = 0.0;
  for (double lambda : {far.distance, 3.0 * far.distance, 10.0 * far.distance, 100.0 * far.distance}) {
    const double point = pseudomagnetic_field(far, d, lambda, 1.0, GeometryMode::point_dipole, p.coupling);
    const double vol = pseudomagnetic_field(far, d, lambda, 1.0, GeometryMode::volume_integral, p.coupling, p.order);
    converge = std::max(converge, rel(vol, point));
  }

  const bool pass = t_err <= 1e-12 && ratio_err <= 1e-12 && plateau < 0.01 && converge <= 0.05;
  return {pass, "t^-1/2 error " + fmt("%.1e", t_err) + ", ratio error " + fmt("%.1e", ratio_err) +
                    ", plateau deviation " + fmt("%.2e", plateau) + ", volume vs point at d = 10 R_src " +
                    fmt("%.2e", converge)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Outcome determinism() {
  const std::vector<std::pair<std::string, std::string>> runs{{"noise_spectrum.toml", "derive"},
                                                              {"noise_spectrum.toml", "spectrum"},
                                                              {"radius_sweep.toml", "radius-sweep"},
                                                              {"exclusion.toml", "exclusion"},
                                                              {"simulate.toml", "simulate"},
                                                              {"simulate_nonlinear.toml", "simulate"}};
  const fs::path root = fs::temp_directory_path() / ("ferrotorque_acceptance_" + std::to_string(std::random_device{}()));
  int files = 0;
  std::string mismatch;
  for (const auto& [cfg, cmd] : runs) {
    for (const char* pass : {"a", "b"}) {
      const std::string cfg_path = (kConfigs / cfg).string();
      const std::string out = (root / pass / (cfg + "." + cmd)).string();
      const char* argv[] = {"ferrotorque", "--config", cfg_path.c_str(), "--out", out.c_str(), cmd.c_str()};
      std::ostringstream o, e;
      if (cli::run(6, argv, o, e) != cli::kExitOk) {
        fs::remove_all(root);
        return {false, cfg + " " + cmd + " failed: " + e.str()};
      }
    }
    for (const auto& entry : fs::recursive_directory_iterator(root / "a" / (cfg + "." + cmd))) {
      if (!entry.is_regular_file()) continue;
      const fs::path other = root / "b" / fs::relative(entry.path(), root / "a");
      ++files;
      if (slurp(entry.path()) != slurp(other) && mismatch.empty()) mismatch = entry.path().filename().string();
    }
  }
  fs::remove_all(root);
  return {mismatch.empty() && files > 0,
          std::to_string(files) + " files compared" + (mismatch.empty() ? ", all byte-identical" : ", differs: " + mismatch)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"derived-frequency fidelity", derived_frequencies},
      {"frequency-spectrum ordering and gaps at 0.1 Hz", spectrum_ordering},
      {"radius scaling exponents", radius_slopes},
      {"ERL/SQL crossing radius", crossing_radius},
      {"extrapolated SQL sensitivities", extrapolated_sensitivities},
      {"SQL identities", sql_identities},
      {"dynamics oracle equivalence", dynamics_equivalence},
      {"exclusion properties", exclusion_properties},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s [%zu] %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
