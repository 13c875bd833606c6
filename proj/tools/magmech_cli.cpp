// magmech: coupled-mode simulator for a driven cavity photon-magnon-phonon
// system. Subcommands compute reflection spectra, parameter sweeps, stability
// and lasing thresholds, elastic sphere modes, and single-parameter fits, all
// from one JSON config. Outputs are CSV tables plus a JSON run summary.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "magmech/magmech.hpp"

namespace fs = std::filesystem;
using namespace magmech;

namespace {

json params_to_json(const SystemParams& p) {
  return json{{"cavity_frequency_hz", rad_to_hz(p.omega_a)},
              {"cavity_linewidth_hz", half_rad_to_fwhm_hz(p.kappa_a)},
              {"cavity_external_linewidth_hz", half_rad_to_fwhm_hz(p.kappa_e)},
              {"magnon_frequency_hz", rad_to_hz(p.omega_m)},
              {"magnon_linewidth_hz", half_rad_to_fwhm_hz(p.kappa_m)},
              {"phonon_frequency_hz", rad_to_hz(p.omega_b)},
              {"phonon_linewidth_hz", half_rad_to_fwhm_hz(p.kappa_b)},
              {"g_ma_hz", rad_to_hz(p.g_ma)},
              {"g_mb_hz", rad_to_hz(p.g_mb)},
              {"gyro_hz_per_tesla", rad_to_hz(p.gamma_gyro)},
              {"bias_field_t", magnon_rad_to_field(p.omega_m, p.gamma_gyro)}};
}

std::string params_line(const SystemParams& p) { return params_to_json(p).dump(); }

struct Outputs {
  fs::path dir;
  json summary;

  explicit Outputs(const std::string& out_dir, const std::string& subcommand) : dir(out_dir) {
    fs::create_directories(dir);
    summary["schema"] = "magmech-summary-v1";
    summary["subcommand"] = subcommand;
  }

  std::string path(const std::string& name) const { return (dir / name).string(); }

  void finish() const {
    std::ofstream out(dir / "summary.json", std::ios::binary);
    out << summary.dump(2) << "\n";
  }
};

DriveTone resolve_drive(const RunConfig& rc, const PowerCalibration& cal) {
  const double watts = cal.effective_watts(dbm_to_watts(rc.drive_power_dbm));
  if (rc.drive_placement == "fixed") {
    DriveTone d;
    d.omega_d = hz_to_rad(rc.drive_frequency_hz);
    d.power = watts;
    return d;
  }
  return make_drive(rc.params, placement_from_name(rc.drive_placement), watts);
}

int run_spectrum(const RunConfig& rc, const PowerCalibration& cal, Outputs& out) {
  const SystemParams& p = rc.params;
  const DriveTone d = resolve_drive(rc, cal);
  std::vector<double> grid;
  json window_summary;
  if (rc.drive_placement == "fixed") {
    const HybridBasis h = hybridize(p);
    const double lo = h.omega_minus - 6.0 * h.kappa_minus;
    const double hi = h.omega_plus + 6.0 * h.kappa_plus;
    grid = linspace(lo, hi, std::max<std::size_t>(rc.probe_points, 64));
  } else {
    const DrivePlacement pl = placement_from_name(rc.drive_placement);
    const WindowFit wf = mmit_window(p, d, pl,
                                     WindowOptions{rc.probe_span_halfwidths, rc.probe_points});
    const double gamma = 0.5 * std::max(std::abs(wf.law_fwhm_exact), 0.2 * p.kappa_b);
    const double c0 = window_center(d, p, pl);
    grid = linspace(c0 - rc.probe_span_halfwidths * gamma,
                    c0 + rc.probe_span_halfwidths * gamma, rc.probe_points);
    window_summary = {{"center_hz", rad_to_hz(wf.center)},
                      {"fwhm_hz", rad_to_hz(wf.fwhm)},
                      {"law_fwhm_exact_hz", rad_to_hz(wf.law_fwhm_exact)},
                      {"law_fwhm_model_hz", rad_to_hz(wf.law_fwhm_model)},
                      {"peak_r2", wf.peak_r2},
                      {"fano_q", wf.lineshape.fano_q},
                      {"kind", wf.lineshape.kind == LineshapeKind::lorentzian ? "lorentzian"
                                                                              : "fano"},
                      {"C_model", wf.params.C_model},
                      {"C_exact", wf.params.C_exact}};
  }
  const Spectrum s = reflection_spectrum(p, d, grid);
  CsvWriter csv(out.path("spectrum.csv"), "spectrum",
                {"probe_hz", "re_r", "im_r", "abs_r", "abs_r2"}, params_line(p));
  for (std::size_t i = 0; i < s.probe_freqs.size(); ++i) {
    const cplx r = s.r[i];
    csv.write_row({rad_to_hz(s.probe_freqs[i]), r.real(), r.imag(), std::abs(r), std::norm(r)});
  }
  out.summary["drive"] = {{"power_dbm", rc.drive_power_dbm},
                          {"placement", rc.drive_placement},
                          {"frequency_hz", rad_to_hz(d.omega_d)}};
  if (!window_summary.is_null()) out.summary["window"] = window_summary;
  return 0;
}

int run_sweep(const RunConfig& rc, const PowerCalibration& cal, Outputs& out) {
  const json& sw = rc.raw.at("sweep");
  const std::string kind = sw.at("kind").get<std::string>();
  SweepRange range;
  range.start = sw.at("start").get<double>();
  range.stop = sw.at("stop").get<double>();
  range.points = sw.at("points").get<std::size_t>();
  range.scale = sw.at("scale").get<std::string>() == "log" ? SweepScale::log : SweepScale::linear;

  SweepSpec spec;
  spec.range = range;
  spec.baseline = rc.params;
  out.summary["sweep"] = {{"kind", kind}, {"points", range.points}};

  if (kind == "cooperativity") {
    spec.axis = SweepAxis::bias_field;
    spec.drive_power_watts = cal.effective_watts(dbm_to_watts(rc.drive_power_dbm));
    const auto pts = sweep_cooperativity_vs_field(spec);
    CsvWriter csv(out.path("cooperativity.csv"), "cooperativity_vs_field",
                  {"field_t", "magnon_hz", "theta_rad", "kappa_plus_hz", "kappa_minus_hz",
                   "G_plus_hz", "G_minus_hz", "C_plus", "C_minus", "ok"},
                  params_line(rc.params));
    for (const auto& pt : pts)
      csv.write_row({pt.field_tesla, rad_to_hz(pt.omega_m), pt.theta,
                     half_rad_to_fwhm_hz(pt.kappa_plus) / 2.0,
                     half_rad_to_fwhm_hz(pt.kappa_minus) / 2.0, rad_to_hz(pt.G_plus),
                     rad_to_hz(pt.G_minus), pt.C_plus, pt.C_minus, pt.ok ? 1.0 : 0.0});
    return 0;
  }
  if (kind == "linewidth") {
    spec.axis = SweepAxis::drive_power;
    for (bool blue : {false, true}) {
      const auto pts = sweep_linewidth_vs_power(spec, blue, cal);
      CsvWriter csv(out.path(blue ? "linewidth_blue.csv" : "linewidth_red.csv"),
                    "linewidth_vs_power",
                    {"power_dbm", "power_watts", "C_model", "C_exact", "fwhm_hz",
                     "center_hz", "law_fwhm_hz", "ok"},
                    params_line(rc.params));
      for (const auto& pt : pts)
        csv.write_row({pt.power_dbm, pt.power_watts, pt.C_model, pt.C_exact,
                       rad_to_hz(pt.fwhm), rad_to_hz(pt.center), rad_to_hz(pt.law_fwhm),
                       pt.ok ? 1.0 : 0.0});
      if (!pts.empty() && !pts.back().ok)
        out.summary[blue ? "blue_halt" : "red_halt"] = pts.back().error;
    }
    return 0;
  }
  if (kind == "reflectivity") {
    spec.axis = SweepAxis::drive_power;
    const Fig4dResult res = reproduce_fig4d(spec, cal);
    for (bool blue : {false, true}) {
      const auto& branch = blue ? res.blue : res.red;
      CsvWriter csv(out.path(blue ? "reflectivity_blue.csv" : "reflectivity_red.csv"),
                    "reflectivity_vs_power",
                    {"power_dbm", "power_watts", "C_exact", "abs_r_on_resonance",
                     "r_closed_form", "stable", "ok"},
                    params_line(rc.params));
      for (const auto& pt : branch)
        csv.write_row({pt.power_dbm, pt.power_watts, pt.C_exact, pt.r_on_resonance,
                       pt.r_closed_form, pt.stable ? 1.0 : 0.0, pt.ok ? 1.0 : 0.0});
    }
    if (res.threshold_power_dbm) {
      out.summary["instability_onset_dbm"] = *res.threshold_power_dbm;
      out.summary["instability_onset_flag"] = cal.calibrated ? "calibrated" : "predicted";
    }
    return 0;
  }
  throw validation_error("unknown sweep.kind '" + kind + "'");
}

int run_stability(const RunConfig& rc, const PowerCalibration& cal, Outputs& out) {
  const DriveTone d = resolve_drive(rc, cal);
  std::optional<DrivePlacement> pl;
  if (rc.drive_placement != "fixed") pl = placement_from_name(rc.drive_placement);
  const StabilityReport rep = stability_analysis(rc.params, d, pl);
  CsvWriter csv(out.path("eigenvalues.csv"), "jacobian_eigenvalues",
                {"re_per_s", "im_per_s"}, params_line(rc.params));
  for (const auto& ev : rep.eigenvalues) csv.write_row({ev.real(), ev.imag()});
  out.summary["stable"] = rep.stable;
  out.summary["max_re_eigenvalue_per_s"] = rep.max_real;
  if (rep.threshold_power) {
    out.summary["threshold_power_dbm"] = watts_to_dbm(*rep.threshold_power / cal.power_scale);
    out.summary["threshold_flag"] = cal.calibrated ? "calibrated" : "predicted";
    out.summary["C_at_threshold"] = *rep.predicted_C_at_threshold;
  }
  return 0;
}

int run_lasing(const RunConfig& rc, const PowerCalibration& cal, Outputs& out,
               const std::string& trajectory_path) {
  const json& lj = rc.raw.at("lasing");
  SystemParams p = rc.params;
  p.kappa_b = fwhm_hz_to_half_rad(lj.at("phonon_linewidth_hz").get<double>());
  const double span_db = lj.at("span_db").get<double>();
  const int points = lj.at("points").get<int>();
  if (points < 3) throw validation_error("config field 'lasing.points' must be >= 3");

  DriveTone probe = make_drive(p, DrivePlacement::blue_triple, 1e-6);
  const StabilityReport rep = stability_analysis(p, probe, DrivePlacement::blue_triple);
  const double p_th = *rep.threshold_power;

  std::vector<double> powers;
  for (int i = 0; i < points; ++i) {
    const double db = -span_db + 2.0 * span_db * i / (points - 1);
    powers.push_back(p_th * std::pow(10.0, db / 10.0));
  }
  LasingScanOptions opt;
  opt.seed_phonon = lj.at("seed_phonon").get<double>();
  const KneeScanResult knee = lasing_knee_scan(p, DrivePlacement::blue_triple, powers, opt);

  CsvWriter csv(out.path("lasing.csv"), "stokes_sideband_vs_power",
                {"power_dbm", "power_watts", "sideband_watts", "limit_cycle_hz", "settled",
                 "grew"},
                params_line(p));
  for (const auto& pt : knee.points)
    csv.write_row({watts_to_dbm(pt.power_watts / cal.power_scale), pt.power_watts,
                   pt.sideband_watts, rad_to_hz(pt.limit_cycle_freq), pt.settled ? 1.0 : 0.0,
                   pt.grew ? 1.0 : 0.0});
  out.summary["eigen_threshold_watts"] = p_th;
  out.summary["knee_threshold_watts"] = knee.knee_power;
  out.summary["relative_mismatch"] = std::abs(knee.knee_power - p_th) / p_th;
  out.summary["C_at_threshold"] = *rep.predicted_C_at_threshold;

  if (!trajectory_path.empty()) {
    const DriveTone d = make_drive(p, DrivePlacement::blue_triple, powers.back());
    const OperatingPoint op = steady_state(p, d);
    StateVector y0;
    y0.a = op.a;
    y0.m = op.m;
    y0.b = op.b + opt.seed_phonon;
    IntegrateOptions io;
    io.sample_stride = 10;
    const Trajectory tr = integrate(p, d, y0, 2000.0 * two_pi / p.omega_b, 0.0, io);
    CsvWriter tcsv(trajectory_path, "trajectory",
                   {"t_s", "re_a", "im_a", "re_m", "im_m", "re_b", "im_b"}, params_line(p));
    for (const auto& s : tr.samples)
      tcsv.write_row({s.t, s.a.real(), s.a.imag(), s.m.real(), s.m.imag(), s.b.real(),
                      s.b.imag()});
  }
  return 0;
}

int run_modes(const RunConfig& rc, Outputs& out) {
  const json& mj = rc.raw.at("modes");
  const auto catalog =
      mode_catalog(rc.sphere, mj.at("l_max").get<int>(), mj.at("n_max").get<int>());
  CsvWriter csv(out.path("modes.csv"), "spheroidal_modes",
                {"n", "l", "m_a", "frequency_hz"});
  for (const auto& m : catalog)
    csv.write_row({static_cast<double>(m.n), static_cast<double>(m.l),
                   static_cast<double>(m.m_a), m.frequency});
  out.summary["sphere"] = {{"diameter_m", rc.sphere.diameter},
                           {"density_kg_m3", rc.sphere.density},
                           {"v_longitudinal_m_s", rc.sphere.v_longitudinal},
                           {"v_transverse_m_s", rc.sphere.v_transverse}};
  out.summary["g_mb_estimate_hz"] = rad_to_hz(coupling_vs_diameter(rc.sphere.diameter));
  return 0;
}

int run_fit(const RunConfig& rc, const PowerCalibration& cal, Outputs& out) {
  const std::string path = rc.raw.at("fit").at("data_csv").get<std::string>();
  if (path.empty()) throw validation_error("config field 'fit.data_csv' is required");
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open fit data '" + path + "'");
  std::vector<double> fields, coops;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (line.find_first_of("0123456789") == std::string::npos) continue;  // header
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw validation_error("fit data must be 'field_t,cooperativity' CSV");
    fields.push_back(std::stod(line.substr(0, comma)));
    coops.push_back(std::stod(line.substr(comma + 1)));
  }
  const DrivePlacement pl = rc.drive_placement == "fixed"
                                ? DrivePlacement::red_locked
                                : placement_from_name(rc.drive_placement);
  const FitOutcome fit = fit_gmb_from_cooperativity(
      fields, coops, rc.params, pl,
      cal.effective_watts(dbm_to_watts(rc.drive_power_dbm)));
  out.summary["fit"] = {{"parameter", fit.parameter},
                        {"value_hz", rad_to_hz(fit.value)},
                        {"std_error_hz", rad_to_hz(fit.std_error)},
                        {"residual_norm", fit.residual_norm},
                        {"converged", fit.converged}};
  if (!fit.converged) {
    out.finish();
    std::cerr << "fit did not converge\n";
    return 2;
  }
  return 0;
}

int run_calibrate(const RunConfig& rc, Outputs& out, const std::string& calib_path) {
  const json& cj = rc.raw.at("calibration");
  const PowerCalibration cal = calibrate_power_scale(
      rc.params, placement_from_name(cj.at("placement").get<std::string>()),
      cj.at("anchor_power_dbm").get<double>(), cj.at("anchor_cooperativity").get<double>());
  const std::string path = calib_path.empty() ? out.path("calibration.json") : calib_path;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw validation_error("cannot write calibration file '" + path + "'");
  f << calibration_to_json(cal).dump(2) << "\n";
  out.summary["calibration"] = calibration_to_json(cal);
  out.summary["calibration_file"] = path;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coupled-mode cavity magnomechanics simulator"};
  app.require_subcommand(1);

  std::optional<std::string> config_path;
  std::string out_dir = ".";
  std::string calib_path;
  std::string trajectory_path;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--calibration", calib_path, "calibration sidecar file");
  app.add_option("--set", overrides, "override config values as dotted.path=value");

  auto* sc_spectrum = app.add_subcommand("spectrum", "probe reflection spectrum");
  auto* sc_sweep = app.add_subcommand("sweep", "parameter sweep (config sweep.kind)");
  auto* sc_stability = app.add_subcommand("stability", "fixed-point stability report");
  auto* sc_lasing = app.add_subcommand("lasing", "time-domain Stokes sideband knee scan");
  sc_lasing->add_option("--export-trajectory", trajectory_path,
                        "write the last trajectory as CSV");
  auto* sc_modes = app.add_subcommand("modes", "elastic sphere mode catalog");
  auto* sc_fit = app.add_subcommand("fit", "fit g_mb from (field, cooperativity) data");
  auto* sc_calibrate = app.add_subcommand("calibrate", "fit the drive power scale");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const RunConfig rc = load_config(config_path, overrides);
    PowerCalibration cal;
    if (!calib_path.empty() && fs::exists(calib_path))
      cal = calibration_from_json(load_json_file(calib_path));

    const std::string name = app.get_subcommands().front()->get_name();
    Outputs out(out_dir, name);
    out.summary["params"] = params_to_json(rc.params);
    out.summary["calibrated"] = cal.calibrated;
    out.summary["power_scale"] = cal.power_scale;

    int code = 0;
    if (sc_spectrum->parsed()) code = run_spectrum(rc, cal, out);
    else if (sc_sweep->parsed()) code = run_sweep(rc, cal, out);
    else if (sc_stability->parsed()) code = run_stability(rc, cal, out);
    else if (sc_lasing->parsed()) code = run_lasing(rc, cal, out, trajectory_path);
    else if (sc_modes->parsed()) code = run_modes(rc, out);
    else if (sc_fit->parsed()) code = run_fit(rc, cal, out);
    else if (sc_calibrate->parsed()) code = run_calibrate(rc, out, calib_path);
    if (code == 0) out.finish();
    return code;
  } catch (const validation_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const instability_error& e) {
    std::cerr << "physics error: " << e.what() << "\n";
    return 2;
  } catch (const divergence_error& e) {
    std::cerr << "physics error: " << e.what() << "\n";
    return 2;
  } catch (const convergence_error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const fit_error& e) {
    std::cerr << "fit error: " << e.what() << "\n";
    return 2;
  } catch (const root_bracket_error& e) {
    std::cerr << "root-finding error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
