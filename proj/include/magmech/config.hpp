#pragma once

#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "magmech/elastic.hpp"
#include "magmech/params.hpp"
#include "magmech/sweep.hpp"

namespace magmech {

using json = nlohmann::json;

// Config file units follow the quoting conventions of the measurements:
// frequencies and couplings as f = omega/2pi in Hz, linewidths as full widths
// (2 kappa / 2pi) in Hz, powers in dBm, fields in tesla, lengths in meters.
inline json default_config() {
  return json{
      {"cavity",
       {{"frequency_hz", 7.86e9},
        {"linewidth_hz", 3.35e6},
        {"external_linewidth_hz", 1.675e6}}},
      {"magnon", {{"linewidth_hz", 1.12e6}, {"frequency_hz", 7.86e9}}},
      {"phonon", {{"frequency_hz", 11.42e6}, {"linewidth_hz", 300.0}}},
      {"coupling", {{"g_ma_hz", 5.71e6}, {"g_mb_hz", 4.1e-3}}},
      {"gyro_hz_per_tesla", 28.0e9},
      {"sphere",
       {{"diameter_m", 250e-6},
        {"density_kg_m3", 5170.0},
        {"v_longitudinal_m_s", 7213.2},
        {"v_transverse_m_s", 3844.2},
        {"calibrate_to_anchor", true},
        {"anchor_frequency_hz", 11.42e6},
        {"anchor_diameter_m", 250e-6}}},
      {"drive", {{"power_dbm", 0.0}, {"placement", "red_triple"}, {"frequency_hz", 0.0}}},
      {"probe", {{"span_halfwidths", 8.0}, {"points", 481}}},
      {"sweep",
       {{"axis", "drive_power"},
        {"kind", "linewidth"},
        {"start", -10.0},
        {"stop", 8.0},
        {"points", 10},
        {"scale", "linear"},
        {"detuning_rule", "locked"}}},
      {"modes", {{"l_max", 4}, {"n_max", 3}}},
      {"calibration",
       {{"anchor_power_dbm", 8.0}, {"anchor_cooperativity", 2.4}, {"placement", "red_triple"}}},
      {"lasing",
       {{"span_db", 1.5}, {"points", 9}, {"phonon_linewidth_hz", 3000.0},
        {"seed_phonon", 1e4}}},
      {"fit", {{"data_csv", ""}}}};
}

namespace config_detail {

inline void merge(json& base, const json& overlay, const std::string& path) {
  for (auto it = overlay.begin(); it != overlay.end(); ++it) {
    const std::string here = path.empty() ? it.key() : path + "." + it.key();
    if (!base.contains(it.key()))
      throw validation_error("unknown config field '" + here + "'");
    if (it->is_object() && base[it.key()].is_object())
      merge(base[it.key()], *it, here);
    else if (it->is_object() != base[it.key()].is_object())
      throw validation_error("config field '" + here + "' has the wrong shape");
    else
      base[it.key()] = *it;
  }
}

inline double require_positive(const json& j, const std::string& path) {
  const json* cur = &j;
  std::istringstream ss(path);
  std::string part;
  while (std::getline(ss, part, '.')) {
    if (!cur->contains(part))
      throw validation_error("missing config field '" + path + "'");
    cur = &(*cur)[part];
  }
  if (!cur->is_number())
    throw validation_error("config field '" + path + "' must be a number");
  const double v = cur->get<double>();
  if (!(v > 0.0) || !std::isfinite(v))
    throw validation_error("config field '" + path + "' must be strictly positive");
  return v;
}

}  // namespace config_detail

struct RunConfig {
  json raw;

  SystemParams params;
  ElasticSphere sphere;
  double drive_power_dbm = 0.0;
  std::string drive_placement = "red_triple";
  double drive_frequency_hz = 0.0;  // used when placement == "fixed"
  double probe_span_halfwidths = 8.0;
  std::size_t probe_points = 481;
};

inline RunConfig parse_config(json merged) {
  RunConfig rc;

  SystemParams& p = rc.params;
  p.omega_a = hz_to_rad(config_detail::require_positive(merged, "cavity.frequency_hz"));
  p.kappa_a = fwhm_hz_to_half_rad(config_detail::require_positive(merged, "cavity.linewidth_hz"));
  p.kappa_e =
      fwhm_hz_to_half_rad(config_detail::require_positive(merged, "cavity.external_linewidth_hz"));
  p.kappa_m = fwhm_hz_to_half_rad(config_detail::require_positive(merged, "magnon.linewidth_hz"));
  p.omega_b = hz_to_rad(config_detail::require_positive(merged, "phonon.frequency_hz"));
  p.kappa_b = fwhm_hz_to_half_rad(config_detail::require_positive(merged, "phonon.linewidth_hz"));
  p.g_ma = hz_to_rad(config_detail::require_positive(merged, "coupling.g_ma_hz"));
  p.g_mb = hz_to_rad(config_detail::require_positive(merged, "coupling.g_mb_hz"));
  p.gamma_gyro = hz_to_rad(config_detail::require_positive(merged, "gyro_hz_per_tesla"));

  const json& magnon = merged.at("magnon");
  if (magnon.contains("bias_field_t") && magnon.contains("frequency_hz"))
    throw validation_error(
        "config fields 'magnon.bias_field_t' and 'magnon.frequency_hz' are exclusive");
  if (magnon.contains("bias_field_t")) {
    const double h_field = magnon.at("bias_field_t").get<double>();
    p.omega_m = magnon_frequency(h_field, p.gamma_gyro);
  } else {
    p.omega_m = hz_to_rad(config_detail::require_positive(merged, "magnon.frequency_hz"));
  }
  p.validate();

  ElasticSphere& s = rc.sphere;
  s.diameter = config_detail::require_positive(merged, "sphere.diameter_m");
  s.density = config_detail::require_positive(merged, "sphere.density_kg_m3");
  s.v_longitudinal = config_detail::require_positive(merged, "sphere.v_longitudinal_m_s");
  s.v_transverse = config_detail::require_positive(merged, "sphere.v_transverse_m_s");
  s.validate();
  if (merged.at("sphere").value("calibrate_to_anchor", false)) {
    const double f_ref = config_detail::require_positive(merged, "sphere.anchor_frequency_hz");
    const double d_ref = config_detail::require_positive(merged, "sphere.anchor_diameter_m");
    const double d = s.diameter;
    s = calibrate_velocity(s, f_ref, d_ref);
    s.diameter = d;
  }

  const json& drive = merged.at("drive");
  rc.drive_power_dbm = drive.at("power_dbm").get<double>();
  rc.drive_placement = drive.at("placement").get<std::string>();
  rc.drive_frequency_hz = drive.at("frequency_hz").get<double>();
  if (rc.drive_placement != "fixed") (void)placement_from_name(rc.drive_placement);
  else if (!(rc.drive_frequency_hz > 0.0))
    throw validation_error("config field 'drive.frequency_hz' required for fixed placement");

  rc.probe_span_halfwidths = config_detail::require_positive(merged, "probe.span_halfwidths");
  rc.probe_points = static_cast<std::size_t>(
      config_detail::require_positive(merged, "probe.points"));
  if (rc.probe_points < 16) throw validation_error("config field 'probe.points' must be >= 16");

  rc.raw = std::move(merged);
  return rc;
}

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw validation_error("config parse error in '" + path + "': " + e.what());
  }
  return j;
}

// defaults <- file <- --set overrides (dotted paths, values parsed as JSON)
inline RunConfig load_config(const std::optional<std::string>& file,
                             const std::vector<std::string>& overrides) {
  json merged = default_config();
  if (file) config_detail::merge(merged, load_json_file(*file), "");
  for (const std::string& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw validation_error("--set expects key=value, got '" + kv + "'");
    const std::string key = kv.substr(0, eq);
    const std::string val = kv.substr(eq + 1);
    json leaf;
    try {
      leaf = json::parse(val);
    } catch (const json::parse_error&) {
      leaf = val;  // plain string
    }
    json patch = leaf;
    std::vector<std::string> parts;
    std::istringstream ss(key);
    std::string part;
    while (std::getline(ss, part, '.')) parts.push_back(part);
    if (parts.empty()) throw validation_error("--set key must be non-empty");
    for (auto it = parts.rbegin(); it != parts.rend(); ++it)
      patch = json{{*it, patch}};
    config_detail::merge(merged, patch, "");
  }
  return parse_config(std::move(merged));
}

// ---------------------------------------------------------------------------
// Calibration sidecar
// ---------------------------------------------------------------------------

inline json calibration_to_json(const PowerCalibration& cal) {
  return json{{"schema", "magmech-calibration-v1"},
              {"power_scale", cal.power_scale},
              {"anchor_power_dbm", cal.anchor_power_dbm},
              {"anchor_cooperativity", cal.anchor_cooperativity},
              {"placement", cal.placement}};
}

inline PowerCalibration calibration_from_json(const json& j) {
  if (j.value("schema", "") != "magmech-calibration-v1")
    throw validation_error("calibration file has an unknown schema");
  PowerCalibration cal;
  cal.power_scale = j.at("power_scale").get<double>();
  cal.anchor_power_dbm = j.at("anchor_power_dbm").get<double>();
  cal.anchor_cooperativity = j.at("anchor_cooperativity").get<double>();
  cal.placement = j.at("placement").get<std::string>();
  cal.calibrated = true;
  if (!(cal.power_scale > 0.0)) throw validation_error("calibration power_scale must be positive");
  return cal;
}

}  // namespace magmech
