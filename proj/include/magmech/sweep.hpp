#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "magmech/stability.hpp"
#include "magmech/window.hpp"

namespace magmech {

enum class SweepAxis { bias_field, drive_power, drive_detuning, probe_grid };
enum class SweepScale { linear, log };
enum class DetuningRule { locked, fixed_drive };  // lock Delta_d+- = -+omega_b, or keep omega_d

struct SweepRange {
  double start = 0.0, stop = 0.0;
  std::size_t points = 2;
  SweepScale scale = SweepScale::linear;

  void validate() const {
    if (points < 2) throw validation_error("sweep.points must be >= 2");
    if (!std::isfinite(start) || !std::isfinite(stop))
      throw validation_error("sweep bounds must be finite");
    if (scale == SweepScale::log && !(start > 0.0 && stop > 0.0))
      throw validation_error("log sweep bounds must be positive");
  }

  std::vector<double> grid() const {
    validate();
    std::vector<double> g(points);
    if (scale == SweepScale::linear) {
      const double step = (stop - start) / static_cast<double>(points - 1);
      for (std::size_t i = 0; i < points; ++i) g[i] = start + step * static_cast<double>(i);
    } else {
      const double step = std::log(stop / start) / static_cast<double>(points - 1);
      for (std::size_t i = 0; i < points; ++i)
        g[i] = start * std::exp(step * static_cast<double>(i));
    }
    return g;
  }
};

struct SweepSpec {
  SweepAxis axis = SweepAxis::bias_field;
  SweepRange range;
  SystemParams baseline;
  double drive_power_watts = 0.0;
  DetuningRule detuning_rule = DetuningRule::locked;
  double fixed_drive_frequency = 0.0;  // rad/s, for DetuningRule::fixed_drive
};

// Drive-line power scale fitted once against a published cooperativity point;
// all other power-dependent claims become predictions.
struct PowerCalibration {
  double power_scale = 1.0;
  bool calibrated = false;
  double anchor_power_dbm = 0.0;
  double anchor_cooperativity = 0.0;
  std::string placement;

  double effective_watts(double device_watts) const { return power_scale * device_watts; }
};

inline const char* placement_name(DrivePlacement pl) {
  switch (pl) {
    case DrivePlacement::red_locked: return "red_locked";
    case DrivePlacement::blue_locked: return "blue_locked";
    case DrivePlacement::red_triple: return "red_triple";
    case DrivePlacement::blue_triple: return "blue_triple";
  }
  return "?";
}

inline DrivePlacement placement_from_name(const std::string& s) {
  if (s == "red_locked") return DrivePlacement::red_locked;
  if (s == "blue_locked") return DrivePlacement::blue_locked;
  if (s == "red_triple") return DrivePlacement::red_triple;
  if (s == "blue_triple") return DrivePlacement::blue_triple;
  throw validation_error("unknown drive placement '" + s + "'");
}

inline PowerCalibration calibrate_power_scale(const SystemParams& p, DrivePlacement pl,
                                              double anchor_dbm, double anchor_C) {
  if (!(anchor_C > 0.0)) throw validation_error("calibration cooperativity must be positive");
  DriveTone d = make_drive(p, pl, dbm_to_watts(anchor_dbm));
  const double c_raw = window_params(p, d, pl).C_exact;
  if (!(c_raw > 0.0)) throw validation_error("calibration point has vanishing cooperativity");
  PowerCalibration cal;
  cal.power_scale = anchor_C / c_raw;  // C is linear in drive power
  cal.calibrated = true;
  cal.anchor_power_dbm = anchor_dbm;
  cal.anchor_cooperativity = anchor_C;
  cal.placement = placement_name(pl);
  return cal;
}

// ---------------------------------------------------------------------------
// Cooperativity vs bias field (both detuning branches, drive power fixed,
// drive re-locked to Delta_d+- = -+omega_b at every point).
// ---------------------------------------------------------------------------

struct CooperativityPoint {
  double field_tesla = 0.0;
  double omega_m = 0.0;
  double theta = 0.0;
  double kappa_plus = 0.0, kappa_minus = 0.0;
  double G_plus = 0.0, G_minus = 0.0;
  double C_plus = 0.0, C_minus = 0.0;
  bool ok = true;
  std::string error;
};

inline std::vector<CooperativityPoint> sweep_cooperativity_vs_field(const SweepSpec& spec) {
  if (spec.axis != SweepAxis::bias_field)
    throw validation_error("sweep_cooperativity_vs_field: axis must be bias_field");
  std::vector<CooperativityPoint> out;
  for (double h_field : spec.range.grid()) {
    CooperativityPoint pt;
    pt.field_tesla = h_field;
    try {
      const SystemParams p = with_bias_field(spec.baseline, h_field);
      const HybridBasis h = hybridize(p);
      pt.omega_m = p.omega_m;
      pt.theta = h.theta;
      pt.kappa_plus = h.kappa_plus;
      pt.kappa_minus = h.kappa_minus;
      DriveTone red = make_drive(p, DrivePlacement::red_locked, spec.drive_power_watts);
      DriveTone blue = make_drive(p, DrivePlacement::blue_locked, spec.drive_power_watts);
      const DriveResponse rr = drive_response(p, h, red);
      const DriveResponse rb = drive_response(p, h, blue);
      pt.G_minus = rr.G_minus;
      pt.C_minus = rr.C_minus;
      pt.G_plus = rb.G_plus;
      pt.C_plus = rb.C_plus;
    } catch (const std::exception& e) {
      pt.ok = false;
      pt.error = e.what();
    }
    out.push_back(pt);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Single-parameter g_mb extraction from a measured (H, C) curve. C scales as
// g_mb^2 exactly, so least squares over g_mb alone has a closed form.
// ---------------------------------------------------------------------------

struct FitOutcome {
  std::string parameter = "g_mb";
  double value = 0.0;
  double std_error = 0.0;
  double residual_norm = 0.0;
  bool converged = false;
};

inline FitOutcome fit_gmb_from_cooperativity(const std::vector<double>& field_tesla,
                                             const std::vector<double>& coop,
                                             SystemParams baseline,
                                             DrivePlacement pl, double power_watts) {
  FitOutcome out;
  if (field_tesla.size() != coop.size() || field_tesla.size() < 5) {
    out.converged = false;
    return out;
  }
  const double g_ref = baseline.g_mb > 0.0 ? baseline.g_mb : two_pi * 1e-3;
  baseline.g_mb = g_ref;
  std::vector<double> basis(field_tesla.size());
  for (std::size_t i = 0; i < field_tesla.size(); ++i) {
    const SystemParams p = with_bias_field(baseline, field_tesla[i]);
    const HybridBasis h = hybridize(p);
    const DriveTone d = make_drive(p, pl, power_watts);
    const DriveResponse r = drive_response(p, h, d);
    basis[i] = is_blue(pl) ? r.C_plus : r.C_minus;  // C at g_mb = g_ref
  }
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    num += basis[i] * coop[i];
    den += basis[i] * basis[i];
  }
  if (!(den > 0.0) || !(num > 0.0)) {
    out.converged = false;
    return out;
  }
  const double ratio2 = num / den;  // (g / g_ref)^2
  out.value = g_ref * std::sqrt(ratio2);
  double rss = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const double resid = coop[i] - ratio2 * basis[i];
    rss += resid * resid;
  }
  out.residual_norm = std::sqrt(rss);
  const double dof = std::max(1.0, static_cast<double>(basis.size()) - 1.0);
  const double var_ratio2 = rss / dof / den;
  out.std_error = (ratio2 > 0.0) ? out.value * 0.5 * std::sqrt(var_ratio2) / ratio2 : 0.0;
  out.converged = std::isfinite(out.value) && out.value > 0.0;
  return out;
}

// ---------------------------------------------------------------------------
// Triple-resonance power sweeps (Fig. 4 style runs)
// ---------------------------------------------------------------------------

struct LinewidthPoint {
  double power_dbm = 0.0;
  double power_watts = 0.0;
  double C_model = 0.0, C_exact = 0.0;
  double fwhm = 0.0;    // rad/s, fitted
  double center = 0.0;  // rad/s
  double law_fwhm = 0.0;
  bool ok = true;
  std::string error;
};

inline void require_triple_resonance(const SystemParams& p) {
  const double split = std::sqrt(4.0 * p.g_ma * p.g_ma +
                                 p.detuning_ma() * p.detuning_ma());
  if (std::abs(split - p.omega_b) > 1e-6 * p.omega_b ||
      std::abs(p.detuning_ma()) > 1e-9 * p.omega_a)
    throw validation_error(
        "triple-resonance sweep requires Delta_ma = 0 and hybrid splitting = omega_b");
}

// Window linewidth vs drive power: widths grow as 2 kb (1 + C) on the red
// branch and shrink as 2 kb (1 - C) on the blue one; the blue sweep stops
// with an instability record once C >= 1.
inline std::vector<LinewidthPoint> sweep_linewidth_vs_power(
    const SweepSpec& spec, bool blue, const PowerCalibration& cal = {}) {
  if (spec.axis != SweepAxis::drive_power)
    throw validation_error("sweep_linewidth_vs_power: axis must be drive_power");
  require_triple_resonance(spec.baseline);
  const DrivePlacement pl = blue ? DrivePlacement::blue_triple : DrivePlacement::red_triple;
  std::vector<LinewidthPoint> out;
  for (double dbm : spec.range.grid()) {
    LinewidthPoint pt;
    pt.power_dbm = dbm;
    pt.power_watts = cal.effective_watts(dbm_to_watts(dbm));
    try {
      const DriveTone d = make_drive(spec.baseline, pl, pt.power_watts);
      const WindowFit wf = mmit_window(spec.baseline, d, pl);
      pt.C_model = wf.params.C_model;
      pt.C_exact = wf.params.C_exact;
      pt.fwhm = wf.fwhm;
      pt.center = wf.center;
      pt.law_fwhm = wf.law_fwhm_exact;
    } catch (const instability_error& e) {
      pt.ok = false;
      pt.error = e.what();
      out.push_back(pt);
      break;  // past threshold, stop the branch
    } catch (const std::exception& e) {
      pt.ok = false;
      pt.error = e.what();
    }
    out.push_back(pt);
  }
  return out;
}

struct ReflectivityPoint {
  double power_dbm = 0.0;
  double power_watts = 0.0;
  double C_exact = 0.0;
  double r_on_resonance = 0.0;      // |r| at the window center, full solver
  double r_closed_form = 0.0;       // Eq-form prediction, signed
  bool stable = true;
  bool ok = true;
  std::string error;
};

struct Fig4dResult {
  std::vector<ReflectivityPoint> red;
  std::vector<ReflectivityPoint> blue;
  std::optional<double> threshold_power_watts;  // blue instability onset
  std::optional<double> threshold_power_dbm;
};

// On-resonance reflectivity vs drive power for both branches; the blue branch
// dips through critical coupling and diverges toward C -> 1, where the
// stability analysis marks the instability onset.
inline Fig4dResult reproduce_fig4d(const SweepSpec& spec, const PowerCalibration& cal = {}) {
  if (spec.axis != SweepAxis::drive_power)
    throw validation_error("reproduce_fig4d: axis must be drive_power");
  require_triple_resonance(spec.baseline);
  Fig4dResult res;
  for (bool blue : {false, true}) {
    const DrivePlacement pl = blue ? DrivePlacement::blue_triple : DrivePlacement::red_triple;
    auto& branch = blue ? res.blue : res.red;
    for (double dbm : spec.range.grid()) {
      ReflectivityPoint pt;
      pt.power_dbm = dbm;
      pt.power_watts = cal.effective_watts(dbm_to_watts(dbm));
      try {
        const DriveTone d = make_drive(spec.baseline, pl, pt.power_watts);
        const WindowParams wp = window_params(spec.baseline, d, pl);
        pt.C_exact = wp.C_exact;
        pt.r_closed_form =
            on_resonance_reflectivity(wp.C_exact, wp.kappa_e_w, wp.kappa_w, blue);
        if (pt.power_watts > 0.0) {
          const WindowFit wf = mmit_window(spec.baseline, d, pl);
          pt.r_on_resonance = std::sqrt(std::max(wf.peak_r2, 0.0));
        } else {
          pt.r_on_resonance = std::abs(pt.r_closed_form);
        }
      } catch (const instability_error& e) {
        pt.stable = false;
        pt.ok = false;
        pt.error = e.what();
      } catch (const std::exception& e) {
        pt.ok = false;
        pt.error = e.what();
      }
      branch.push_back(pt);
      if (!pt.stable) break;
    }
  }
  DriveTone probe_drive = make_drive(spec.baseline, DrivePlacement::blue_triple,
                                     cal.effective_watts(1e-6));
  const StabilityReport rep =
      stability_analysis(spec.baseline, probe_drive, DrivePlacement::blue_triple);
  if (rep.threshold_power) {
    res.threshold_power_watts = rep.threshold_power;
    res.threshold_power_dbm = watts_to_dbm(*rep.threshold_power / cal.power_scale);
  }
  return res;
}

}  // namespace magmech
