#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "magmech/drift.hpp"
#include "magmech/dynamics.hpp"
#include "magmech/spectrum.hpp"

namespace magmech {

struct StabilityReport {
  std::array<cplx, 6> eigenvalues{};
  double max_real = 0.0;
  bool stable = false;
  std::optional<double> threshold_power;      // watts, blue-type drives only
  std::optional<double> predicted_C_at_threshold;  // exact cooperativity at P_th
};

inline std::array<cplx, 6> jacobian_eigenvalues(const SystemParams& p, const DriveTone& d) {
  const OperatingPoint op = steady_state(p, d);
  const Matrix6c M = drift_matrix(p, d, op);
  Eigen::ComplexEigenSolver<Matrix6c> es(M, false);
  std::array<cplx, 6> out;
  for (int i = 0; i < 6; ++i) out[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
  std::sort(out.begin(), out.end(),
            [](const cplx& x, const cplx& y) { return x.real() > y.real(); });
  return out;
}

namespace detail {

inline double max_real_eigenvalue(const SystemParams& p, const DriveTone& d) {
  return jacobian_eigenvalues(p, d)[0].real();
}

}  // namespace detail

// Linear stability of the drive-set fixed point, plus the self-oscillation
// threshold for blue-type placements. The threshold is located by bisection
// on drive power (0.1% relative) where max Re(lambda) crosses zero; the
// Stokes-sideband knee is only a cross-check of this number.
inline StabilityReport stability_analysis(const SystemParams& p, const DriveTone& d,
                                          std::optional<DrivePlacement> placement = {}) {
  StabilityReport rep;
  rep.eigenvalues = jacobian_eigenvalues(p, d);
  rep.max_real = rep.eigenvalues[0].real();
  rep.stable = rep.max_real < 0.0;

  if (placement && is_blue(*placement)) {
    // bracket: walk up from the current power (or a small one) until unstable
    double lo = (d.power > 0.0) ? d.power : 1e-9;
    DriveTone t = d;
    t.power = lo;
    while (detail::max_real_eigenvalue(p, t) >= 0.0) {
      t.power /= 4.0;
      if (t.power < 1e-30) throw convergence_error("stability: no stable power found");
    }
    lo = t.power;
    double hi = lo;
    for (int i = 0; i < 200; ++i) {
      hi *= 2.0;
      t.power = hi;
      if (detail::max_real_eigenvalue(p, t) >= 0.0) break;
      lo = hi;
      if (i == 199) throw convergence_error("stability: no instability below bracket cap");
    }
    while ((hi - lo) / hi > 1e-3) {
      const double mid = std::sqrt(lo * hi);
      t.power = mid;
      (detail::max_real_eigenvalue(p, t) >= 0.0 ? hi : lo) = mid;
    }
    const double p_th = std::sqrt(lo * hi);
    rep.threshold_power = p_th;
    t.power = p_th;
    rep.predicted_C_at_threshold = window_params(p, t, *placement).C_exact;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Time-domain lasing scan: seed a phonon fluctuation on top of the fixed
// point and watch the Stokes sideband switch on across threshold.
// ---------------------------------------------------------------------------

struct LasingPoint {
  double power_watts = 0.0;
  double sideband_watts = 0.0;
  double limit_cycle_freq = 0.0;
  bool settled = true;
  bool grew = false;  // phonon amplitude grew from the seed
};

struct LasingScanOptions {
  double seed_phonon = 1e4;       // |b(0)| seeded on the fixed point
  double grow_efolds = 25.0;      // integration horizon in units of 1/|rate|
  double min_time = 2e-3;         // seconds
  double max_time = 0.6;          // cap per point
  int sample_stride = 6;
  double analysis_periods = 400;  // phonon periods in the spectral window
};

inline LasingPoint run_lasing_point(const SystemParams& p, const DriveTone& d,
                                    double rate_guess, const LasingScanOptions& opt = {}) {
  LasingPoint out;
  out.power_watts = d.power;

  StateVector y0;
  try {
    const OperatingPoint op = steady_state(p, d);
    y0.a = op.a;
    y0.m = op.m;
    y0.b = op.b + opt.seed_phonon;
  } catch (const convergence_error&) {
    y0.b = opt.seed_phonon;
  }

  const double horizon = std::clamp(
      opt.grow_efolds / std::max(std::abs(rate_guess), 1e-2), opt.min_time, opt.max_time);
  const double dt = two_pi / (50.0 * p.omega_b);
  const double t_window = opt.analysis_periods * two_pi / p.omega_b;

  IntegrateOptions io;
  io.sample_stride = opt.sample_stride;
  Trajectory tail;
  tail.dt = dt;
  tail.sample_dt = dt * opt.sample_stride;
  tail.kappa_e = p.kappa_e;
  tail.omega_d = d.omega_d;
  const std::size_t keep =
      static_cast<std::size_t>(t_window / tail.sample_dt) + 1;
  std::vector<StateVector> ring(keep);
  std::size_t head = 0, filled = 0;
  double b_mid = 0.0;
  bool have_mid = false;
  try {
    integrate_callback(p, d, y0, horizon, io, [&](const StateVector& s) {
      if (!have_mid && s.t >= 0.5 * horizon) {
        b_mid = std::abs(s.b);
        have_mid = true;
      }
      ring[head] = s;
      head = (head + 1) % keep;
      if (filled < keep) ++filled;
    });
  } catch (const divergence_error&) {
    out.grew = true;
    out.sideband_watts = std::numeric_limits<double>::infinity();
    return out;
  }
  tail.samples.reserve(filled);
  for (std::size_t i = 0; i < filled; ++i)
    tail.samples.push_back(ring[(head + keep - filled + i) % keep]);
  const double b_end = std::abs(tail.samples.back().b);
  out.grew = b_end > 3.0 * opt.seed_phonon && b_end > b_mid;

  const SidebandEstimate est = stokes_sideband_power(tail, p, d);
  out.sideband_watts = est.power_watts;
  out.limit_cycle_freq = est.limit_cycle_freq;
  out.settled = est.settled;
  return out;
}

struct KneeScanResult {
  std::vector<LasingPoint> points;
  double knee_power = 0.0;  // watts, midpoint of the quiet/loud bracket
};

// Sweep drive power across the expected threshold and locate the sideband
// knee as the first point whose band power jumps above the numerical floor.
inline KneeScanResult lasing_knee_scan(const SystemParams& p, DrivePlacement pl,
                                       const std::vector<double>& powers_watts,
                                       const LasingScanOptions& opt = {}) {
  if (powers_watts.size() < 3)
    throw validation_error("lasing_knee_scan: need at least 3 powers");
  KneeScanResult res;
  const HybridBasis h = hybridize(p);
  for (double pw : powers_watts) {
    DriveTone d;
    d.omega_d = drive_frequency(h, p, pl);
    d.power = pw;
    const WindowParams wp = window_params(p, d, pl);
    const double rate = p.kappa_b * (wp.C_exact - 1.0);
    res.points.push_back(run_lasing_point(p, d, rate, opt));
  }
  // floor from the quietest points, then the first decisive jump
  std::vector<double> vals;
  for (const auto& pt : res.points)
    if (std::isfinite(pt.sideband_watts)) vals.push_back(pt.sideband_watts);
  std::sort(vals.begin(), vals.end());
  const double floor = vals.empty() ? 0.0 : vals[vals.size() / 4];
  for (std::size_t i = 0; i + 1 < res.points.size(); ++i) {
    const bool quiet = res.points[i].sideband_watts <= 1e3 * floor && !res.points[i].grew;
    const bool loud = res.points[i + 1].sideband_watts > 1e3 * floor || res.points[i + 1].grew;
    if (quiet && loud) {
      res.knee_power = std::sqrt(res.points[i].power_watts * res.points[i + 1].power_watts);
      return res;
    }
  }
  throw convergence_error("lasing_knee_scan: no knee found in the scanned range");
}

}  // namespace magmech
