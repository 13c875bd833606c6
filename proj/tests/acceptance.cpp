// Acceptance suite: one numbered check per run ("acceptance N"), each printing
// PASS/FAIL lines with the measured numbers. Exit code 0 only if every check
// in the requested criterion holds.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "magmech/magmech.hpp"

using namespace magmech;

namespace {

int g_failures = 0;

void check(bool ok, const std::string& label, const std::string& detail) {
  std::printf("  %s: %s%s%s\n", ok ? "PASS" : "FAIL", label.c_str(),
              detail.empty() ? "" : " — ", detail.c_str());
  if (!ok) ++g_failures;
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof(buf), f, ap);
  va_end(ap);
  return buf;
}

double now_seconds() {
  using clock = std::chrono::steady_clock;
  static const auto t0 = clock::now();
  return std::chrono::duration<double>(clock::now() - t0).count();
}

SystemParams deep_resolved_triple(double kappa_scale = 0.2) {
  SystemParams p = default_params();
  p.kappa_a *= kappa_scale;
  p.kappa_m *= kappa_scale;
  p.kappa_e *= kappa_scale;
  return p;
}

double power_for_C(const SystemParams& p, DrivePlacement pl, double target_C) {
  const double p_ref = 1e-6;
  const double c_ref = window_params(p, make_drive(p, pl, p_ref), pl).C_exact;
  return p_ref * target_C / c_ref;
}

// ---------------------------------------------------------------------------
// 1. Eq-form oracle equivalence over randomized resolved-sideband devices
// ---------------------------------------------------------------------------

struct RandomSet {
  SystemParams params;
  DriveTone drive;
  bool blue = false;
  double x = 0.0;  // 2 ke_w / k_w
};

RandomSet draw_random_set(std::mt19937_64& rng, bool blue) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    SystemParams p = default_params();
    const double omega_b = two_pi * std::pow(10.0, 6.7 + 0.6 * u(rng));
    p.omega_b = omega_b;
    const double kw = omega_b * (0.005 + 0.015 * u(rng));
    const double ratio = 0.3 + 0.6 * u(rng);
    p.g_ma = omega_b * (10.0 + 10.0 * u(rng));
    const double dma = (2.0 * u(rng) - 1.0) * 0.7 * p.g_ma;
    p.omega_m = p.omega_a + dma;
    const double theta = 0.5 * std::atan2(2.0 * p.g_ma, -dma);
    const double c2 = std::cos(theta) * std::cos(theta);
    const double s2 = 1.0 - c2;
    const double wa = blue ? c2 : s2;  // kappa_a weight of the driven mode
    const double wm = blue ? s2 : c2;
    p.kappa_a = kw / (wa + wm * ratio);
    p.kappa_m = ratio * p.kappa_a;
    p.kappa_b = two_pi * (20.0 + 80.0 * u(rng));
    if (p.kappa_b > 1e-3 * kw) continue;
    const double x = 0.25 + 0.40 * u(rng);
    const double we = blue ? c2 : s2;  // external weight of the driven mode
    p.kappa_e = x * kw / (2.0 * we);
    if (p.kappa_e > p.kappa_a) continue;
    const double target_C = blue ? (0.1 + 0.35 * u(rng)) : (0.2 + 1.3 * u(rng));
    const double r3 = blue ? (1.0 - target_C - x) / (1.0 - target_C)
                           : (1.0 + target_C - x) / (1.0 + target_C);
    if (std::abs(r3) < 0.15) continue;

    const DrivePlacement pl = blue ? DrivePlacement::blue_locked : DrivePlacement::red_locked;
    RandomSet set;
    set.params = p;
    set.blue = blue;
    set.x = x;
    set.drive = make_drive(p, pl, power_for_C(p, pl, target_C));
    return set;
  }
}

void criterion_1() {
  std::printf("criterion 1: closed-form on-resonance reflectivity vs 6x6 solver\n");
  const double t_start = now_seconds();
  std::mt19937_64 rng(20250810);
  double worst = 0.0;
  double worst_model_gap = 0.0;
  int tested = 0;
  for (int i = 0; i < 100; ++i) {
    const bool blue = (i % 2) == 1;
    const RandomSet set = draw_random_set(rng, blue);
    const DrivePlacement pl = blue ? DrivePlacement::blue_locked : DrivePlacement::red_locked;
    const WindowParams wp = window_params(set.params, set.drive, pl);
    const double r_closed =
        on_resonance_reflectivity(wp.C_exact, wp.kappa_e_w, wp.kappa_w, blue);

    const auto kernel = linear_response_kernel(set.params, set.drive);  // checks stability
    const double c0 = window_center(set.drive, set.params, pl);
    const double width = set.params.kappa_b * (blue ? 1.0 - wp.C_exact : 1.0 + wp.C_exact);
    const auto grid = linspace(c0 - 4.0 * width, c0 + 4.0 * width, 801);
    std::vector<double> mag(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) mag[k] = std::abs(kernel.reflection(grid[k]));
    const double bg = 0.5 * (mag.front() + mag.back());
    std::size_t i0 = 0;
    for (std::size_t k = 0; k < mag.size(); ++k)
      if (std::abs(mag[k] - bg) > std::abs(mag[i0] - bg)) i0 = k;

    const double err = std::abs(mag[i0] - std::abs(r_closed)) / std::abs(r_closed);
    worst = std::max(worst, err);
    worst_model_gap = std::max(worst_model_gap,
                               std::abs(wp.C_model - wp.C_exact) / wp.C_exact);
    ++tested;
  }
  const double elapsed = now_seconds() - t_start;
  check(tested == 100, "100 randomized stable resolved-sideband sets", fmt("%d tested", tested));
  check(worst < 0.005, "on-resonance |r| matches (1 +- C - 2ke/k)/(1 +- C) within 0.5%",
        fmt("worst relative error %.2e", worst));
  check(elapsed < 10.0, "runtime under 10 s", fmt("%.2f s", elapsed));
  std::printf("  note: hybrid-basis model C differs from exact C by up to %.1f%%\n",
              100.0 * worst_model_gap);
}

// ---------------------------------------------------------------------------
// 2. Linewidth law: fitted FWHM = 2 kb (1 +- C) within 1% for C in [0, 0.9]
// ---------------------------------------------------------------------------

void criterion_2() {
  std::printf("criterion 2: window linewidth law and linearity in drive power\n");
  const SystemParams p = deep_resolved_triple();
  std::printf("  (triple resonance, kappa_hybrid/omega_b = %.4f)\n",
              hybridize(p).sideband_ratio);

  for (bool blue : {false, true}) {
    const DrivePlacement pl = blue ? DrivePlacement::blue_triple : DrivePlacement::red_triple;
    double worst = 0.0;
    std::vector<double> watts_axis, fwhm_axis;
    for (double c = 0.1; c <= 0.9 + 1e-9; c += 0.1) {
      const double watts = power_for_C(p, pl, c);
      const DriveTone d = make_drive(p, pl, watts);
      const WindowFit w = mmit_window(p, d, pl);
      const double law = window_fwhm_law(p.kappa_b, w.params.C_exact, blue);
      worst = std::max(worst, std::abs(w.fwhm - law) / law);
      watts_axis.push_back(watts);
      fwhm_axis.push_back(w.fwhm);
    }
    check(worst < 0.01,
          fmt("%s branch: fitted FWHM within 1%% of 2 kb (1 %s C)", blue ? "blue" : "red",
              blue ? "-" : "+"),
          fmt("worst deviation %.3f%%", 100.0 * worst));
    const LinearFit reg = linear_regression(watts_axis, fwhm_axis);
    check(reg.r_squared > 0.999,
          fmt("%s branch: FWHM linear in drive power", blue ? "blue" : "red"),
          fmt("R^2 = %.6f, slope %s", reg.r_squared, reg.slope > 0 ? "positive" : "negative"));
    check(blue ? reg.slope < 0.0 : reg.slope > 0.0,
          fmt("%s branch slope sign", blue ? "blue" : "red"), "");
  }
}

// ---------------------------------------------------------------------------
// 3. Paper-number regression: 0.62 kHz -> 2.11 kHz at C = 2.4 (vs 2.12 kHz)
// ---------------------------------------------------------------------------

void criterion_3() {
  std::printf("criterion 3: intrinsic 0.62 kHz window dressed at C = 2.4\n");
  const double kb_int = fwhm_hz_to_half_rad(0.62e3);
  const double predicted_hz = rad_to_hz(window_fwhm_law(kb_int, 2.4, false));
  const double err = std::abs(predicted_hz - 2.12e3) / 2.12e3;
  check(err < 0.01, "predicted MMIT FWHM vs measured 2.12 kHz",
        fmt("predicted %.3f kHz, deviation %.2f%%", predicted_hz / 1e3, 100.0 * err));

  // same number out of the full solver in its validity regime
  SystemParams p = deep_resolved_triple();
  p.kappa_b = kb_int;
  const double watts = power_for_C(p, DrivePlacement::red_triple, 2.4);
  const WindowFit w = mmit_window(p, make_drive(p, DrivePlacement::red_triple, watts),
                                  DrivePlacement::red_triple);
  const double fit_err = std::abs(rad_to_hz(w.fwhm) - predicted_hz) / predicted_hz;
  check(fit_err < 0.01, "full-solver fitted FWHM agrees with the law at C = 2.4",
        fmt("fitted %.3f kHz, deviation %.2f%%", rad_to_hz(w.fwhm) / 1e3, 100.0 * fit_err));
}

// ---------------------------------------------------------------------------
// 4. Fano asymmetry crosses zero exactly at the lock point
// ---------------------------------------------------------------------------

void criterion_4() {
  std::printf("criterion 4: lineshape transitions across the lock point\n");
  SystemParams p = default_params();
  p.omega_m = p.omega_a + 1.5 * p.g_ma;  // isolate the doublet, fig.-3 style

  std::vector<double> offsets_units = {-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0};
  std::vector<std::vector<double>> qs(2);
  for (bool blue : {false, true}) {
    const DrivePlacement pl = blue ? DrivePlacement::blue_locked : DrivePlacement::red_locked;
    const double watts = power_for_C(p, pl, blue ? 0.4 : 1.0);
    const HybridBasis h = hybridize(p);
    const double lock = drive_frequency(h, p, pl);
    const double c_lock = window_params(p, DriveTone{lock, watts}, pl).C_exact;
    const double scale = p.kappa_b * (blue ? 1.0 - c_lock : 1.0 + c_lock);
    for (double u : offsets_units) {
      DriveTone d{lock + u * scale, watts};
      const WindowFit w = mmit_window(p, d, pl);
      qs[blue ? 1 : 0].push_back(w.lineshape.fano_q);
    }
  }
  const std::size_t icenter = 3;
  check(std::abs(qs[0][icenter]) < 0.05, "red branch: |q| < 0.05 at the lock point",
        fmt("q = %+.4f", qs[0][icenter]));
  check(std::abs(qs[1][icenter]) < 0.05, "blue branch: |q| < 0.05 at the lock point",
        fmt("q = %+.4f", qs[1][icenter]));

  bool red_flip = true, blue_flip = true, opposite = true;
  for (std::size_t i = 0; i < offsets_units.size(); ++i) {
    if (i == icenter) continue;
    const double sign = offsets_units[i] > 0 ? 1.0 : -1.0;
    if (qs[0][i] * sign * qs[0][offsets_units.size() - 1] <= 0.0) red_flip = false;
    if (qs[1][i] * sign * qs[1][offsets_units.size() - 1] <= 0.0) blue_flip = false;
    if (qs[0][i] * qs[1][i] >= 0.0) opposite = false;
  }
  check(red_flip, "red branch: q changes sign across the lock point",
        fmt("q(-) = %+.3f, q(+) = %+.3f", qs[0][0], qs[0].back()));
  check(blue_flip, "blue branch: q changes sign across the lock point",
        fmt("q(-) = %+.3f, q(+) = %+.3f", qs[1][0], qs[1].back()));
  check(opposite, "red and blue q have opposite signs on matched offsets",
        fmt("example: %+.3f vs %+.3f", qs[0][0], qs[1][0]));
}

// ---------------------------------------------------------------------------
// 5. Cooperativity vs field: interior optimum and g_mb fit round trip
// ---------------------------------------------------------------------------

void criterion_5() {
  std::printf("criterion 5: cooperativity-vs-field curve and single-parameter fit\n");
  const SystemParams base = default_params();
  SweepSpec spec;
  spec.axis = SweepAxis::bias_field;
  spec.baseline = base;
  spec.drive_power_watts = dbm_to_watts(30.0);
  const double h0 = magnon_rad_to_field(base.omega_a, base.gamma_gyro);
  const double dh = 3.0 * base.g_ma / base.gamma_gyro;
  spec.range = SweepRange{h0 - dh, h0 + dh, 25, SweepScale::linear};
  const auto pts = sweep_cooperativity_vs_field(spec);

  std::size_t imax = 0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (pts[i].C_minus > pts[imax].C_minus) imax = i;
  check(imax > 0 && imax < pts.size() - 1, "interior maximum in C(H)",
        fmt("max C = %.3f at point %zu of %zu", pts[imax].C_minus, imax, pts.size()));

  std::vector<double> fields, coop;
  for (const auto& pt : pts) {
    fields.push_back(pt.field_tesla);
    coop.push_back(pt.C_minus);
  }
  const FitOutcome clean = fit_gmb_from_cooperativity(fields, coop, base,
                                                      DrivePlacement::red_locked,
                                                      spec.drive_power_watts);
  const double clean_err = std::abs(clean.value - base.g_mb) / base.g_mb;
  check(clean.converged && clean_err < 1e-3, "noiseless round trip within 0.1%",
        fmt("recovered g_mb/2pi = %.6f mHz (truth 4.1), error %.2e", 1e3 * rad_to_hz(clean.value),
            clean_err));

  std::mt19937_64 rng(777);
  std::normal_distribution<double> noise(0.0, 0.05);
  int bad = 0;
  double worst = 0.0;
  for (int seed = 0; seed < 100; ++seed) {
    std::vector<double> noisy = coop;
    for (auto& c : noisy) c *= (1.0 + noise(rng));
    const FitOutcome f = fit_gmb_from_cooperativity(fields, noisy, base,
                                                    DrivePlacement::red_locked,
                                                    spec.drive_power_watts);
    const double err = f.converged ? std::abs(f.value - base.g_mb) / base.g_mb : 1.0;
    worst = std::max(worst, err);
    if (err > 0.05) ++bad;
  }
  check(bad == 0, "5% multiplicative noise, 100 seeds: recovered within 5%",
        fmt("worst error %.2f%%", 100.0 * worst));
}

// ---------------------------------------------------------------------------
// 6. Lasing threshold consistency and the calibrated divergence power
// ---------------------------------------------------------------------------

void criterion_6() {
  std::printf("criterion 6: lasing threshold consistency\n");

  // (a) C at the eigenvalue threshold, stock device
  {
    const SystemParams p = default_params();
    const DriveTone d = make_drive(p, DrivePlacement::blue_triple, 1e-6);
    const StabilityReport rep = stability_analysis(p, d, DrivePlacement::blue_triple);
    const double c_th = *rep.predicted_C_at_threshold;
    check(std::abs(c_th - 1.0) < 0.01, "cooperativity at eigenvalue threshold equals 1",
          fmt("C(P_th) = %.5f", c_th));
  }

  // (b) eigenvalue bisection vs Stokes-sideband knee, desk-scale phonon line
  {
    SystemParams p = default_params();
    p.kappa_b = two_pi * 1.5e3;
    const DriveTone d = make_drive(p, DrivePlacement::blue_triple, 1e-6);
    const StabilityReport rep = stability_analysis(p, d, DrivePlacement::blue_triple);
    const double p_th = *rep.threshold_power;

    std::vector<double> powers;
    for (int i = -4; i <= 4; ++i) powers.push_back(p_th * std::pow(10.0, 0.015 * i));
    LasingScanOptions opt;
    opt.grow_efolds = 25.0;
    opt.max_time = 0.15;
    double slowest = 0.0;
    const double t0 = now_seconds();
    const KneeScanResult res = lasing_knee_scan(p, DrivePlacement::blue_triple, powers, opt);
    slowest = now_seconds() - t0;
    const double mismatch = std::abs(res.knee_power - p_th) / p_th;
    check(mismatch < 0.05, "knee power matches eigenvalue threshold within 5%",
          fmt("knee %.4e W vs eigen %.4e W (%.2f%%)", res.knee_power, p_th, 100.0 * mismatch));
    check(slowest / powers.size() < 120.0, "time-domain runs under 2 min each",
          fmt("scan of %zu points took %.1f s", powers.size(), slowest));
    for (const auto& pt : res.points)
      if (pt.grew && std::isfinite(pt.sideband_watts)) {
        check(std::abs(pt.limit_cycle_freq - p.omega_b) / p.omega_b < 0.01,
              "limit cycle oscillates at the phonon frequency",
              fmt("%.4f MHz vs omega_b/2pi = %.4f MHz", rad_to_hz(pt.limit_cycle_freq) / 1e6,
                  rad_to_hz(p.omega_b) / 1e6));
        break;
      }
  }

  // (c) calibrated divergence power against the published 6.2 dBm
  {
    const SystemParams p = default_params();
    const PowerCalibration cal =
        calibrate_power_scale(p, DrivePlacement::red_triple, 8.0, 2.4);
    DriveTone d = make_drive(p, DrivePlacement::blue_triple, cal.effective_watts(1e-6));
    const StabilityReport rep = stability_analysis(p, d, DrivePlacement::blue_triple);
    const double device_dbm = watts_to_dbm(*rep.threshold_power / cal.power_scale);
    check(std::abs(device_dbm - 6.2) <= 1.0,
          "calibrated blue-detuned divergence power within 1 dB of 6.2 dBm",
          fmt("predicted %.2f dBm", device_dbm));
    std::printf(
        "  note: cooperativity is linear in drive power, so the (8.0 dBm -> C = 2.4)\n"
        "  anchor pins C = 1 at 8.0 - 10 log10(2.4) = %.2f dBm for any power scale;\n"
        "  the published 2.4 @ 8.0 dBm and C ~ 1 @ 6.2 dBm points are mutually\n"
        "  inconsistent under C proportional to P (they differ by a factor 1.59).\n",
        8.0 - 10.0 * std::log10(2.4));
  }
}

// ---------------------------------------------------------------------------
// 7. Elastic solver anchors
// ---------------------------------------------------------------------------

void criterion_7() {
  std::printf("criterion 7: elastic sphere eigenfrequencies\n");
  const ElasticSphere s = yig_effective();
  const double f = spheroidal_frequency(s, 1, 2);
  check(std::abs(f - 11.42e6) / 11.42e6 < 1e-9, "calibrated S_{1,2} at D = 250 um",
        fmt("f = %.6f MHz", f / 1e6));

  double fd_min = 1e300, fd_max = 0.0;
  for (double d = 50e-6; d <= 5e-3 * (1.0 + 1e-9); d *= 1.5848931924611136) {
    ElasticSphere probe = s;
    probe.diameter = d;
    const double fd = spheroidal_frequency(probe, 1, 2) * d;
    fd_min = std::min(fd_min, fd);
    fd_max = std::max(fd_max, fd);
  }
  check((fd_max - fd_min) / fd_min < 1e-3, "f * D constant over D in [50 um, 5 mm]",
        fmt("spread %.2e", (fd_max - fd_min) / fd_min));

  bool degeneracy_ok = true;
  const auto catalog = mode_catalog(s, 5, 2);
  for (int l = 0; l <= 5 && degeneracy_ok; ++l)
    for (int n = 1; n <= 2; ++n) {
      int count = 0;
      for (const auto& m : catalog)
        if (m.n == n && m.l == l) ++count;
      if (count != 2 * l + 1) degeneracy_ok = false;
    }
  check(degeneracy_ok, "each (n, l) family carries exactly 2l+1 azimuthal labels", "");
}

// ---------------------------------------------------------------------------
// 8. Time-domain vs frequency-domain probe transfer across the MMIT window
// ---------------------------------------------------------------------------

void criterion_8() {
  std::printf("criterion 8: time/frequency-domain cross-validation\n");
  SystemParams p = default_params();
  p.kappa_b = two_pi * 1.5e3;  // desk-scale settle times
  const double watts = power_for_C(p, DrivePlacement::red_triple, 2.0);
  const DriveTone d = make_drive(p, DrivePlacement::red_triple, watts);
  const WindowParams wp = window_params(p, d, DrivePlacement::red_triple);
  const WindowFit wf = mmit_window(p, d, DrivePlacement::red_triple);
  const double half = 0.5 * wf.fwhm;
  const double tau = 1.0 / (p.kappa_b * (1.0 + wp.C_exact));

  const auto kernel = linear_response_kernel(p, d);
  double worst = 0.0;
  int n_checked = 0;
  for (double u : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
    const double omega_s = wf.center + u * half;
    const cplx r_fd = kernel.reflection(omega_s);
    const cplx r_td = time_domain_reflection(p, d, omega_s, 8.0 * tau, 6.0 * tau);
    worst = std::max(worst, std::abs(r_td - r_fd) / std::abs(r_fd));
    ++n_checked;
  }
  check(n_checked >= 5, "at least 5 probe detunings spanning the window",
        fmt("%d detunings", n_checked));
  check(worst < 0.01, "time-domain transfer matches r(omega_s) within 1%",
        fmt("worst complex deviation %.3f%%", 100.0 * worst));
}

// ---------------------------------------------------------------------------
// 9. Declared out-of-reach quantities
// ---------------------------------------------------------------------------

void criterion_9() {
  std::printf("criterion 9: declared not reproducible at desk scale\n");
  std::printf(
      "  - absolute experimental reflection amplitudes (drive-line losses unknown;\n"
      "    a single fitted power scale stands in for them)\n"
      "  - thermal-instability deviations of the measured reflectivity near C -> 1\n"
      "  - finite-element anchor-loss phonon linewidth (the 20 Hz clamping limit);\n"
      "    kappa_b is a user-supplied input instead\n"
      "  - the measured 25 dB gain trace; the 25 dB figure is checked only as a\n"
      "    closed-form evaluation at documented (2ke/k = 1.8, C = 0.9)\n");
  const double r = on_resonance_reflectivity(0.9, 0.9, 1.0, true);
  check(std::abs(20.0 * std::log10(std::abs(r)) - 24.6) < 0.1,
        "closed-form 25 dB-regime evaluation stands in for the gain trace",
        fmt("%.1f dB at 2ke/k = 1.8, C = 0.9", 20.0 * std::log10(std::abs(r))));
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: acceptance <criterion 1..9>\n");
    return 2;
  }
  const int n = std::atoi(argv[1]);
  try {
    switch (n) {
      case 1: criterion_1(); break;
      case 2: criterion_2(); break;
      case 3: criterion_3(); break;
      case 4: criterion_4(); break;
      case 5: criterion_5(); break;
      case 6: criterion_6(); break;
      case 7: criterion_7(); break;
      case 8: criterion_8(); break;
      case 9: criterion_9(); break;
      default:
        std::fprintf(stderr, "unknown criterion %d\n", n);
        return 2;
    }
  } catch (const std::exception& e) {
    std::printf("  FAIL: unhandled exception — %s\n", e.what());
    ++g_failures;
  }
  if (g_failures == 0) {
    std::printf("criterion %d: ALL CHECKS PASSED\n", n);
    return 0;
  }
  std::printf("criterion %d: %d CHECK(S) FAILED\n", n, g_failures);
  return 1;
}
