#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "magmech/errors.hpp"
#include "magmech/params.hpp"
#include "magmech/steady_state.hpp"

namespace magmech {

// Mode amplitudes in the frame rotating at omega_d (phonon in the lab frame).
struct StateVector {
  cplx a{0.0, 0.0}, m{0.0, 0.0}, b{0.0, 0.0};
  double t = 0.0;
};

struct Trajectory {
  std::vector<StateVector> samples;
  double dt = 0.0;           // integrator step
  double sample_dt = 0.0;    // spacing of stored samples
  double kappa_e = 0.0;      // for output-field reconstruction
  double omega_d = 0.0;
};

// Optional second input tone at a frequency offset from the drive,
// s(t) = amplitude * exp(-i offset t). Used for weak probes and for
// rotating-frame invariance checks.
struct ProbeTone {
  double offset = 0.0;
  cplx amplitude{0.0, 0.0};
};

struct IntegrateOptions {
  double dt = 0.0;             // 0: auto, 2pi/(50 omega_b)
  int sample_stride = 1;
  std::optional<ProbeTone> probe;
  double detuning_shift = 0.0;  // shifts Delta_a, Delta_m (frame-shift tests)
};

namespace detail {

// exp(h [[p, q], [q, r]]) for the complex-symmetric photon-magnon block
struct Exp2x2 {
  cplx e00, e01, e10, e11;

  static Exp2x2 of(cplx p, cplx q, cplx r, double h) {
    const cplx tr2 = 0.5 * (p + r);
    const cplx dd = 0.5 * (p - r);
    const cplx delta = std::sqrt(dd * dd + q * q);
    cplx ch, shd;  // cosh(delta h), sinh(delta h)/delta
    if (std::abs(delta) * h < 1e-8) {
      const cplx z = delta * h;
      ch = 1.0 + 0.5 * z * z;
      shd = h * (1.0 + z * z / 6.0);
    } else {
      ch = std::cosh(delta * h);
      shd = std::sinh(delta * h) / delta;
    }
    const cplx scale = std::exp(tr2 * h);
    Exp2x2 e;
    e.e00 = scale * (ch + shd * dd);
    e.e01 = scale * (shd * q);
    e.e10 = e.e01;
    e.e11 = scale * (ch - shd * dd);
    return e;
  }
};

struct Propagator {
  Exp2x2 am;
  cplx b;

  void apply(cplx& a, cplx& m, cplx& bb) const {
    const cplx an = am.e00 * a + am.e01 * m;
    const cplx mn = am.e10 * a + am.e11 * m;
    a = an;
    m = mn;
    bb *= b;
  }
};

}  // namespace detail

// Fixed-step 4th-order integration of the nonlinear equations of motion:
//   da/dt = -(i Da + ka) a - i g_ma m + sqrt(2 ke) s_in(t)
//   dm/dt = -(i Dm + km) m - i g_ma a - i g_mb m (b + b*)
//   db/dt = -(i wb + kb) b - i g_mb |m|^2
// The linear uncoupled-from-phonon part is propagated by its exact
// exponential (Lawson scheme), so undriven decays are exact and the
// step error attaches only to the driving and magnomechanical terms.
template <typename OnSample>
void integrate_callback(const SystemParams& p, const DriveTone& d, StateVector y,
                        double t_end, const IntegrateOptions& opt, OnSample&& on_sample) {
  p.validate();
  d.validate();
  const double dt_max = two_pi / (50.0 * p.omega_b);
  const double h = (opt.dt > 0.0) ? opt.dt : dt_max;
  if (h > dt_max * (1.0 + 1e-12))
    throw validation_error("integrate: dt must not exceed 2pi/(50 omega_b)");

  const cplx I(0.0, 1.0);
  const cplx la = -(I * (p.omega_a - d.omega_d + opt.detuning_shift) + p.kappa_a);
  const cplx lm = -(I * (p.omega_m - d.omega_d + opt.detuning_shift) + p.kappa_m);
  const cplx lq = -I * p.g_ma;
  const cplx lb = -(I * p.omega_b + p.kappa_b);
  const detail::Propagator E_half{detail::Exp2x2::of(la, lq, lm, 0.5 * h),
                                  std::exp(lb * 0.5 * h)};
  const detail::Propagator E_full{detail::Exp2x2::of(la, lq, lm, h), std::exp(lb * h)};

  const double drive_amp = std::sqrt(2.0 * p.kappa_e) * d.input_amplitude();
  const bool probed = opt.probe.has_value();
  const double pr_off = probed ? opt.probe->offset : 0.0;
  const cplx pr_amp = probed ? std::sqrt(2.0 * p.kappa_e) * opt.probe->amplitude : cplx{};

  auto nonlinear = [&](double t, const cplx& a, const cplx& m, const cplx& b, cplx& na,
                       cplx& nm, cplx& nb) {
    na = drive_amp;
    if (probed) na += pr_amp * std::exp(cplx(0.0, -pr_off * t));
    nm = -I * p.g_mb * m * (b + std::conj(b));
    nb = -I * p.g_mb * std::norm(m);
  };

  const auto steps = static_cast<long long>(std::ceil(t_end / h - 1e-9));
  const double t0 = y.t;
  long long emitted = 0;
  on_sample(y);
  cplx k1a, k1m, k1b, k2a, k2m, k2b, k3a, k3m, k3b, k4a, k4m, k4b;
  for (long long n = 0; n < steps; ++n) {
    const double t = t0 + static_cast<double>(n) * h;
    cplx a = y.a, m = y.m, b = y.b;

    nonlinear(t, a, m, b, k1a, k1m, k1b);

    cplx a2 = a + 0.5 * h * k1a, m2 = m + 0.5 * h * k1m, b2 = b + 0.5 * h * k1b;
    E_half.apply(a2, m2, b2);
    nonlinear(t + 0.5 * h, a2, m2, b2, k2a, k2m, k2b);

    cplx a3 = a, m3 = m, b3 = b;
    E_half.apply(a3, m3, b3);
    cplx a3s = a3 + 0.5 * h * k2a, m3s = m3 + 0.5 * h * k2m, b3s = b3 + 0.5 * h * k2b;
    nonlinear(t + 0.5 * h, a3s, m3s, b3s, k3a, k3m, k3b);

    cplx a4 = a, m4 = m, b4 = b;
    E_full.apply(a4, m4, b4);
    cplx c3a = k3a, c3m = k3m, c3b = k3b;
    E_half.apply(c3a, c3m, c3b);
    cplx a4s = a4 + h * c3a, m4s = m4 + h * c3m, b4s = b4 + h * c3b;
    nonlinear(t + h, a4s, m4s, b4s, k4a, k4m, k4b);

    // y' = E_full (y + h/6 k1) + h/6 (2 E_half (k2 + k3) + k4)
    cplx ya = a + h / 6.0 * k1a, ym = m + h / 6.0 * k1m, yb = b + h / 6.0 * k1b;
    E_full.apply(ya, ym, yb);
    cplx s23a = k2a + k3a, s23m = k2m + k3m, s23b = k2b + k3b;
    E_half.apply(s23a, s23m, s23b);
    y.a = ya + h / 6.0 * (2.0 * s23a + k4a);
    y.m = ym + h / 6.0 * (2.0 * s23m + k4m);
    y.b = yb + h / 6.0 * (2.0 * s23b + k4b);
    y.t = t0 + static_cast<double>(n + 1) * h;

    if (!(std::isfinite(y.a.real()) && std::isfinite(y.m.real()) &&
          std::isfinite(y.b.real())))
      throw divergence_error("integrate: state diverged (drive above threshold?)", y.t);

    if (++emitted % opt.sample_stride == 0) on_sample(y);
  }
}

inline Trajectory integrate(const SystemParams& p, const DriveTone& d,
                            const StateVector& initial, double t_span, double dt = 0.0,
                            IntegrateOptions opt = {}) {
  if (dt > 0.0) opt.dt = dt;
  Trajectory tr;
  tr.dt = (opt.dt > 0.0) ? opt.dt : two_pi / (50.0 * p.omega_b);
  tr.sample_dt = tr.dt * opt.sample_stride;
  tr.kappa_e = p.kappa_e;
  tr.omega_d = d.omega_d;
  const auto expected =
      static_cast<std::size_t>(t_span / tr.sample_dt) + 2;
  tr.samples.reserve(expected);
  integrate_callback(p, d, initial, t_span, opt,
                     [&](const StateVector& s) { tr.samples.push_back(s); });
  return tr;
}

// Weak-probe transfer function from the time domain: integrate with an added
// probe at offset = omega_s - omega_d, demodulate a(t) over entire probe
// periods after the transient, and form r = 1 - sqrt(2 ke) <a e^{+i offset t}> / s_p.
inline cplx time_domain_reflection(const SystemParams& p, const DriveTone& d,
                                   double omega_s, double settle_time,
                                   double demod_time, double probe_fraction = 1e-3) {
  const double offset = omega_s - d.omega_d;
  if (offset == 0.0) throw validation_error("probe must be offset from the drive");
  ProbeTone probe;
  probe.offset = offset;
  probe.amplitude = probe_fraction * std::max(d.input_amplitude(), 1.0);

  IntegrateOptions opt;
  opt.probe = probe;
  const OperatingPoint op = steady_state(p, d);
  StateVector y0;
  y0.a = op.a;
  y0.m = op.m;
  y0.b = op.b;

  // Hann-weighted demodulation: the probe component sits at DC after mixing,
  // while the strong pump (offset away) and the counter-rotating response
  // (2*offset away) land far outside the window's mainlobe.
  cplx acc{0.0, 0.0};
  double wsum = 0.0;
  const double t_end = settle_time + demod_time;
  integrate_callback(p, d, y0, t_end, opt, [&](const StateVector& s) {
    if (s.t >= settle_time && s.t <= t_end) {
      const double w =
          0.5 - 0.5 * std::cos(two_pi * (s.t - settle_time) / demod_time);
      acc += w * s.a * std::exp(cplx(0.0, offset * s.t));
      wsum += w;
    }
  });
  const cplx a_comp = acc / wsum;
  return 1.0 - std::sqrt(2.0 * p.kappa_e) * a_comp / probe.amplitude;
}

// ---------------------------------------------------------------------------
// Stokes sideband power and limit-cycle analysis
// ---------------------------------------------------------------------------

struct SidebandEstimate {
  double power_watts = 0.0;       // band-integrated output power at omega_d - omega_b
  double limit_cycle_freq = 0.0;  // dominant |b| oscillation frequency, rad/s
  bool settled = true;            // false: windowed variance still trending
};

// Spectral estimate of the output field sqrt(2 ke) a(t) at offset -omega_b.
// Requires >= 100 phonon periods of samples after the transient.
inline SidebandEstimate stokes_sideband_power(const Trajectory& tr, const SystemParams& p,
                                              const DriveTone& d) {
  const double T = tr.sample_dt * static_cast<double>(tr.samples.size() - 1);
  if (tr.samples.size() < 32 || T < 100.0 * two_pi / p.omega_b)
    throw validation_error("stokes_sideband_power: trajectory shorter than 100 phonon periods");

  const std::size_t n = tr.samples.size();
  // settled? compare |b| RMS of the two halves
  double rms1 = 0.0, rms2 = 0.0;
  for (std::size_t i = 0; i < n / 2; ++i) rms1 += std::norm(tr.samples[i].b);
  for (std::size_t i = n / 2; i < n; ++i) rms2 += std::norm(tr.samples[i].b);
  rms1 = std::sqrt(rms1 / (n / 2));
  rms2 = std::sqrt(rms2 / (n - n / 2));
  SidebandEstimate est;
  est.settled = !(rms1 > 0.0 && rms2 > 0.0 && (rms2 > 1.5 * rms1 || rms2 < rms1 / 1.5));

  // Hann-windowed projections of sqrt(2ke) a(t) on a band around -omega_b
  const double df = two_pi / T;
  const int half_bins = 8;
  double band_power = 0.0;
  double wsum = 0.0;
  std::vector<double> hann(n);
  for (std::size_t i = 0; i < n; ++i) {
    hann[i] = 0.5 - 0.5 * std::cos(two_pi * static_cast<double>(i) / static_cast<double>(n - 1));
    wsum += hann[i];
  }
  for (int k = -half_bins; k <= half_bins; ++k) {
    const double w = -p.omega_b + k * df;
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
      const double t = tr.samples[i].t;
      acc += hann[i] * tr.samples[i].a * std::exp(cplx(0.0, -w * t));
    }
    acc /= wsum;
    band_power += std::norm(acc);
  }
  // |s_out|^2 photon flux at the sideband; the Hann bins overlap by ~1.5x
  const double flux = 2.0 * tr.kappa_e * band_power / 1.5;
  est.power_watts = hbar * (d.omega_d - p.omega_b) * flux;

  // dominant phonon frequency from the phase winding of b(t)
  double phase = 0.0;
  cplx prev = tr.samples.front().b;
  for (std::size_t i = 1; i < n; ++i) {
    const cplx cur = tr.samples[i].b;
    if (std::abs(prev) > 0.0 && std::abs(cur) > 0.0) phase += std::arg(cur / prev);
    prev = cur;
  }
  est.limit_cycle_freq = std::abs(phase) / T;
  return est;
}

}  // namespace magmech
