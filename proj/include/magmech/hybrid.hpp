#pragma once

#include <cmath>
#include <complex>

#include "magmech/params.hpp"

namespace magmech {

// Diagonalized photon-magnon sector. The hybrid modes are
//   A_+ = cos(theta) a + sin(theta) m   (upper branch, omega_plus)
//   A_- = -sin(theta) a + cos(theta) m  (lower branch, omega_minus)
// with theta = atan2(2 g_ma, omega_a - omega_m) / 2, continuous on (0, pi/2).
// This branch keeps the labels glued to the frequency ordering for any
// detuning: theta -> 0 gives a photon-like A_+ (magnon far below the cavity),
// theta -> pi/2 a magnon-like A_+, and theta = pi/4 the maximally mixed
// (a +/- m)/sqrt(2) pair.
struct HybridBasis {
  double theta = 0.0;
  double omega_plus = 0.0, omega_minus = 0.0;    // hybrid frequencies
  double kappa_plus = 0.0, kappa_minus = 0.0;    // hybrid half-linewidths
  double kappa_e_plus = 0.0, kappa_e_minus = 0.0;  // external half-rates
  bool resolved_sideband = false;  // max(kappa_+-) < omega_b
  double sideband_ratio = 0.0;     // max(kappa_+-) / omega_b

  double photon_weight_plus() const { return std::cos(theta) * std::cos(theta); }
  double magnon_weight_plus() const { return std::sin(theta) * std::sin(theta); }
};

inline HybridBasis hybridize(const SystemParams& p) {
  p.validate();
  HybridBasis h;
  const double delta = p.detuning_ma();
  h.theta = 0.5 * std::atan2(2.0 * p.g_ma, -delta);
  const double c2 = std::cos(h.theta) * std::cos(h.theta);
  const double s2 = std::sin(h.theta) * std::sin(h.theta);
  const double mid = 0.5 * (p.omega_a + p.omega_m);
  const double split = std::sqrt(p.g_ma * p.g_ma + 0.25 * delta * delta);
  h.omega_plus = mid + split;
  h.omega_minus = mid - split;
  h.kappa_plus = p.kappa_a * c2 + p.kappa_m * s2;
  h.kappa_minus = p.kappa_a * s2 + p.kappa_m * c2;
  h.kappa_e_plus = p.kappa_e * c2;
  h.kappa_e_minus = p.kappa_e * s2;
  h.sideband_ratio = std::max(h.kappa_plus, h.kappa_minus) / p.omega_b;
  h.resolved_sideband = h.sideband_ratio < 1.0;
  return h;
}

// Steady-state hybrid amplitudes under the drive plus the drive-enhanced
// couplings G_+- = |A_+-,ss| g_mb (1 -+ cos 2theta)/2 and cooperativities
// C_+- = G_+-^2 / (kappa_+- kappa_b).
struct DriveResponse {
  std::complex<double> amp_plus{0.0, 0.0};
  std::complex<double> amp_minus{0.0, 0.0};
  double G_plus = 0.0, G_minus = 0.0;
  double C_plus = 0.0, C_minus = 0.0;
};

// A_+-,ss = sqrt(2 kappa_e,+-) s_in / (kappa_+- + i Delta_d+-),
// Delta_d+- = omega_d - omega_+-. Drive phase is taken as zero; only the
// magnitude enters downstream.
inline DriveResponse steady_state_amplitude(const SystemParams& p, const HybridBasis& h,
                                            const DriveTone& d) {
  d.validate();
  DriveResponse r;
  const double s_in = d.input_amplitude();
  const std::complex<double> den_p(h.kappa_plus, d.omega_d - h.omega_plus);
  const std::complex<double> den_m(h.kappa_minus, d.omega_d - h.omega_minus);
  r.amp_plus = std::sqrt(2.0 * h.kappa_e_plus) * s_in / den_p;
  r.amp_minus = std::sqrt(2.0 * h.kappa_e_minus) * s_in / den_m;
  (void)p;
  return r;
}

inline DriveResponse enhanced_coupling(DriveResponse r, const HybridBasis& h,
                                       const SystemParams& p) {
  const double cos2t = std::cos(2.0 * h.theta);
  r.G_plus = std::abs(r.amp_plus) * p.g_mb * 0.5 * (1.0 - cos2t);
  r.G_minus = std::abs(r.amp_minus) * p.g_mb * 0.5 * (1.0 + cos2t);
  r.C_plus = r.G_plus * r.G_plus / (h.kappa_plus * p.kappa_b);
  r.C_minus = r.G_minus * r.G_minus / (h.kappa_minus * p.kappa_b);
  return r;
}

inline DriveResponse drive_response(const SystemParams& p, const HybridBasis& h,
                                    const DriveTone& d) {
  return enhanced_coupling(steady_state_amplitude(p, h, d), h, p);
}

}  // namespace magmech
