#pragma once

#include <cmath>
#include <string>

#include "magmech/errors.hpp"
#include "magmech/units.hpp"

namespace magmech {

// All mode frequencies, damping rates and couplings of the three-mode system
// (cavity photon a, magnon m, phonon b). Frequencies/rates in rad/s; damping
// fields are half-linewidths.
struct SystemParams {
  double omega_a = two_pi * 7.86e9;    // cavity photon frequency
  double kappa_a = two_pi * 1.675e6;   // cavity total half-linewidth
  double kappa_e = two_pi * 0.8375e6;  // cavity external half-rate, <= kappa_a
  double omega_m = two_pi * 7.86e9;    // magnon frequency (gamma * H)
  double kappa_m = two_pi * 0.56e6;    // magnon half-linewidth
  double omega_b = two_pi * 11.42e6;   // phonon frequency
  double kappa_b = two_pi * 150.0;     // phonon half-linewidth
  double g_ma = two_pi * 5.71e6;       // photon-magnon coupling
  double g_mb = two_pi * 4.1e-3;       // single-quantum magnon-phonon coupling
  double gamma_gyro = two_pi * 28e9;   // gyromagnetic ratio, rad/s per tesla

  double detuning_ma() const { return omega_m - omega_a; }

  void validate() const {
    auto positive = [](double v, const char* name) {
      if (!(v > 0.0) || !std::isfinite(v))
        throw validation_error(std::string(name) + " must be strictly positive");
    };
    positive(omega_a, "omega_a");
    positive(kappa_a, "kappa_a");
    positive(omega_m, "omega_m");
    positive(kappa_m, "kappa_m");
    positive(omega_b, "omega_b");
    positive(kappa_b, "kappa_b");
    positive(g_ma, "g_ma");
    positive(g_mb, "g_mb");
    positive(gamma_gyro, "gamma_gyro");
    if (!(kappa_e >= 0.0) || !std::isfinite(kappa_e))
      throw validation_error("kappa_e must be non-negative");
    if (kappa_e > kappa_a)
      throw validation_error("kappa_e must not exceed kappa_a");
  }
};

// The device of record: a 250 um YIG sphere in a 7.86 GHz cavity, biased to
// the hybrid-splitting-equals-phonon-frequency point (2 g_ma = omega_b).
inline SystemParams default_params() { return SystemParams{}; }

struct DriveTone {
  double omega_d = 0.0;  // drive frequency, rad/s
  double power = 0.0;    // watts at the device reference plane

  void validate() const {
    if (!(power >= 0.0) || !std::isfinite(power))
      throw validation_error("drive power must be non-negative");
    if (!(omega_d > 0.0) || !std::isfinite(omega_d))
      throw validation_error("drive frequency must be positive");
  }

  // |s_in|^2 = P / (hbar * omega_d), input photon flux
  double input_flux() const { return power / (hbar * omega_d); }
  double input_amplitude() const { return std::sqrt(input_flux()); }
};

// omega_m = gamma * H
inline double magnon_frequency(double field_tesla, double gamma_rad_per_t) {
  return field_to_magnon_rad(field_tesla, gamma_rad_per_t);
}

inline SystemParams with_bias_field(SystemParams p, double field_tesla) {
  p.omega_m = magnon_frequency(field_tesla, p.gamma_gyro);
  return p;
}

}  // namespace magmech
