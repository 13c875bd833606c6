#pragma once

#include <cmath>
#include <stdexcept>

namespace magmech {

inline constexpr double two_pi = 6.283185307179586476925286766559;
inline constexpr double hbar = 1.054571817e-34;  // J*s

// Internal convention: every rate/frequency is angular (rad/s) and every
// damping field is a half-linewidth (HWHM). Measured linewidths are quoted
// as full widths in Hz, so the conversions below live at the I/O boundary.

inline double hz_to_rad(double f_hz) { return two_pi * f_hz; }
inline double rad_to_hz(double w) { return w / two_pi; }

// FWHM in Hz (the "2k/2pi" convention) <-> angular HWHM
inline double fwhm_hz_to_half_rad(double fwhm_hz) { return two_pi * fwhm_hz / 2.0; }
inline double half_rad_to_fwhm_hz(double kappa) { return 2.0 * kappa / two_pi; }

inline double dbm_to_watts(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }

inline double watts_to_dbm(double watts) {
  if (watts <= 0.0) throw std::domain_error("watts_to_dbm: power must be positive");
  return 10.0 * std::log10(watts / 1e-3);
}

// Bias field <-> uniform magnon frequency, omega_m = gamma * H
inline double field_to_magnon_rad(double field_tesla, double gamma_rad_per_t) {
  if (field_tesla <= 0.0) throw std::invalid_argument("bias field must be positive");
  if (gamma_rad_per_t <= 0.0) throw std::invalid_argument("gyromagnetic ratio must be positive");
  return gamma_rad_per_t * field_tesla;
}

inline double magnon_rad_to_field(double omega_m, double gamma_rad_per_t) {
  if (omega_m <= 0.0) throw std::invalid_argument("magnon frequency must be positive");
  if (gamma_rad_per_t <= 0.0) throw std::invalid_argument("gyromagnetic ratio must be positive");
  return omega_m / gamma_rad_per_t;
}

}  // namespace magmech
