#pragma once

#include <Eigen/Dense>
#include <complex>

#include "magmech/params.hpp"
#include "magmech/steady_state.hpp"

namespace magmech {

using Matrix6c = Eigen::Matrix<std::complex<double>, 6, 6>;
using Vector6c = Eigen::Matrix<std::complex<double>, 6, 1>;
using Matrix3c = Eigen::Matrix<std::complex<double>, 3, 3>;
using Vector3c = Eigen::Matrix<std::complex<double>, 3, 1>;

// Drift matrix of the fluctuations v = (da, dm, db, da*, dm*, db*) around the
// operating point, in the frame rotating at omega_d. This is simultaneously
// the Jacobian of the nonlinear flow at the fixed point and the kernel of the
// linear probe response. The pump enters through gt = g_mb * m_ss (both
// rotating and counter-rotating magnomechanical terms kept) and through the
// static phonon displacement shifting the magnon detuning.
inline Matrix6c drift_matrix(const SystemParams& p, const DriveTone& d,
                             const OperatingPoint& op) {
  const cplx I(0.0, 1.0);
  const double da = p.omega_a - d.omega_d;
  const double dm = p.omega_m - d.omega_d + p.g_mb * op.phonon_shift();
  const cplx gt = p.g_mb * op.m;

  Matrix6c M = Matrix6c::Zero();
  M(0, 0) = -(I * da + p.kappa_a);
  M(0, 1) = -I * p.g_ma;
  M(1, 0) = -I * p.g_ma;
  M(1, 1) = -(I * dm + p.kappa_m);
  M(1, 2) = -I * gt;
  M(1, 5) = -I * gt;
  M(2, 1) = -I * std::conj(gt);
  M(2, 2) = -(I * p.omega_b + p.kappa_b);
  M(2, 4) = -I * gt;
  // conjugate block: M = [[A, B], [B*, A*]]
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      M(r + 3, c + 3) = std::conj(M(r, c));
      M(r + 3, c) = std::conj(M(r, c + 3));
    }
  return M;
}

// Rotating-wave 3x3 block. `stokes_sector` selects the phonon component that
// is kept: false keeps (da, dm, db) and resolves features near
// omega_s - omega_d = +omega_b (red-detuned drives); true keeps
// (da, dm, db*) for the -omega_b window of blue-detuned drives.
inline Matrix3c drift_matrix_rwa(const SystemParams& p, const DriveTone& d,
                                 const OperatingPoint& op, bool stokes_sector) {
  const cplx I(0.0, 1.0);
  const double da = p.omega_a - d.omega_d;
  const double dm = p.omega_m - d.omega_d + p.g_mb * op.phonon_shift();
  const cplx gt = p.g_mb * op.m;

  Matrix3c M = Matrix3c::Zero();
  M(0, 0) = -(I * da + p.kappa_a);
  M(0, 1) = -I * p.g_ma;
  M(1, 0) = -I * p.g_ma;
  M(1, 1) = -(I * dm + p.kappa_m);
  if (!stokes_sector) {
    M(1, 2) = -I * gt;
    M(2, 1) = -I * std::conj(gt);
    M(2, 2) = -(I * p.omega_b + p.kappa_b);
  } else {
    M(1, 2) = -I * gt;
    M(2, 1) = I * std::conj(gt);
    M(2, 2) = -(-I * p.omega_b + p.kappa_b);
  }
  return M;
}

}  // namespace magmech
