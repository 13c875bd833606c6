#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "magmech/drift.hpp"
#include "magmech/errors.hpp"
#include "magmech/hybrid.hpp"
#include "magmech/steady_state.hpp"

namespace magmech {

// Where the strong drive sits relative to the hybrid doublet.
//   red_locked   : omega_d = omega_- - omega_b   (pump and window on A_-)
//   blue_locked  : omega_d = omega_+ + omega_b   (pump and window on A_+)
//   red_triple   : omega_d = omega_-             (window on A_+, needs 2R ~ omega_b)
//   blue_triple  : omega_d = omega_+             (window on A_-)
// In every case the red family puts the narrow feature at omega_d + omega_b
// and the blue family at omega_d - omega_b.
enum class DrivePlacement { red_locked, blue_locked, red_triple, blue_triple };

inline bool is_blue(DrivePlacement pl) {
  return pl == DrivePlacement::blue_locked || pl == DrivePlacement::blue_triple;
}

inline double drive_frequency(const HybridBasis& h, const SystemParams& p,
                              DrivePlacement pl) {
  switch (pl) {
    case DrivePlacement::red_locked: return h.omega_minus - p.omega_b;
    case DrivePlacement::blue_locked: return h.omega_plus + p.omega_b;
    case DrivePlacement::red_triple: return h.omega_minus;
    case DrivePlacement::blue_triple: return h.omega_plus;
  }
  return 0.0;
}

inline DriveTone make_drive(const SystemParams& p, DrivePlacement pl, double power_watts) {
  DriveTone d;
  d.omega_d = drive_frequency(hybridize(p), p, pl);
  d.power = power_watts;
  return d;
}

// Narrow-feature center: the two-photon resonance.
inline double window_center(const DriveTone& d, const SystemParams& p, DrivePlacement pl) {
  return is_blue(pl) ? d.omega_d - p.omega_b : d.omega_d + p.omega_b;
}

// Parameters of the hybrid mode hosting the narrow feature plus the
// cooperativity of the active magnomechanical process.
struct WindowParams {
  double kappa_w = 0.0;    // probed hybrid half-linewidth
  double kappa_e_w = 0.0;  // probed external half-rate
  double coupling_ratio = 0.0;  // 2 kappa_e_w / kappa_w
  double C_model = 0.0;    // from the hybrid-basis pump amplitude
  double C_exact = 0.0;    // from the nonlinear steady state's m_ss
  double G_exact = 0.0;
  bool blue = false;
};

// The enhanced coupling seen by the probed mode is g_mb |m_ss| w, where w is
// the magnon amplitude weight of that mode (sin/cos theta). Using the exact
// m_ss instead of the single-mode A_ss absorbs the pump leakage into the far
// hybrid mode, which matters at first order in omega_b / mode splitting.
inline WindowParams window_params(const SystemParams& p, const DriveTone& d,
                                  DrivePlacement pl) {
  const HybridBasis h = hybridize(p);
  const DriveResponse r = drive_response(p, h, d);
  WindowParams w;
  w.blue = is_blue(pl);
  const bool probe_plus =
      (pl == DrivePlacement::blue_locked || pl == DrivePlacement::red_triple);
  w.kappa_w = probe_plus ? h.kappa_plus : h.kappa_minus;
  w.kappa_e_w = probe_plus ? h.kappa_e_plus : h.kappa_e_minus;
  w.coupling_ratio = 2.0 * w.kappa_e_w / w.kappa_w;
  const double w_amp = probe_plus ? std::sin(h.theta) : std::cos(h.theta);
  const OperatingPoint op = steady_state(p, d);
  w.G_exact = p.g_mb * std::abs(op.m) * w_amp;
  w.C_exact = w.G_exact * w.G_exact / (w.kappa_w * p.kappa_b);
  switch (pl) {
    case DrivePlacement::red_locked: w.C_model = r.C_minus; break;
    case DrivePlacement::blue_locked: w.C_model = r.C_plus; break;
    // Triple resonance: the pump amplitude of one mode drives the window of
    // the other; at theta = pi/4 the spec weights coincide for both labels.
    case DrivePlacement::red_triple:
      w.C_model = r.G_minus * r.G_minus / (w.kappa_w * p.kappa_b);
      break;
    case DrivePlacement::blue_triple:
      w.C_model = r.G_plus * r.G_plus / (w.kappa_w * p.kappa_b);
      break;
  }
  return w;
}

enum class ResponseSolver { full6, rwa3 };

struct Spectrum {
  std::vector<double> probe_freqs;       // omega_s, rad/s, strictly increasing
  std::vector<cplx> r;                   // complex reflection coefficients
  SystemParams params;
  DriveTone drive;
  ResponseSolver solver = ResponseSolver::full6;
};

namespace detail {

struct ResponseKernel {
  Matrix6c M;
  double kappa_e;
  double omega_d;

  cplx reflection(double omega_s) const {
    const cplx I(0.0, 1.0);
    Matrix6c A = -I * (omega_s - omega_d) * Matrix6c::Identity() - M;
    Vector6c S = Vector6c::Zero();
    S(0) = 1.0;
    const Vector6c u = A.partialPivLu().solve(S);
    return 1.0 - 2.0 * kappa_e * u(0);
  }
};

struct ResponseKernelRwa {
  Matrix3c M;
  double kappa_e;
  double omega_d;

  cplx reflection(double omega_s) const {
    const cplx I(0.0, 1.0);
    Matrix3c A = -I * (omega_s - omega_d) * Matrix3c::Identity() - M;
    Vector3c S = Vector3c::Zero();
    S(0) = 1.0;
    const Vector3c u = A.partialPivLu().solve(S);
    return 1.0 - 2.0 * kappa_e * u(0);
  }
};

// Linear response assumes the fixed point attracts; reject configurations
// past the parametric instability.
inline void require_stable(const SystemParams& p, const DriveTone& d,
                           const OperatingPoint& op) {
  const Matrix6c M = drift_matrix(p, d, op);
  Eigen::ComplexEigenSolver<Matrix6c> es(M, /*computeEigenvectors=*/false);
  const auto& ev = es.eigenvalues();
  int worst = 0;
  for (int i = 1; i < 6; ++i)
    if (ev(i).real() > ev(worst).real()) worst = i;
  if (ev(worst).real() >= 0.0)
    throw instability_error("steady state is linearly unstable (drive past threshold)",
                            ev(worst));
}

}  // namespace detail

// Fluctuation drift matrix at the drive-set operating point together with the
// probe source normalization; errors out with the offending eigenvalue if the
// fixed point is unstable.
inline detail::ResponseKernel linear_response_kernel(const SystemParams& p,
                                                     const DriveTone& d) {
  const OperatingPoint op = steady_state(p, d);
  detail::require_stable(p, d, op);
  return detail::ResponseKernel{drift_matrix(p, d, op), p.kappa_e, d.omega_d};
}

// r(omega_s) = 1 - 2 kappa_e * chi_aa(omega_s); the probe is a weak linear
// perturbation on top of the classical steady state.
inline Spectrum reflection_spectrum(const SystemParams& p, const DriveTone& d,
                                    std::vector<double> probe_grid,
                                    ResponseSolver solver = ResponseSolver::full6,
                                    bool blue_sector = false) {
  p.validate();
  d.validate();
  if (probe_grid.size() < 2) throw validation_error("probe grid needs at least 2 points");
  for (std::size_t i = 1; i < probe_grid.size(); ++i)
    if (!(probe_grid[i] > probe_grid[i - 1]))
      throw validation_error("probe grid must be strictly increasing");

  Spectrum s;
  s.probe_freqs = std::move(probe_grid);
  s.r.reserve(s.probe_freqs.size());
  s.params = p;
  s.drive = d;
  s.solver = solver;

  const OperatingPoint op = steady_state(p, d);
  detail::require_stable(p, d, op);
  if (solver == ResponseSolver::full6) {
    detail::ResponseKernel k{drift_matrix(p, d, op), p.kappa_e, d.omega_d};
    for (double w : s.probe_freqs) s.r.push_back(k.reflection(w));
  } else {
    const HybridBasis h = hybridize(p);
    if (!(h.sideband_ratio < 0.2))
      throw validation_error(
          "rwa3 solver requires kappa_hybrid / omega_b < 0.2; use the full solver");
    detail::ResponseKernelRwa k{drift_matrix_rwa(p, d, op, blue_sector), p.kappa_e,
                                d.omega_d};
    for (double w : s.probe_freqs) s.r.push_back(k.reflection(w));
  }
  return s;
}

// Closed-form on-resonance reflectivity r = (1 +- C - 2 ke/k) / (1 +- C);
// red detuning takes the + sign, blue the - sign.
inline double on_resonance_reflectivity(double C, double kappa_e_hybrid,
                                        double kappa_hybrid, bool blue) {
  if (!(C >= 0.0)) throw validation_error("cooperativity must be non-negative");
  if (!(kappa_hybrid > 0.0) || !(kappa_e_hybrid >= 0.0))
    throw validation_error("hybrid rates must be positive");
  const double x = 2.0 * kappa_e_hybrid / kappa_hybrid;
  if (blue) {
    if (C >= 1.0)
      throw instability_error(
          "blue-detuned reflectivity diverges for C >= 1 (parametric instability)");
    return (1.0 - C - x) / (1.0 - C);
  }
  return (1.0 + C - x) / (1.0 + C);
}

inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n < 2) throw validation_error("linspace needs at least 2 points");
  std::vector<double> g(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) g[i] = lo + step * static_cast<double>(i);
  return g;
}

}  // namespace magmech
