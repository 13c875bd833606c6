#pragma once

#include <cmath>
#include <complex>

#include "magmech/errors.hpp"
#include "magmech/params.hpp"

namespace magmech {

using cplx = std::complex<double>;

// Mean-field fixed point of the driven three-mode system in the frame
// rotating at omega_d (phonon left in the lab frame):
//   0 = -(i Da + ka) a - i g_ma m + sqrt(2 ke) s_in
//   0 = -(i Dm' + km) m - i g_ma a,     Dm' = Dm + g_mb (b + b*)
//   0 = -(i wb + kb) b - i g_mb |m|^2
struct OperatingPoint {
  cplx a{0.0, 0.0}, m{0.0, 0.0}, b{0.0, 0.0};
  double residual = 0.0;   // scaled fixed-point residual
  int iterations = 0;

  double phonon_shift() const { return 2.0 * b.real(); }  // b + b*
};

namespace detail {

// (a, m) solve with the phonon displacement x = b + b* held fixed. The pair
// is linear in the fields, so the fixed point reduces to a scalar problem.
inline void linear_fields(const SystemParams& p, const DriveTone& d, double x, cplx& a,
                          cplx& m) {
  const double da = p.omega_a - d.omega_d;
  const double dm = p.omega_m - d.omega_d + p.g_mb * x;
  const cplx ca(p.kappa_a, da);
  const cplx cm(p.kappa_m, dm);
  const cplx den = ca * cm + p.g_ma * p.g_ma;
  const double s_in = d.input_amplitude();
  a = std::sqrt(2.0 * p.kappa_e) * s_in * cm / den;
  m = cplx(0.0, -1.0) * p.g_ma * a / cm;
}

inline cplx phonon_of_magnon(const SystemParams& p, const cplx& m) {
  return cplx(0.0, -1.0) * p.g_mb * std::norm(m) / cplx(p.kappa_b, p.omega_b);
}

}  // namespace detail

inline OperatingPoint steady_state(const SystemParams& p, const DriveTone& d,
                                   int max_iterations = 50, double tol = 1e-13) {
  p.validate();
  d.validate();
  OperatingPoint op;
  if (d.power == 0.0) return op;

  // Newton on f(x) = 2 Re b(x) - x where b(x) follows from the linear solve.
  double x = 0.0;
  double f = 0.0;
  cplx a, m;
  auto eval = [&](double xv) {
    detail::linear_fields(p, d, xv, a, m);
    const cplx b = detail::phonon_of_magnon(p, m);
    return 2.0 * b.real() - xv;
  };
  f = eval(x);
  const double xscale = std::max(std::abs(f), 1.0);
  int it = 0;
  for (; it < max_iterations; ++it) {
    if (std::abs(f) <= tol * xscale) break;
    const double h = std::max(1e-9 * std::abs(x), 1e-9 * xscale);
    const double fp = (eval(x + h) - eval(x - h)) / (2.0 * h);
    const double step = (std::abs(fp) > 1e-300) ? -f / fp : -f;
    x += step;
    f = eval(x);
  }
  detail::linear_fields(p, d, x, op.a, op.m);
  op.b = detail::phonon_of_magnon(p, op.m);
  op.iterations = it;

  // Residual of the full algebraic system, scaled by field amplitudes and rates.
  const double da = p.omega_a - d.omega_d;
  const double dmp = p.omega_m - d.omega_d + p.g_mb * op.phonon_shift();
  const cplx ra = -(cplx(p.kappa_a, da)) * op.a - cplx(0.0, p.g_ma) * op.m +
                  std::sqrt(2.0 * p.kappa_e) * d.input_amplitude();
  const cplx rm = -(cplx(p.kappa_m, dmp)) * op.m - cplx(0.0, p.g_ma) * op.a;
  const cplx rb = -(cplx(p.kappa_b, p.omega_b)) * op.b - cplx(0.0, p.g_mb) * std::norm(op.m);
  const double rate = std::max({p.kappa_a + std::abs(da), p.kappa_m + std::abs(dmp),
                                p.kappa_b + p.omega_b});
  const double amp = std::max({std::abs(op.a), std::abs(op.m), std::abs(op.b), 1.0});
  op.residual = std::sqrt(std::norm(ra) + std::norm(rm) + std::norm(rb)) / (rate * amp);
  if (!(op.residual < 1e-10))
    throw convergence_error("steady_state: Newton iteration did not converge", op.residual);
  return op;
}

}  // namespace magmech
