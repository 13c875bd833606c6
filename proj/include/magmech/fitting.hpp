#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "magmech/errors.hpp"

namespace magmech {

// ---------------------------------------------------------------------------
// Small dense Levenberg-Marquardt with numeric Jacobian. Sized for the
// handful-of-parameters lineshape fits used here; deterministic.
// ---------------------------------------------------------------------------

struct LmOptions {
  int max_iterations = 200;
  double ftol = 1e-14;   // relative cost reduction
  double xtol = 1e-12;   // relative step size
  double lambda0 = 1e-3;
};

struct LmResult {
  Eigen::VectorXd params;
  Eigen::VectorXd std_errors;
  double residual_norm = 0.0;
  bool converged = false;
  int iterations = 0;
};

// model(x, p) -> predicted y
template <typename Model>
LmResult lm_fit(Model&& model, const std::vector<double>& xs, const std::vector<double>& ys,
                Eigen::VectorXd p0, const LmOptions& opt = {}) {
  if (xs.size() != ys.size() || xs.size() < static_cast<std::size_t>(p0.size()))
    throw fit_error("lm_fit: need at least as many points as parameters");
  const int n = static_cast<int>(xs.size());
  const int k = static_cast<int>(p0.size());

  auto residuals = [&](const Eigen::VectorXd& p) {
    Eigen::VectorXd r(n);
    for (int i = 0; i < n; ++i) r(i) = ys[static_cast<std::size_t>(i)] - model(xs[static_cast<std::size_t>(i)], p);
    return r;
  };
  auto jacobian = [&](const Eigen::VectorXd& p) {
    Eigen::MatrixXd J(n, k);
    for (int j = 0; j < k; ++j) {
      const double h = std::max(1e-7 * std::abs(p(j)), 1e-9);
      Eigen::VectorXd pp = p, pm = p;
      pp(j) += h;
      pm(j) -= h;
      const Eigen::VectorXd rp = residuals(pp), rm = residuals(pm);
      J.col(j) = (rm - rp) / (2.0 * h);  // d(model)/dp = -d(residual)/dp
    }
    return J;
  };

  Eigen::VectorXd p = std::move(p0);
  Eigen::VectorXd r = residuals(p);
  double cost = r.squaredNorm();
  double lambda = opt.lambda0;
  LmResult out;
  int it = 0;
  for (; it < opt.max_iterations; ++it) {
    const Eigen::MatrixXd J = jacobian(p);
    const Eigen::MatrixXd JtJ = J.transpose() * J;
    const Eigen::VectorXd g = J.transpose() * r;
    bool stepped = false;
    for (int tries = 0; tries < 40; ++tries) {
      Eigen::MatrixXd A = JtJ;
      for (int j = 0; j < k; ++j) A(j, j) += lambda * std::max(JtJ(j, j), 1e-30);
      const Eigen::VectorXd step = A.ldlt().solve(g);
      const Eigen::VectorXd pn = p + step;
      const Eigen::VectorXd rn = residuals(pn);
      const double cn = rn.squaredNorm();
      if (cn < cost) {
        const double rel_drop = (cost - cn) / std::max(cost, 1e-300);
        const double rel_step = step.norm() / std::max(p.norm(), 1e-300);
        p = pn;
        r = rn;
        cost = cn;
        lambda = std::max(lambda * 0.3, 1e-12);
        stepped = true;
        if (rel_drop < opt.ftol || rel_step < opt.xtol) {
          out.converged = true;
          it = opt.max_iterations;  // leave outer loop
        }
        break;
      }
      lambda *= 10.0;
      if (lambda > 1e14) break;
    }
    if (!stepped) {
      out.converged = true;  // stuck at a (local) minimum
      break;
    }
  }
  out.params = p;
  out.residual_norm = std::sqrt(cost);
  out.iterations = it;
  // covariance from the final Jacobian
  const Eigen::MatrixXd J = jacobian(p);
  Eigen::MatrixXd JtJ = J.transpose() * J;
  const double dof = std::max(1.0, static_cast<double>(n - k));
  const Eigen::MatrixXd cov = JtJ.completeOrthogonalDecomposition().pseudoInverse() * (cost / dof);
  out.std_errors = cov.diagonal().cwiseMax(0.0).cwiseSqrt();
  return out;
}

// ---------------------------------------------------------------------------
// Ordinary least squares y = a + b x with R^2, for the linewidth-vs-power law.
// ---------------------------------------------------------------------------

struct LinearFit {
  double intercept = 0.0, slope = 0.0, r_squared = 0.0;
};

inline LinearFit linear_regression(const std::vector<double>& xs,
                                   const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw fit_error("linear_regression: need at least 2 points");
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
    syy += ys[i] * ys[i];
  }
  const double vx = sxx - sx * sx / n;
  const double vy = syy - sy * sy / n;
  const double cxy = sxy - sx * sy / n;
  if (!(vx > 0.0)) throw fit_error("linear_regression: degenerate x values");
  LinearFit f;
  f.slope = cxy / vx;
  f.intercept = (sy - f.slope * sx) / n;
  f.r_squared = (vy > 0.0) ? (cxy * cxy) / (vx * vy) : 1.0;
  return f;
}

// ---------------------------------------------------------------------------
// Lineshape fitting: Fano profile on |r|^2 with a linear background,
//   y(w) = A (q + e)^2 / (1 + e^2) + b0 + b1 (w - w0),  e = 2 (w - w0) / fwhm.
// q -> 0 and q -> +-inf are both symmetric Lorentzians (peak or dip depending
// on the sign of A); |q| >= q_max or |q| <= q_symmetric reports Lorentzian.
// ---------------------------------------------------------------------------

enum class LineshapeKind { lorentzian, fano };

struct LineshapeFit {
  LineshapeKind kind = LineshapeKind::lorentzian;
  double center = 0.0;      // rad/s
  double fwhm = 0.0;        // rad/s
  double amplitude = 0.0;   // symmetric component, signed: >0 peak, <0 dip
  double fano_q = 0.0;
  double residual_norm = 0.0;
  double center_value = 0.0;  // fitted y at the center
  bool converged = false;
};

inline constexpr double fano_q_max = 1e3;        // reclassify to Lorentzian
inline constexpr double fano_q_symmetric = 0.05;  // symmetric-at-zero branch

inline double fano_profile(double w, double w0, double fwhm, double A, double q, double b0,
                           double b1) {
  const double e = 2.0 * (w - w0) / fwhm;
  return A * (q + e) * (q + e) / (1.0 + e * e) + b0 + b1 * (w - w0);
}

// xs strictly increasing; ys = |r|^2 samples. min_feature is the smallest
// feature height (|extremum - background|) treated as a real resonance.
inline LineshapeFit fit_lineshape(const std::vector<double>& xs,
                                  const std::vector<double>& ys,
                                  double min_feature = 1e-9) {
  if (xs.size() < 12) throw fit_error("fit_lineshape: too few samples");
  const std::size_t n = xs.size();
  const double bg = 0.5 * (ys.front() + ys.back());
  std::size_t i0 = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (std::abs(ys[i] - bg) > std::abs(ys[i0] - bg)) i0 = i;
  const double height = ys[i0] - bg;
  if (std::abs(height) < min_feature)
    throw fit_error("fit_lineshape: feature below the noise floor");

  // half-height crossings around the extremum for the initial width
  const double half = bg + 0.5 * height;
  std::size_t lo = i0, hi = i0;
  while (lo > 0 && (height > 0 ? ys[lo] > half : ys[lo] < half)) --lo;
  while (hi + 1 < n && (height > 0 ? ys[hi] > half : ys[hi] < half)) ++hi;
  double width0 = xs[hi] - xs[lo];
  if (!(width0 > 0.0)) width0 = (xs.back() - xs.front()) / 10.0;

  // normalized coordinates keep the LM well-conditioned
  const double x0 = xs[i0];
  const double yscale = std::max(std::abs(height), 1e-300);
  std::vector<double> xn(n), yn(n);
  for (std::size_t i = 0; i < n; ++i) {
    xn[i] = (xs[i] - x0) / width0;
    yn[i] = (ys[i] - bg) / yscale;
  }
  const double slope0 = (yn.back() - yn.front()) / (xn.back() - xn.front());

  // p = (center, fwhm, A, q, b0, b1) in normalized units
  Eigen::VectorXd p0(6);
  p0 << 0.0, 1.0, -height / yscale, 0.0, height / yscale, slope0;
  auto model = [](double x, const Eigen::VectorXd& p) {
    return fano_profile(x, p(0), std::abs(p(1)), p(2), p(3), p(4), p(5));
  };
  const LmResult lm = lm_fit(model, xn, yn, p0);

  LineshapeFit f;
  f.converged = lm.converged;
  f.center = x0 + lm.params(0) * width0;
  f.fwhm = std::abs(lm.params(1)) * width0;
  const double A = lm.params(2) * yscale;
  f.fano_q = lm.params(3);
  f.amplitude = A * (f.fano_q * f.fano_q - 1.0);
  f.residual_norm = lm.residual_norm * yscale;
  // e = 0 at the fitted center: y = A q^2 + b0
  f.center_value = (lm.params(2) * f.fano_q * f.fano_q + lm.params(4)) * yscale + bg;
  f.kind = (std::abs(f.fano_q) >= fano_q_max || std::abs(f.fano_q) <= fano_q_symmetric)
               ? LineshapeKind::lorentzian
               : LineshapeKind::fano;
  if (!(f.fwhm > 0.0)) throw fit_error("fit_lineshape: collapsed width");
  return f;
}

}  // namespace magmech
