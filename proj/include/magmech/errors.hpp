#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace magmech {

// Bad inputs: parameters, configs, CLI values. CLI maps this to exit code 1.
struct validation_error : std::invalid_argument {
  explicit validation_error(const std::string& what) : std::invalid_argument(what) {}
};

// Physics-domain failures (requesting a stable-state quantity from an
// unstable configuration). CLI maps this to exit code 2.
struct instability_error : std::runtime_error {
  std::complex<double> offending_eigenvalue{0.0, 0.0};
  explicit instability_error(const std::string& what,
                             std::complex<double> eigenvalue = {0.0, 0.0})
      : std::runtime_error(what), offending_eigenvalue(eigenvalue) {}
};

struct convergence_error : std::runtime_error {
  double last_residual = 0.0;
  explicit convergence_error(const std::string& what, double residual = 0.0)
      : std::runtime_error(what), last_residual(residual) {}
};

struct fit_error : std::runtime_error {
  explicit fit_error(const std::string& what) : std::runtime_error(what) {}
};

struct root_bracket_error : std::runtime_error {
  double scan_lo = 0.0, scan_hi = 0.0;
  root_bracket_error(const std::string& what, double lo, double hi)
      : std::runtime_error(what), scan_lo(lo), scan_hi(hi) {}
};

// Trajectory blew up (expected above the lasing threshold).
struct divergence_error : std::runtime_error {
  double time = 0.0;
  divergence_error(const std::string& what, double t)
      : std::runtime_error(what), time(t) {}
};

}  // namespace magmech
