#pragma once

// Closed-form solutions of -f'' = E f on a single interval, shared by the
// solvers. Not installed.

#include <cmath>
#include <cstddef>

#include "sturmgraph/errors.hpp"

namespace sturmgraph::detail {

constexpr double kPi = 3.14159265358979323846;

/// Quadratic form of the E-harmonic extension of endpoint values (a, b):
/// diag*(a^2 + b^2) + 2*off*a*b.
struct EdgeForm {
  double diag = 0.0;
  double off = 0.0;
};

inline EdgeForm edge_form(double E, double ell) {
  if (E > 0.0) {
    const double k = std::sqrt(E);
    const double s = std::sin(k * ell);
    if (std::abs(s) < 1e-11) throw NumericalError("energy on an edge Dirichlet eigenvalue");
    return {k * std::cos(k * ell) / s, -k / s};
  }
  if (E < 0.0) {
    const double kappa = std::sqrt(-E);
    const double x = kappa * ell;
    if (x > 300.0) return {kappa, 0.0};
    return {kappa / std::tanh(x), -kappa / std::sinh(x)};
  }
  return {1.0 / ell, -1.0 / ell};
}

/// #{j >= 1 : (j*pi/ell)^2 < E}
inline std::size_t edge_dirichlet_below(double E, double ell) {
  if (E <= 0.0) return 0;
  const double x = std::sqrt(E) * ell / kPi;
  const double c = std::ceil(x);
  return c >= 1.0 ? static_cast<std::size_t>(c) - 1 : 0;
}

/// Value and derivative at x of the solution with f(0) = f0, f'(0) = d0.
/// Negative x propagates backwards.
struct EdgeState {
  double f = 0.0;
  double d = 0.0;
};

inline EdgeState propagate(double E, double x, double f0, double d0) {
  if (E > 0.0) {
    const double k = std::sqrt(E);
    const double c = std::cos(k * x);
    const double s = std::sin(k * x);
    return {f0 * c + d0 * s / k, -f0 * k * s + d0 * c};
  }
  if (E < 0.0) {
    const double kappa = std::sqrt(-E);
    const double c = std::cosh(kappa * x);
    const double s = std::sinh(kappa * x);
    return {f0 * c + d0 * s / kappa, f0 * kappa * s + d0 * c};
  }
  return {f0 + d0 * x, d0};
}

}  // namespace sturmgraph::detail
