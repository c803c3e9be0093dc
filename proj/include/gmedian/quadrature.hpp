#pragma once

#include <functional>

#include "gmedian/errors.hpp"

namespace gmedian {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long evaluations = 0;
};

using Integrand = std::function<double(double)>;

enum class QuadratureEngine { gauss_kronrod, tanh_sinh };

/// Adaptive Gauss-Kronrod (7, 15) with bisection of the worst panels.
/// tol is absolute. Throws convergence_error when the depth cap (50) is hit
/// before the estimate drops below tol.
QuadratureResult integrate_adaptive(const Integrand& f, double a, double b,
                                    double tol);

/// Tanh-sinh (double exponential) rule on (a, b). The integrand is never
/// evaluated at the endpoints, so integrable endpoint singularities are fine.
/// Throws convergence_error after level 12 without meeting tol.
QuadratureResult integrate_de(const Integrand& f, double a, double b,
                              double tol);

QuadratureResult integrate(QuadratureEngine engine, const Integrand& f,
                           double a, double b, double tol);

}  // namespace gmedian
