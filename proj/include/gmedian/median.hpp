#pragma once

#include "gmedian/errors.hpp"

namespace gmedian {

/// Shapes accepted by the median solver.
inline constexpr double kMinShape = 1e-3;
inline constexpr double kMaxShape = 1e6;

struct MedianResult {
  double x = 0.0;
  double m = 0.0;
  double residual = 0.0;  // P(x, m) - 1/2
  int iterations = 0;
  double bracket_low = 0.0;   // x * 2^(-1/x)
  double bracket_high = 0.0;  // x
};

/// (x 2^(-1/x), x e^(-1/(3x))). The logs are exact-range companions; the
/// plain values underflow for x below about 1.4e-3.
struct MedianBounds {
  double lower = 0.0;
  double upper = 0.0;
  double log_lower = 0.0;
  double log_upper = 0.0;
};

/// Median of the unit-scale gamma distribution with shape x.
///
/// Safeguarded Newton on f(m) = P(x, m) - 1/2 from x e^(-1/(3x)), with
/// m f'(m) = e^(-m) m^x / Gamma(x) taken in log space. A step leaving the
/// current bracket is replaced by bisection in ln m.
MedianResult median(double x);

/// m'(x) = -(dP/dx) / (dP/dm) at (x, m(x)).
double median_derivative(double x);
double median_derivative(const MedianResult& solved);

/// m''(x) = m'(x) * d/dx ln m'(x), the log-derivative by Richardson central
/// differences with h = x / 64. Throws domain_error when the
/// stencil leaves [kMinShape, kMaxShape].
double median_second_derivative(double x);

MedianBounds median_bounds(double x);

}  // namespace gmedian
