#pragma once

#include <cmath>

namespace gmedian {

/// Step for differentiating the median-derived quantities, which vary on the
/// scale of x and carry absolute noise well above eps times their size.
inline double relative_step(double x) { return x / 64.0; }

/// Central differences at h and h/2 combined to cancel the h^2 term.
template <class F>
double richardson_central(F&& f, double x, double h) {
  const double wide = (f(x + h) - f(x - h)) / (2.0 * h);
  const double half = 0.5 * h;
  const double narrow = (f(x + half) - f(x - half)) / h;
  return (4.0 * narrow - wide) / 3.0;
}

}  // namespace gmedian
