#pragma once

#include "gmedian/errors.hpp"

namespace gmedian {

/// A value in [0, 1]. Construction outside that range throws.
class Probability {
 public:
  explicit Probability(double value);
  double value() const noexcept { return value_; }

 private:
  double value_;
};

/// ln Gamma(x) for x > 0. Lanczos (g = 7, 9 terms), reflection below 1/2.
double log_gamma(double x);

/// psi(x) = Gamma'(x) / Gamma(x) for x > 0.
double digamma(double x);

/// ln(x) - psi(x), accurate for large x where the two nearly cancel.
double log_minus_digamma(double x);

/// x ln t - t - ln Gamma(x), the log of the gamma density times t.
/// For x >= 1 this goes through the Stirling remainder so that the large
/// terms cancel analytically rather than in floating point. Returns -inf
/// at t = 0.
double log_gamma_density_prefix(double x, double t);

/// P(x, t): regularized lower incomplete gamma function.
Probability reg_lower_gamma(double x, double t);

/// Q(x, t) = 1 - P(x, t).
Probability reg_upper_gamma(double x, double t);

/// dP/dx (x, t), the derivative in the shape parameter.
///
/// Split as (1/Gamma(x)) * int_0^t e^-u u^(x-1) (ln u - psi(x)) du
/// = power part on [0, s] in closed form, s = min(t, 1)
///   + tanh-sinh integral of the bounded remainder (e^-u - 1) u^(x-1) (...)
///   + tanh-sinh integral on [1, t] when t > 1, split at the mode.
/// The closed-form power part carries the u^(x-1) singularity, which for
/// small x puts most of the mass below the smallest double.
double reg_lower_gamma_dx(double x, double t);

namespace detail {

/// ln Gamma(x) - [(x - 1/2) ln x - x + ln(2 pi)/2] for x >= 1: asymptotic
/// series from 10 up, upward recurrence below.
double stirling_remainder(double x);

/// Series sum for P(x, t) with no range dispatch.
double lower_series(double x, double t);

/// Lentz continued fraction for Q(x, t) with no range dispatch.
double upper_continued_fraction(double x, double t);

/// Iteration cap used by both expansions at shape x.
int incomplete_gamma_iteration_cap(double x);

}  // namespace detail
}  // namespace gmedian
