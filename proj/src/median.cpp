#include "gmedian/median.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "gmedian/numdiff.hpp"
#include "gmedian/specfun.hpp"

namespace gmedian {
namespace {

constexpr int kMaxIterations = 100;
constexpr double kResidualStop = 1e-15;
constexpr int kPolishSteps = 4;

void require_supported(double x, const char* who) {
  if (!std::isfinite(x) || x < kMinShape || x > kMaxShape) {
    throw domain_error(std::string(who) + ": shape outside [1e-3, 1e6]");
  }
}

double ulp(double v) {
  return std::nextafter(v, std::numeric_limits<double>::infinity()) - v;
}

double residual_at(double x, double m) {
  return reg_lower_gamma(x, m).value() - 0.5;
}

}  // namespace

MedianBounds median_bounds(double x) {
  if (!std::isfinite(x) || !(x > 0.0)) {
    throw domain_error("median_bounds: shape must be finite and > 0");
  }
  MedianBounds b;
  b.log_lower = std::log(x) - std::numbers::ln2 / x;
  b.log_upper = std::log(x) - 1.0 / (3.0 * x);
  b.lower = x * std::exp2(-1.0 / x);
  b.upper = x * std::exp(-1.0 / (3.0 * x));
  return b;
}

MedianResult median(double x) {
  require_supported(x, "median");
  const MedianBounds bounds = median_bounds(x);

  MedianResult result;
  result.x = x;
  result.bracket_low = bounds.lower;
  result.bracket_high = x;

  // Iterate on m with the bracket held in m; bisection is geometric so tiny
  // medians at small x are reached in a few dozen halvings of ln m.
  double lo = bounds.lower;
  double hi = x;
  double m = bounds.upper;
  double best_m = m;
  double best_f = std::numeric_limits<double>::infinity();

  for (int it = 1; it <= kMaxIterations; ++it) {
    const double f = residual_at(x, m);
    if (f == 0.0) {
      result.m = m;
      result.residual = f;
      result.iterations = it;
      return result;
    }
    if (std::abs(f) < std::abs(best_f)) {
      best_m = m;
      best_f = f;
    }
    if (f < 0.0) {
      lo = m;
    } else {
      hi = m;
    }
    // dP/dm * m = exp(x ln m - m - ln Gamma(x)).
    const double slope_log = std::exp(log_gamma_density_prefix(x, m));
    const double newton = m - f * m / slope_log;
    if (std::abs(f) <= kResidualStop || std::abs(newton - m) <= 4.0 * ulp(m)) {
      // Polish: keep correcting while the residual strictly improves. P is
      // quantized near 1/2, so one step can land an ulp or two off.
      double cur_m = m, cur_f = f, step_to = newton;
      for (int k = 0; k < kPolishSteps && step_to != cur_m; ++k) {
        const double next_f = residual_at(x, step_to);
        if (std::abs(next_f) >= std::abs(cur_f)) break;
        cur_m = step_to;
        cur_f = next_f;
        if (cur_f == 0.0) break;
        step_to = cur_m - cur_f * cur_m /
                              std::exp(log_gamma_density_prefix(x, cur_m));
      }
      result.m = cur_m;
      result.residual = cur_f;
      result.iterations = it;
      return result;
    }
    if (hi - lo <= 4.0 * ulp(m)) {
      // Bracket exhausted at the noise level of P.
      result.m = best_m;
      result.residual = best_f;
      result.iterations = it;
      return result;
    }
    m = newton > lo && newton < hi ? newton : std::sqrt(lo) * std::sqrt(hi);
  }
  throw convergence_error("median: iteration cap reached", m,
                          std::abs(residual_at(x, m)), kMaxIterations);
}

double median_derivative(double x) { return median_derivative(median(x)); }

double median_derivative(const MedianResult& solved) {
  const double x = solved.x;
  const double m = solved.m;
  const double dp_dx = reg_lower_gamma_dx(x, m);
  // dP/dm = e^(prefix) / m, folded to avoid overflow when m is tiny.
  return -dp_dx * m * std::exp(-log_gamma_density_prefix(x, m));
}

double median_second_derivative(double x) {
  require_supported(x, "median_second_derivative");
  const double h = relative_step(x);
  if (x - h < kMinShape || x + h > kMaxShape) {
    throw domain_error(
        "median_second_derivative: difference stencil leaves supported domain");
  }
  const double slope = median_derivative(x);
  const double log_slope_derivative = richardson_central(
      [](double s) { return std::log(median_derivative(s)); }, x, h);
  return slope * log_slope_derivative;
}

}  // namespace gmedian
