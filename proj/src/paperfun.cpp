#include "gmedian/paperfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gmedian/median.hpp"
#include "gmedian/numdiff.hpp"

namespace gmedian {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kSeriesCutoff = 0.5;

// Absolute quadrature tolerance from a bound on the integral's size.
double tol_for(double scale) {
  return std::max(1e-16 * scale, std::numeric_limits<double>::min());
}

void require_stencil(double x, double h, const char* who) {
  if (x - h < kMinShape || x + h > kMaxShape) {
    throw domain_error(std::string(who) +
                       ": difference stencil leaves supported domain");
  }
}

// e^-s e^(x (1 - e^(-s/x))) = exp(-x (e^-a - 1 + a)), a = s/x.
double weight(double x, double a) {
  return std::exp(-x * kernels::exp_neg_minus_one_plus(a));
}

}  // namespace

namespace kernels {

double one_minus_exp_neg(double a) { return -std::expm1(-a); }

double exp_neg_minus_one_plus(double a) {
  if (std::abs(a) < kSeriesCutoff) {
    // sum_{k>=2} (-a)^k / k!
    double term = 0.5 * a * a;
    double sum = term;
    for (int k = 3; k < 40 && std::abs(term) > kEps * std::abs(sum); ++k) {
      term *= -a / k;
      sum += term;
    }
    return sum;
  }
  return std::expm1(-a) + a;
}

double one_minus_one_plus_exp_neg(double a) {
  if (std::abs(a) < kSeriesCutoff) {
    // sum_{k>=2} (-1)^k (k - 1) a^k / k!
    double power = 0.5 * a * a;  // (-a)^k / k!
    double sum = power;
    for (int k = 3; k < 40; ++k) {
      power *= -a / k;
      const double term = (k - 1) * power;
      sum += term;
      if (std::abs(term) <= kEps * std::abs(sum)) break;
    }
    return sum;
  }
  return -std::expm1(-a) - a * std::exp(-a);
}

}  // namespace kernels

FirstOrder first_order(double x) {
  const MedianResult solved = median(x);
  FirstOrder p;
  p.x = x;
  p.m = solved.m;
  p.m_prime = median_derivative(solved);
  p.phi = p.m > 0.5 * x ? -std::log1p((p.m - x) / x)
                        : std::log(x) - std::log(p.m);
  const double x_phi_prime = 1.0 - x * p.m_prime / p.m;
  p.phi_prime = x_phi_prime / x;
  p.xphi = x * p.phi;
  p.xphi_prime = p.phi + x_phi_prime;
  return p;
}

PhiBundle phi_bundle(double x) {
  const FirstOrder p = first_order(x);
  const double h = relative_step(x);
  require_stencil(x, h, "phi_bundle");
  PhiBundle b;
  b.x = x;
  b.phi = p.phi;
  b.phi_prime = p.phi_prime;
  b.xphi = p.xphi;
  b.xphi_prime = p.xphi_prime;
  b.xphi_second = richardson_central(
      [](double s) { return first_order(s).xphi_prime; }, x, h);
  return b;
}

double g_value(const FirstOrder& p) {
  return p.x * kernels::exp_neg_minus_one_plus(p.phi);
}

double g_value(double x) { return g_value(first_order(x)); }

double g_prime(const FirstOrder& p) {
  return kernels::exp_neg_minus_one_plus(p.phi) +
         p.x * p.phi_prime * kernels::one_minus_exp_neg(p.phi);
}

double g_prime(double x) { return g_prime(first_order(x)); }

double A_value(const FirstOrder& p, QuadratureEngine engine) {
  const double x = p.x;
  const double upper = p.xphi;
  if (upper == 0.0) return 0.0;
  const Integrand integrand = [x](double s) {
    const double a = s / x;
    return weight(x, a) * kernels::one_minus_one_plus_exp_neg(a);
  };
  const double scale = std::min(upper, x * p.phi * p.phi * p.phi / 6.0);
  return integrate(engine, integrand, 0.0, upper, tol_for(scale)).value;
}

double A_value(double x) { return A_value(first_order(x)); }

APrimeTerms A_prime_terms(const FirstOrder& p, QuadratureEngine engine) {
  const double x = p.x;
  const double phi = p.phi;
  const double upper = p.xphi;

  APrimeTerms t;
  t.boundary = p.xphi_prime * weight(x, phi) *
               kernels::one_minus_one_plus_exp_neg(phi);

  const Integrand squared = [x](double s) {
    const double k = kernels::one_minus_one_plus_exp_neg(s / x);
    return weight(x, s / x) * k * k;
  };
  const Integrand kernel = [x](double s) {
    const double a = s / x;
    return weight(x, a) * a * a * std::exp(-a) / x;
  };
  const double phi3 = phi * phi * phi;
  t.squared_integral =
      integrate(engine, squared, 0.0, upper,
                tol_for(std::min(upper, x * phi3 * phi * phi / 20.0)))
          .value;
  t.kernel_integral =
      integrate(engine, kernel, 0.0, upper, tol_for(std::min(upper, phi3 / 3.0)))
          .value;
  return t;
}

double A_prime(const FirstOrder& p) { return A_prime_terms(p).derivative(); }

double A_prime(double x) { return A_prime(first_order(x)); }

double B_value(const FirstOrder& p) {
  return -p.xphi_prime * std::exp(-g_value(p)) - A_value(p);
}

double B_value(double x) { return B_value(first_order(x)); }

double B_prime(double x) {
  const double h = relative_step(x);
  require_stencil(x, h, "B_prime");
  return richardson_central([](double s) { return B_value(s); }, x, h);
}

GABValues gab_values(double x) {
  const FirstOrder p = first_order(x);
  GABValues v;
  v.x = x;
  v.g = g_value(p);
  v.g_prime = g_prime(p);
  v.A = A_value(p);
  v.A_prime = A_prime(p);
  v.B = -p.xphi_prime * std::exp(-v.g) - v.A;
  v.B_prime = B_prime(x);
  return v;
}

double median_second_derivative_from_phi(const PhiBundle& b) {
  return -std::exp(-b.phi) *
         (b.xphi_second - b.x * b.phi_prime * b.phi_prime);
}

namespace {

void require_positive_argument(double t, const char* who) {
  if (!std::isfinite(t) || !(t > 0.0)) {
    throw domain_error(std::string(who) + ": argument must be finite and > 0");
  }
}

}  // namespace

double h1(double t) {
  require_positive_argument(t, "h1");
  return std::exp(t) * (t * t * t / 6.0 + 4.0 / 135.0 +
                        8.0 / (135.0 * t * t) + t / 3.0);
}

double h2(double t) {
  require_positive_argument(t, "h2");
  return std::exp(t) * (t * t / 6.0 + 4.0 / (135.0 * t) +
                        8.0 / (135.0 * t * t) + t / 3.0);
}

}  // namespace gmedian
