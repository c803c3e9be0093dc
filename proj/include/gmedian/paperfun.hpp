#pragma once

#include "gmedian/errors.hpp"
#include "gmedian/quadrature.hpp"

namespace gmedian {

/// Working coordinates at x with phi = ln(x / m(x)), first order only.
struct FirstOrder {
  double x = 0.0;
  double m = 0.0;
  double m_prime = 0.0;
  double phi = 0.0;
  double phi_prime = 0.0;
  double xphi = 0.0;
  double xphi_prime = 0.0;  // phi + x phi'
};

struct PhiBundle {
  double x = 0.0;
  double phi = 0.0;
  double phi_prime = 0.0;
  double xphi = 0.0;
  double xphi_prime = 0.0;
  double xphi_second = 0.0;
};

struct GABValues {
  double x = 0.0;
  double g = 0.0;
  double g_prime = 0.0;
  double A = 0.0;
  double A_prime = 0.0;
  double B = 0.0;
  double B_prime = 0.0;
};

/// The three pieces of A'(x):
///   A' = boundary + squared_integral - kernel_integral
/// boundary = (phi + x phi') e^(-x phi) e^(x (1 - e^-phi)) (1 - (1 + phi) e^-phi)
/// squared_integral = int_0^{x phi} e^-s e^(x (1 - e^(-s/x))) K(s/x)^2 ds
/// kernel_integral  = int_0^{x phi} e^-s e^(x (1 - e^(-s/x))) s^2 e^(-s/x) / x^3 ds
/// with K(a) = 1 - (1 + a) e^-a.
struct APrimeTerms {
  double boundary = 0.0;
  double squared_integral = 0.0;
  double kernel_integral = 0.0;

  double derivative() const {
    return boundary + squared_integral - kernel_integral;
  }
};

FirstOrder first_order(double x);

/// Adds (x phi)'' by Richardson differences of (x phi)' with
/// h = x / 64.
PhiBundle phi_bundle(double x);

/// g = x (phi - 1 + e^-phi)
double g_value(const FirstOrder& p);
double g_value(double x);

/// g' = phi - 1 + e^-phi + x phi' (1 - e^-phi)
double g_prime(const FirstOrder& p);
double g_prime(double x);

/// A(x) = int_0^{x phi} e^-s e^(x (1 - e^(-s/x))) (1 - (1 + s/x) e^(-s/x)) ds
double A_value(const FirstOrder& p,
               QuadratureEngine engine = QuadratureEngine::gauss_kronrod);
double A_value(double x);

APrimeTerms A_prime_terms(const FirstOrder& p,
                          QuadratureEngine engine = QuadratureEngine::gauss_kronrod);
double A_prime(const FirstOrder& p);
double A_prime(double x);

/// B recovered from (x phi)' = -e^g (A + B).
double B_value(const FirstOrder& p);
double B_value(double x);

/// Richardson differences of B_value with h = x / 64. B carries the
/// cancellation of (x phi)' against A, so a wide step keeps noise / h small.
double B_prime(double x);

GABValues gab_values(double x);

/// m'' = -e^-phi ((x phi)'' - x phi'^2), from the working coordinates.
double median_second_derivative_from_phi(const PhiBundle& b);

/// e^t (t^3/6 + 4/135 + 8/(135 t^2) + t/3), t > 0.
double h1(double t);

/// e^t (t^2/6 + 4/(135 t) + 8/(135 t^2) + t/3), t > 0.
double h2(double t);

namespace kernels {

/// 1 - e^-a
double one_minus_exp_neg(double a);

/// e^-a - 1 + a
double exp_neg_minus_one_plus(double a);

/// 1 - (1 + a) e^-a
double one_minus_one_plus_exp_neg(double a);

}  // namespace kernels
}  // namespace gmedian
