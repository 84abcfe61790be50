#pragma once

// Real-valued special functions used throughout the library.
//
// All functions are pure; none keeps state between calls.

namespace fracosc::specfun {

struct SpecFunConfig {
  double series_tol = 1e-17;  // relative truncation tolerance, in (0, 1e-6]
  int max_terms = 500;        // hard cap on series length, >= 50
  // K_nu(z): power series for z <= series_max_z, Steed/Temme continued
  // fraction for series_max_z < z < asymptotic_min_z, asymptotic expansion
  // beyond.
  double series_max_z = 2.0;
  double asymptotic_min_z = 30.0;
  // |nu - round(nu)| below this selects the integer-order series.
  double integer_nu_tol = 1e-9;

  void validate() const;
};

inline constexpr double kEulerGamma = 0.57721566490153286060651209;

/// Gamma function. Throws Pole at nonpositive integers and Overflow when
/// |Gamma(x)| exceeds the double range.
double gamma_fn(double x);

/// log|Gamma(x)|, finite for large x.
double log_gamma(double x);

/// 1/Gamma(x); zero at the poles of Gamma instead of throwing.
double rgamma(double x);

/// Logarithmic derivative of Gamma.
double digamma(double x);

/// Riemann zeta function for real s != 1. Euler-Maclaurin summation for
/// s >= 0, the functional equation below zero. Exact zero at the trivial
/// zeros.
double riemann_zeta(double s);

/// Modified Bessel function of the second kind, real order, z > 0.
double bessel_k(double nu, double z, const SpecFunConfig& cfg = {});

/// Bernoulli number B_{2n}, 1 <= n <= 40.
double bernoulli_even(int n);

/// Regularized lower incomplete gamma P(s, x) for s > 0, x >= 0.
double gamma_p(double s, double x);

/// Binomial coefficient C(a, j) for real a and integer j >= 0.
double binomial(double a, int j);

}  // namespace fracosc::specfun
