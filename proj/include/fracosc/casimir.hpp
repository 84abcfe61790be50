#pragma once

// Zeta-regularized free energy of the thermal fractional Klein-Gordon field
// with operator [(-Delta)^alpha + m^2]^gamma on the circle of length beta.
//
//   zeta(s) = m^{-2 gamma s} + 2 sum_{n>=1} ((a n)^{2 alpha} + m^2)^{-gamma s},  a = 2 pi / beta,
//   F = -(zeta'(0) - zeta(0) log mu^2) / (2 beta).
//
// zeta(0) and the normalization dependence are nonzero only on the set
// Lambda = {1/(2u) : u = 1, 2, ...}, where (-1)^{1/(2 alpha)} means (-1)^u.

#include <optional>
#include <string>

#include "fracosc/asymptotics.hpp"
#include "fracosc/covariance.hpp"

namespace fracosc {

struct ThermalParams {
  double beta = 1.0;  // inverse temperature
  double m = 1.0;     // mass
  double mu = 1.0;    // normalization scale

  double a() const;  // 2 pi / beta
  void validate() const;
};

struct LambdaBranch {
  bool in_lambda = false;
  int u = 0;     // round(1/(2 alpha)) when in_lambda, else 0
  int sign = 0;  // (-1)^u when in_lambda, else 0
};

/// alpha is in Lambda when 1/(2 alpha) is within tol of a positive integer.
LambdaBranch lambda_membership(double alpha, double tol = 1e-9);

/// K(t) = 2 sum_{n>=1} exp(-t (a n)^{2 alpha}) - Gamma(1/(2 alpha)) t^{-1/(2 alpha)} / (alpha a) + 1,
/// which is O(t) as t -> 0.
double heat_remainder(double t, double alpha, double a);

/// Analytic continuation of zeta(s) to s > -1/gamma. Throws Pole where
/// gamma s - 1/(2 alpha) is a nonpositive integer.
double zeta_value(double s, const ThermalParams& th, double alpha, double gamma, const QuadratureSpec& q = {},
                  double lambda_tol = 1e-9);

/// 2 (-1)^u m^{1/alpha} / a on Lambda, 0 elsewhere.
double zeta_at_zero(const ThermalParams& th, double alpha, double gamma, double lambda_tol = 1e-9);

double zeta_prime_at_zero(const ThermalParams& th, double alpha, double gamma, const QuadratureSpec& q = {},
                          double lambda_tol = 1e-9);

struct FreeEnergyResult {
  double zeta0 = 0.0;
  double zeta0_prime = 0.0;
  double F = 0.0;
  double counterterm = 0.0;
  double F_ren = 0.0;
  LambdaBranch lambda_branch;
  // Set when alpha misses Lambda narrowly (|sin(pi/(2 alpha))| < 1e-3): the
  // F_ren of the adjacent Lambda branch u = round(1/(2 alpha)), for comparison.
  std::optional<double> F_ren_lambda_branch;
  std::string warning;
};

/// F, the counterterm F_c = -omega (-1)^u m^{1/alpha} (log mu^2 + gamma log m^2) / (2 pi)
/// and F_ren = F + F_c, which is independent of mu.
FreeEnergyResult free_energy(const ThermalParams& th, double alpha, double gamma, const QuadratureSpec& q = {},
                             double lambda_tol = 1e-9);

/// F_ren as beta -> infinity, in powers of T = 1/beta: a constant and the
/// terms -gamma (-1)^k / k m^{-2k} (2 pi)^{2 alpha k} zeta_R(-2 alpha k) T^{2 alpha k + 1},
/// k = 1..k_terms. Asymptotic, not convergent, for alpha > 1/2.
AsymptoticExpansion free_energy_low_T(const ThermalParams& th, double alpha, double gamma, int k_terms,
                                      double lambda_tol = 1e-9);

/// F_ren as beta -> 0, in powers of beta: the l = 1..l_terms terms of the
/// series in m^{2l} (beta/2pi)^{2 alpha l}, which converges for
/// beta m^{1/alpha} < 2 pi; throws Divergence otherwise.
AsymptoticExpansion free_energy_high_T(const ThermalParams& th, double alpha, double gamma, int l_terms,
                                       double lambda_tol = 1e-9);

}  // namespace fracosc
