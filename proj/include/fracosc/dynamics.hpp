#pragma once

// Fluctuation-dissipation relation, diffusion constants and mean-square
// displacement of the position process Y obtained by integrating (or
// fractionally integrating) the velocity X_{alpha,gamma}.
//
// Convention: every function here reads p.lambda() as the lambda of
//
//   (D^{2 alpha} + lambda^{2 alpha})^{gamma/2} X = eta,
//
// i.e. the spectral density carries lambda^{2 alpha} where the covariance
// module carries lambda^2. to_covariance_convention maps between the two.

#include "fracosc/asymptotics.hpp"
#include "fracosc/covariance.hpp"

namespace fracosc {

/// (alpha, gamma, lambda) -> (alpha, gamma, lambda^alpha).
ProcessParams to_covariance_convention(const ProcessParams& p);

/// <eta(t) eta(s)> = 2B delta(t - s), thermal energy kT.
struct NoiseStrength {
  double B = 0.5;
  double kT = 1.0;

  void validate() const;
};

struct FdCoefficient {
  double B = 0.0;
  double n_factor = 0.0;  // pi alpha Gamma(gamma) / (Gamma(1/(2 alpha)) Gamma(gamma - 1/(2 alpha)))
};

/// Noise strength that thermalizes X to <X^2> = (kT)^{alpha gamma}.
FdCoefficient fd_coefficient(const ProcessParams& p, double kT);

/// <X^2> for noise strength B.
double equipartition_variance(const ProcessParams& p, double B);

/// int_0^inf <X(0) X(tau)> dtau = B lambda^{-2 alpha gamma}.
double diffusion_constant(const ProcessParams& p, double B);

/// <Y(t)^2> = 2 int_0^t (t - tau) C(tau) dtau for unit noise (B = 1/2);
/// scales linearly in 2B.
double msd_velocity(const ProcessParams& p, double t, const QuadratureSpec& q = {});

struct MsdSpec {
  double chi = 1.0;  // order of the Riemann-Liouville integral, in (1/2, 3/2)
  double t_max = 1e4;
  QuadratureSpec quad;

  void validate() const;
};

/// <Y(t)^2> with Y = I^chi X, unit noise:
///   (2/Gamma(chi)^2) int_0^t [int_tau^t u^{chi-1} (u - tau)^{chi-1} du] C(tau) dtau.
double msd_fractional(const ProcessParams& p, const MsdSpec& spec, double t);

/// The inner kernel int_tau^t u^{chi-1} (u - tau)^{chi-1} du.
double rl_kernel(double chi, double t, double tau);

/// Large-t form of <Y(t)^2> for noise strength B. The first term is
/// 2B lambda^{-2 alpha gamma} t^{2chi-1} / ((2chi - 1) Gamma(chi)^2). For
/// chi = 1 a second term carries the next order: a constant when
/// alpha > 1/2, a log t term at alpha = 1/2, t^{1-2alpha} when alpha < 1/2.
AsymptoticExpansion msd_asymptotic(const ProcessParams& p, double chi, double B);

/// int_0^inf tau C(tau) dtau for unit noise; finite only when alpha > 1/2.
double covariance_first_moment(const ProcessParams& p, const QuadratureSpec& q = {});

/// N(alpha, gamma) in <Y^2> ~ N (kT/lambda)^{alpha gamma} t^{2 alpha gamma - 1}
/// for chi = alpha gamma and B from fd_coefficient, left un-normalized.
double msd_normalization(const ProcessParams& p);

/// D(t) = (1/2)(kT/lambda)^{alpha gamma} (2 alpha gamma - 1) t^{2 alpha gamma - 2}.
double effective_diffusion(const ProcessParams& p, double kT, double t);

}  // namespace fracosc
