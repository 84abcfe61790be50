#pragma once

// Spectral density, covariance and structure function of the fractional
// oscillator process X_{alpha,gamma}, whose spectral density is
//
//   S(omega) = (1/2pi) (|omega|^{2 alpha} + lambda^2)^{-gamma},
//
// together with its finite-temperature (periodic) and finite-relaxation-time
// two-point functions. Unit white noise throughout.

namespace fracosc {

enum class RegularityClass { GeneralizedOnly, Rough, Borderline, Smooth };

const char* to_string(RegularityClass c) noexcept;

inline constexpr double kDefaultClassTol = 1e-12;

/// The triple (alpha, gamma, lambda). Construction validates
/// 0 < alpha <= 1, gamma > 0, lambda > 0.
class ProcessParams {
 public:
  ProcessParams(double alpha, double gamma, double lambda);

  double alpha() const noexcept { return alpha_; }
  double gamma() const noexcept { return gamma_; }
  double lambda() const noexcept { return lambda_; }
  double ag() const noexcept { return alpha_ * gamma_; }

  RegularityClass regularity(double tol_class = kDefaultClassTol) const noexcept;

  /// Throws GeneralizedOnly when alpha*gamma <= 1/2.
  void require_finite_variance() const;

  /// Characteristic time scale lambda^{-1/alpha}.
  double time_scale() const noexcept;

 private:
  double alpha_, gamma_, lambda_;
};

struct QuadratureSpec {
  double abs_tol = 1e-15;
  double rel_tol = 1e-13;
  int max_subdivisions = 20000;
  double t_switch = 0.1;       // in units of lambda^{-1/alpha}
  int tail_power_terms = 200;  // cap on binomial tail terms

  void validate() const;
};

enum class CovarianceRoute { Auto, ClosedForm, Laplace, StructureFunction };

double spectral_density(const ProcessParams& p, double omega);

/// Spectral density of the type-I/II comparison process,
/// (1/2pi)(|w|^{2a} + 2 lambda |w|^a cos(pi a/2) + lambda^2)^{-gamma}.
double spectral_density_type12(const ProcessParams& p, double omega);

/// C_{alpha,gamma}(t). Auto picks the Bessel closed form for alpha == 1,
/// the Laplace representation for |t| >= t_switch lambda^{-1/alpha}, and
/// C(0) - sigma^2(t)/2 otherwise.
double covariance(const ProcessParams& p, double t, const QuadratureSpec& q = {},
                  CovarianceRoute route = CovarianceRoute::Auto);

/// Bessel-K closed form of C_{1,gamma}(t); gamma > 1/2.
double covariance_closed_alpha1(double gamma, double lambda, double t);

/// C_{alpha,gamma}(0) in closed form.
double variance(const ProcessParams& p);

/// sigma^2(t) = 2C(0) - 2C(t), computed directly from the non-negative
/// sin^2 integrand plus analytic tails.
double structure_function(const ProcessParams& p, double t, const QuadratureSpec& q = {});

struct ThermalResult {
  double value = 0.0;
  double tail = 0.0;            // integral estimate of the |n| > N modes
  double error_estimate = 0.0;  // next Euler-Maclaurin term of that estimate
};

/// Matsubara sum (1/beta) sum_n e^{i w_n dt} (|w_n|^{2a} + lambda^2)^{-gamma},
/// |n| <= n_modes summed exactly and the rest by an Euler-Maclaurin
/// corrected integral. Throws Truncation when error_estimate > abs_tol.
ThermalResult thermal_covariance_detail(const ProcessParams& p, double beta, double dt, int n_modes,
                                        const QuadratureSpec& q);
double thermal_covariance(const ProcessParams& p, double beta, double dt, int n_modes,
                          double abs_tol = 1e-8);

/// Equal-time covariance of the Parisi-Wu relaxation field started from
/// zero at auxiliary time 0, at auxiliary times tau1, tau2.
double relaxation_covariance(const ProcessParams& p, double dt, double tau1, double tau2,
                             const QuadratureSpec& q = {});

}  // namespace fracosc
