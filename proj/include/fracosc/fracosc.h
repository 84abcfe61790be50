#ifndef FRACOSC_FRACOSC_H
#define FRACOSC_FRACOSC_H

/* C interface to the fractional oscillator library.
 *
 * Every fallible call returns a status (FRACOSC_OK on success) and writes its
 * result through an out pointer. On failure the out pointers are untouched and
 * fracosc_last_error() describes the failure until the next failing call on
 * the same thread. Handles are opaque and must be released with their
 * matching _destroy function; destroying NULL is a no-op. All functions are
 * safe to call concurrently on distinct handles, and on shared handles when
 * the call only reads them. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(FRACOSC_BUILDING)
#    define FRACOSC_API __declspec(dllexport)
#  else
#    define FRACOSC_API __declspec(dllimport)
#  endif
#else
#  define FRACOSC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

enum fracosc_status {
  FRACOSC_OK = 0,
  FRACOSC_E_DOMAIN = 1,
  FRACOSC_E_GENERALIZED_ONLY = 2, /* alpha*gamma <= 1/2 */
  FRACOSC_E_POLE = 3,
  FRACOSC_E_OVERFLOW = 4,
  FRACOSC_E_REGIME = 5,
  FRACOSC_E_QUADRATURE = 6,
  FRACOSC_E_EMBEDDING = 7,
  FRACOSC_E_TRUNCATION = 8,
  FRACOSC_E_INSUFFICIENT_DATA = 9,
  FRACOSC_E_DIVERGENCE = 10,
  FRACOSC_E_RANGE = 11,
  FRACOSC_E_INVALID_ARGUMENT = 12, /* NULL out pointer, unknown enum value */
  FRACOSC_E_INTERNAL = 13
};

enum fracosc_regularity {
  FRACOSC_GENERALIZED_ONLY = 0,
  FRACOSC_ROUGH = 1,
  FRACOSC_BORDERLINE = 2,
  FRACOSC_SMOOTH = 3
};

enum fracosc_route {
  FRACOSC_ROUTE_AUTO = 0,
  FRACOSC_ROUTE_CLOSED_FORM = 1,
  FRACOSC_ROUTE_LAPLACE = 2,
  FRACOSC_ROUTE_STRUCTURE_FUNCTION = 3
};

enum fracosc_method {
  FRACOSC_CIRCULANT = 0,
  FRACOSC_SPECTRAL = 1,
  FRACOSC_FOURIER_SERIES = 2
};

typedef struct fracosc_process fracosc_process;
typedef struct fracosc_expansion fracosc_expansion;
typedef struct fracosc_path fracosc_path;

typedef struct fracosc_quadrature {
  double abs_tol;
  double rel_tol;
  int max_subdivisions;
  double t_switch;
  int tail_power_terms;
} fracosc_quadrature;

typedef struct fracosc_sample_options {
  double embed_tol;
  int max_embed_doublings;
  int allow_fallback;
  int spectral_bins_per_point;
} fracosc_sample_options;

typedef struct fracosc_thermal_params {
  double beta;
  double m;
  double mu;
} fracosc_thermal_params;

typedef struct fracosc_lambda_branch {
  int in_lambda;
  int u;    /* 0 unless in_lambda */
  int sign; /* (-1)^u, 0 unless in_lambda */
} fracosc_lambda_branch;

typedef struct fracosc_free_energy_result {
  double zeta0;
  double zeta0_prime;
  double F;
  double counterterm;
  double F_ren;
  fracosc_lambda_branch lambda_branch;
  int has_F_ren_lambda_branch;
  double F_ren_lambda_branch;
  char warning[256]; /* empty when there is nothing to report */
} fracosc_free_energy_result;

typedef struct fracosc_srd_tail {
  int exponential; /* 0: C ~ t^{-exponent}; 1: C ~ t^{power} e^{-rate t} */
  double exponent;
  double rate;
  double power;
  int srd;
} fracosc_srd_tail;

/* library */
FRACOSC_API const char* fracosc_version(void);
FRACOSC_API const char* fracosc_last_error(void);
FRACOSC_API const char* fracosc_status_string(int status);
FRACOSC_API void fracosc_quadrature_default(fracosc_quadrature* q);
FRACOSC_API void fracosc_sample_options_default(fracosc_sample_options* opt);

/* special functions */
FRACOSC_API int fracosc_sf_gamma(double x, double* out);
FRACOSC_API int fracosc_sf_digamma(double x, double* out);
FRACOSC_API int fracosc_sf_riemann_zeta(double s, double* out);
FRACOSC_API int fracosc_sf_bessel_k(double nu, double z, double* out);

/* process X_{alpha,gamma} with spectral density (1/2pi)(|w|^{2 alpha} + lambda^2)^{-gamma} */
FRACOSC_API int fracosc_process_create(double alpha, double gamma, double lambda, fracosc_process** out);
FRACOSC_API void fracosc_process_destroy(fracosc_process* p);
FRACOSC_API int fracosc_process_set_quadrature(fracosc_process* p, const fracosc_quadrature* q);
FRACOSC_API int fracosc_process_regularity(const fracosc_process* p, int* out);
/* the same process with lambda read in the lambda^{2 alpha} convention of the dynamics functions */
FRACOSC_API int fracosc_process_to_covariance_convention(const fracosc_process* p, fracosc_process** out);

/* covariance */
FRACOSC_API int fracosc_spectral_density(const fracosc_process* p, double omega, double* out);
FRACOSC_API int fracosc_covariance(const fracosc_process* p, double t, double* out);
FRACOSC_API int fracosc_covariance_route(const fracosc_process* p, double t, int route, double* out);
FRACOSC_API int fracosc_covariance_closed_alpha1(double gamma, double lambda, double t, double* out);
FRACOSC_API int fracosc_variance(const fracosc_process* p, double* out);
FRACOSC_API int fracosc_structure_function(const fracosc_process* p, double t, double* out);
FRACOSC_API int fracosc_thermal_covariance(const fracosc_process* p, double beta, double dt, int n_modes,
                                           double abs_tol, double* out);
FRACOSC_API int fracosc_relaxation_covariance(const fracosc_process* p, double dt, double tau1, double tau2,
                                              double* out);

/* asymptotics: a finite sum of coeff * x^power * log(x)^log_power, times exp(-exp_rate |x|) */
FRACOSC_API int fracosc_sigma2_small_t(const fracosc_process* p, fracosc_expansion** out);
FRACOSC_API int fracosc_covariance_large_t(const fracosc_process* p, int n_terms, fracosc_expansion** out);
FRACOSC_API void fracosc_expansion_destroy(fracosc_expansion* e);
FRACOSC_API int fracosc_expansion_size(const fracosc_expansion* e, size_t* out);
FRACOSC_API int fracosc_expansion_term(const fracosc_expansion* e, size_t i, double* coeff, double* power,
                                       int* log_power);
FRACOSC_API int fracosc_expansion_exp_rate(const fracosc_expansion* e, double* out);
/* n < 0 sums every term */
FRACOSC_API int fracosc_expansion_evaluate(const fracosc_expansion* e, double x, int n, double* out);
FRACOSC_API const char* fracosc_expansion_order_tag(const fracosc_expansion* e);
FRACOSC_API const char* fracosc_expansion_validity(const fracosc_expansion* e);

FRACOSC_API int fracosc_hurst_index(const fracosc_process* p, double* out);
FRACOSC_API int fracosc_holder_exponent(const fracosc_process* p, double* out);
FRACOSC_API int fracosc_fractal_dimension(const fracosc_process* p, double* out);
FRACOSC_API int fracosc_fbm_tangent_covariance(double H, double u, double v, double* out);
FRACOSC_API int fracosc_srd_classify(const fracosc_process* p, fracosc_srd_tail* out);

/* dynamics; lambda is read in the lambda^{2 alpha} convention */
FRACOSC_API int fracosc_fd_coefficient(const fracosc_process* p, double kT, double* B, double* n_factor);
FRACOSC_API int fracosc_equipartition_variance(const fracosc_process* p, double B, double* out);
FRACOSC_API int fracosc_diffusion_constant(const fracosc_process* p, double B, double* out);
FRACOSC_API int fracosc_msd_velocity(const fracosc_process* p, double t, double* out);
FRACOSC_API int fracosc_msd_fractional(const fracosc_process* p, double chi, double t_max, double t, double* out);
FRACOSC_API int fracosc_msd_asymptotic(const fracosc_process* p, double chi, double B, fracosc_expansion** out);
FRACOSC_API int fracosc_rl_kernel(double chi, double t, double tau, double* out);
FRACOSC_API int fracosc_covariance_first_moment(const fracosc_process* p, double* out);
FRACOSC_API int fracosc_msd_normalization(const fracosc_process* p, double* out);
FRACOSC_API int fracosc_effective_diffusion(const fracosc_process* p, double kT, double t, double* out);

/* simulation; opt may be NULL for defaults */
FRACOSC_API int fracosc_standard_normal(uint64_t seed, uint64_t index, double* out);
FRACOSC_API int fracosc_sample_path(const fracosc_process* p, int n, double dt, uint64_t seed, int method,
                                    const fracosc_sample_options* opt, fracosc_path** out);
FRACOSC_API int fracosc_sample_fbm(double H, int n, double dt, uint64_t seed, fracosc_path** out);
FRACOSC_API int fracosc_sample_thermal(const fracosc_process* p, double beta, int n_modes, int n, uint64_t seed,
                                       fracosc_path** out);
FRACOSC_API int fracosc_thermal_truncated_variance(const fracosc_process* p, double beta, int n_modes, double* out);
/* a path holding a copy of values[0..n) at spacing dt */
FRACOSC_API int fracosc_path_from_values(const double* values, size_t n, double dt, fracosc_path** out);
FRACOSC_API void fracosc_path_destroy(fracosc_path* path);
FRACOSC_API int fracosc_path_size(const fracosc_path* path, size_t* out);
FRACOSC_API int fracosc_path_dt(const fracosc_path* path, double* out);
/* borrowed pointer, valid until the path is destroyed */
FRACOSC_API const double* fracosc_path_values(const fracosc_path* path);
FRACOSC_API int fracosc_path_method(const fracosc_path* path, int* out);
FRACOSC_API int fracosc_path_fallback(const fracosc_path* path, int* out);
FRACOSC_API int fracosc_path_variance_bias(const fracosc_path* path, double* out);
FRACOSC_API const char* fracosc_path_warning(const fracosc_path* path);

/* lags, estimates and counts each hold max_lag entries; lag k sits at index k-1 */
FRACOSC_API int fracosc_variogram(const fracosc_path* path, int max_lag, double* lags, double* estimates,
                                  long* counts);
FRACOSC_API int fracosc_variogram_standard_error(const fracosc_process* p, double dt, int lag, long count,
                                                 double* out);
FRACOSC_API int fracosc_estimate_hurst(const double* lags, const double* estimates, size_t n, int fit_lo,
                                       int fit_hi, double* H, double* std_error);
FRACOSC_API int fracosc_rescaled_increment_path(const fracosc_path* path, int stride, double H, fracosc_path** out);
FRACOSC_API int fracosc_rl_fractional_integral(const fracosc_path* path, double chi, fracosc_path** out);

/* Casimir free energy; lambda_tol <= 0 selects the default 1e-9 */
FRACOSC_API int fracosc_lambda_membership(double alpha, double tol, fracosc_lambda_branch* out);
FRACOSC_API int fracosc_heat_remainder(double t, double alpha, double a, double* out);
FRACOSC_API int fracosc_zeta_value(double s, const fracosc_thermal_params* th, double alpha, double gamma,
                                   double* out);
FRACOSC_API int fracosc_zeta_at_zero(const fracosc_thermal_params* th, double alpha, double gamma, double* out);
FRACOSC_API int fracosc_zeta_prime_at_zero(const fracosc_thermal_params* th, double alpha, double gamma,
                                           double* out);
FRACOSC_API int fracosc_free_energy(const fracosc_thermal_params* th, double alpha, double gamma, double lambda_tol,
                                    fracosc_free_energy_result* out);
/* expansions in T = 1/beta and in beta respectively */
FRACOSC_API int fracosc_free_energy_low_t(const fracosc_thermal_params* th, double alpha, double gamma, int k_terms,
                                          fracosc_expansion** out);
FRACOSC_API int fracosc_free_energy_high_t(const fracosc_thermal_params* th, double alpha, double gamma,
                                           int l_terms, fracosc_expansion** out);

#ifdef __cplusplus
}
#endif

#endif
