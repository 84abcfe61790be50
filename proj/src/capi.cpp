#include "fracosc/fracosc.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <utility>

#include "fracosc/asymptotics.hpp"
#include "fracosc/casimir.hpp"
#include "fracosc/covariance.hpp"
#include "fracosc/dynamics.hpp"
#include "fracosc/error.hpp"
#include "fracosc/simulate.hpp"
#include "fracosc/specfun.hpp"

struct fracosc_process {
  fracosc::ProcessParams params;
  fracosc::QuadratureSpec quad;
};

struct fracosc_expansion {
  fracosc::AsymptoticExpansion e;
};

struct fracosc_path {
  fracosc::SamplePath path;
};

namespace {

thread_local std::string g_last_error;

int fail(int status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs f, translating exceptions into a status and the thread's last error.
template <class F>
int guarded(F&& f) {
  try {
    f();
    return FRACOSC_OK;
  } catch (const fracosc::Error& e) {
    return fail(static_cast<int>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(FRACOSC_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(FRACOSC_E_INTERNAL, e.what());
  } catch (...) {
    return fail(FRACOSC_E_INTERNAL, "unknown exception");
  }
}

template <class... Ptrs>
bool any_null(const Ptrs*... ptrs) {
  return ((ptrs == nullptr) || ...);
}

int null_argument() { return fail(FRACOSC_E_INVALID_ARGUMENT, "null pointer argument"); }

// Scalar result of a call that needs nothing but its out pointer.
template <class F>
int scalar(double* out, F&& f) {
  if (out == nullptr) return null_argument();
  return guarded([&] { *out = f(); });
}

template <class F>
int process_scalar(const fracosc_process* p, double* out, F&& f) {
  if (any_null(p, out)) return null_argument();
  return guarded([&] { *out = f(p->params, p->quad); });
}

template <class F>
int make_expansion(fracosc_expansion** out, F&& f) {
  if (out == nullptr) return null_argument();
  return guarded([&] { *out = new fracosc_expansion{f()}; });
}

template <class F>
int make_path(fracosc_path** out, F&& f) {
  if (out == nullptr) return null_argument();
  return guarded([&] { *out = new fracosc_path{f()}; });
}

fracosc::ThermalParams thermal(const fracosc_thermal_params* th) { return {th->beta, th->m, th->mu}; }

double lambda_tol_or_default(double tol) { return tol > 0.0 ? tol : 1e-9; }

}  // namespace

extern "C" {

const char* fracosc_version(void) { return "1.0.0"; }

const char* fracosc_last_error(void) { return g_last_error.c_str(); }

const char* fracosc_status_string(int status) {
  switch (status) {
    case FRACOSC_OK:
      return "ok";
    case FRACOSC_E_INVALID_ARGUMENT:
      return "invalid argument";
    case FRACOSC_E_INTERNAL:
      return "internal error";
    default:
      if (status >= FRACOSC_E_DOMAIN && status <= FRACOSC_E_RANGE) {
        return fracosc::to_string(static_cast<fracosc::ErrorCode>(status));
      }
      return "unknown status";
  }
}

void fracosc_quadrature_default(fracosc_quadrature* q) {
  if (q == nullptr) return;
  const fracosc::QuadratureSpec d;
  *q = {d.abs_tol, d.rel_tol, d.max_subdivisions, d.t_switch, d.tail_power_terms};
}

void fracosc_sample_options_default(fracosc_sample_options* opt) {
  if (opt == nullptr) return;
  const fracosc::SampleOptions d;
  *opt = {d.embed_tol, d.max_embed_doublings, d.allow_fallback ? 1 : 0, d.spectral_bins_per_point};
}

int fracosc_sf_gamma(double x, double* out) {
  return scalar(out, [&] { return fracosc::specfun::gamma_fn(x); });
}

int fracosc_sf_digamma(double x, double* out) {
  return scalar(out, [&] { return fracosc::specfun::digamma(x); });
}

int fracosc_sf_riemann_zeta(double s, double* out) {
  return scalar(out, [&] { return fracosc::specfun::riemann_zeta(s); });
}

int fracosc_sf_bessel_k(double nu, double z, double* out) {
  return scalar(out, [&] { return fracosc::specfun::bessel_k(nu, z); });
}

int fracosc_process_create(double alpha, double gamma, double lambda, fracosc_process** out) {
  if (out == nullptr) return null_argument();
  return guarded([&] { *out = new fracosc_process{fracosc::ProcessParams(alpha, gamma, lambda), {}}; });
}

void fracosc_process_destroy(fracosc_process* p) { delete p; }

int fracosc_process_set_quadrature(fracosc_process* p, const fracosc_quadrature* q) {
  if (any_null(p, q)) return null_argument();
  return guarded([&] {
    fracosc::QuadratureSpec spec{q->abs_tol, q->rel_tol, q->max_subdivisions, q->t_switch, q->tail_power_terms};
    spec.validate();
    p->quad = spec;
  });
}

int fracosc_process_regularity(const fracosc_process* p, int* out) {
  if (any_null(p, out)) return null_argument();
  return guarded([&] { *out = static_cast<int>(p->params.regularity()); });
}

int fracosc_process_to_covariance_convention(const fracosc_process* p, fracosc_process** out) {
  if (any_null(p, out)) return null_argument();
  return guarded([&] { *out = new fracosc_process{fracosc::to_covariance_convention(p->params), p->quad}; });
}

int fracosc_spectral_density(const fracosc_process* p, double omega, double* out) {
  return process_scalar(p, out, [&](auto& pp, auto&) { return fracosc::spectral_density(pp, omega); });
}

int fracosc_covariance(const fracosc_process* p, double t, double* out) {
  return process_scalar(p, out, [&](auto& pp, auto& q) { return fracosc::covariance(pp, t, q); });
}

int fracosc_covariance_route(const fracosc_process* p, double t, int route, double* out) {
  if (route < FRACOSC_ROUTE_AUTO || route > FRACOSC_ROUTE_STRUCTURE_FUNCTION) {
    return fail(FRACOSC_E_INVALID_ARGUMENT, "unknown covariance route " + std::to_string(route));
  }
  return process_scalar(p, out, [&](auto& pp, auto& q) {
    return fracosc::covariance(pp, t, q, static_cast<fracosc::CovarianceRoute>(route));
  });
}

int fracosc_covariance_closed_alpha1(double gamma, double lambda, double t, double* out) {
  return scalar(out, [&] { return fracosc::covariance_closed_alpha1(gamma, lambda, t); });
}

int fracosc_variance(const fracosc_process* p, double* out) {
  return process_scalar(p, out, [&](auto& pp, auto&) { return fracosc::variance(pp); });
}

int fracosc_structure_function(const fracosc_process* p, double t, double* out) {
  return process_scalar(p, out, [&](auto& pp, auto& q) { return fracosc::structure_function(pp, t, q); });
}

int fracosc_thermal_covariance(const fracosc_process* p, double beta, double dt, int n_modes, double abs_tol,
                               double* out) {
  return process_scalar(
      p, out, [&](auto& pp, auto&) { return fracosc::thermal_covariance(pp, beta, dt, n_modes, abs_tol); });
}

int fracosc_relaxation_covariance(const fracosc_process* p, double dt, double tau1, double tau2, double* out) {
  return process_scalar(
      p, out, [&](auto& pp, auto& q) { return fracosc::relaxation_covariance(pp, dt, tau1, tau2, q); });
}

int fracosc_sigma2_small_t(const fracosc_process* p, fracosc_expansion** out) {
  if (p == nullptr) return null_argument();
  return make_expansion(out, [&] { return fracosc::sigma2_small_t(p->params); });
}

int fracosc_covariance_large_t(const fracosc_process* p, int n_terms, fracosc_expansion** out) {
  if (p == nullptr) return null_argument();
  return make_expansion(out, [&] { return fracosc::covariance_large_t(p->params, n_terms); });
}

void fracosc_expansion_destroy(fracosc_expansion* e) { delete e; }

int fracosc_expansion_size(const fracosc_expansion* e, size_t* out) {
  if (any_null(e, out)) return null_argument();
  *out = e->e.terms.size();
  return FRACOSC_OK;
}

int fracosc_expansion_term(const fracosc_expansion* e, size_t i, double* coeff, double* power, int* log_power) {
  if (e == nullptr) return null_argument();
  if (i >= e->e.terms.size()) {
    return fail(FRACOSC_E_RANGE, "term index " + std::to_string(i) + " outside an expansion of " +
                                     std::to_string(e->e.terms.size()) + " terms");
  }
  const auto& t = e->e.terms[i];
  if (coeff) *coeff = t.coeff;
  if (power) *power = t.power;
  if (log_power) *log_power = t.log_power;
  return FRACOSC_OK;
}

int fracosc_expansion_exp_rate(const fracosc_expansion* e, double* out) {
  if (any_null(e, out)) return null_argument();
  *out = e->e.exp_rate;
  return FRACOSC_OK;
}

int fracosc_expansion_evaluate(const fracosc_expansion* e, double x, int n, double* out) {
  if (e == nullptr) return null_argument();
  return scalar(out, [&] { return fracosc::evaluate_expansion(e->e, x, n); });
}

const char* fracosc_expansion_order_tag(const fracosc_expansion* e) { return e ? e->e.order_tag.c_str() : ""; }

const char* fracosc_expansion_validity(const fracosc_expansion* e) { return e ? e->e.validity.c_str() : ""; }

int fracosc_hurst_index(const fracosc_process* p, double* out) {
  return process_scalar(p, out, [](auto& pp, auto&) { return fracosc::hurst_index(pp); });
}

int fracosc_holder_exponent(const fracosc_process* p, double* out) {
  return process_scalar(p, out, [](auto& pp, auto&) { return fracosc::holder_exponent(pp); });
}

int fracosc_fractal_dimension(const fracosc_process* p, double* out) {
  return process_scalar(p, out, [](auto& pp, auto&) { return fracosc::fractal_dimension(pp); });
}

int fracosc_fbm_tangent_covariance(double H, double u, double v, double* out) {
  return scalar(out, [&] { return fracosc::fbm_tangent_covariance(H, u, v); });
}

int fracosc_srd_classify(const fracosc_process* p, fracosc_srd_tail* out) {
  if (any_null(p, out)) return null_argument();
  return guarded([&] {
    const auto s = fracosc::srd_tail(p->params);
    *out = {s.kind == fracosc::SrdTail::Kind::Exponential ? 1 : 0, s.exponent, s.rate, s.power, s.srd ? 1 : 0};
  });
}

int fracosc_fd_coefficient(const fracosc_process* p, double kT, double* B, double* n_factor) {
  if (any_null(p, B, n_factor)) return null_argument();
  return guarded([&] {
    const auto c = fracosc::fd_coefficient(p->params, kT);
    *B = c.B;
    *n_factor = c.n_factor;
  });
}

int fracosc_equipartition_variance(const fracosc_process* p, double B, double* out) {
  return process_scalar(p, out, [&](auto& pp, auto&) { return fracosc::equipartition_variance(pp, B); });
}

int fracosc_diffusion_constant(const fracosc_process* p, double B, double* out) {
  return process_scalar(p, out, [&](auto& pp, auto&) { return fracosc::diffusion_constant(pp, B); });
}

int fracosc_msd_velocity(const fracosc_process* p, double t, double* out) {
  return process_scalar(p, out, [&](auto& pp, auto& q) { return fracosc::msd_velocity(pp, t, q); });
}

int fracosc_msd_fractional(const fracosc_process* p, double chi, double t_max, double t, double* out) {
  return process_scalar(p, out, [&](auto& pp, auto& q) {
    fracosc::MsdSpec spec;
    spec.chi = chi;
    spec.t_max = t_max;
    spec.quad = q;
    return fracosc::msd_fractional(pp, spec, t);
  });
}

int fracosc_msd_asymptotic(const fracosc_process* p, double chi, double B, fracosc_expansion** out) {
  if (p == nullptr) return null_argument();
  return make_expansion(out, [&] { return fracosc::msd_asymptotic(p->params, chi, B); });
}

int fracosc_rl_kernel(double chi, double t, double tau, double* out) {
  return scalar(out, [&] { return fracosc::rl_kernel(chi, t, tau); });
}

int fracosc_covariance_first_moment(const fracosc_process* p, double* out) {
  return process_scalar(p, out, [](auto& pp, auto& q) { return fracosc::covariance_first_moment(pp, q); });
}

int fracosc_msd_normalization(const fracosc_process* p, double* out) {
  return process_scalar(p, out, [](auto& pp, auto&) { return fracosc::msd_normalization(pp); });
}

int fracosc_effective_diffusion(const fracosc_process* p, double kT, double t, double* out) {
  return process_scalar(p, out, [&](auto& pp, auto&) { return fracosc::effective_diffusion(pp, kT, t); });
}

int fracosc_standard_normal(uint64_t seed, uint64_t index, double* out) {
  return scalar(out, [&] { return fracosc::standard_normal(seed, index); });
}

int fracosc_sample_path(const fracosc_process* p, int n, double dt, uint64_t seed, int method,
                        const fracosc_sample_options* opt, fracosc_path** out) {
  if (p == nullptr) return null_argument();
  if (method != FRACOSC_CIRCULANT && method != FRACOSC_SPECTRAL) {
    return fail(FRACOSC_E_INVALID_ARGUMENT, "sample_path takes the circulant or spectral method");
  }
  return make_path(out, [&] {
    fracosc::SampleOptions o;
    if (opt != nullptr) {
      o.embed_tol = opt->embed_tol;
      o.max_embed_doublings = opt->max_embed_doublings;
      o.allow_fallback = opt->allow_fallback != 0;
      o.spectral_bins_per_point = opt->spectral_bins_per_point;
    }
    o.quad = p->quad;
    return fracosc::sample_path(p->params, n, dt, seed, static_cast<fracosc::SynthesisMethod>(method), o);
  });
}

int fracosc_sample_fbm(double H, int n, double dt, uint64_t seed, fracosc_path** out) {
  return make_path(out, [&] { return fracosc::sample_fbm(H, n, dt, seed); });
}

int fracosc_sample_thermal(const fracosc_process* p, double beta, int n_modes, int n, uint64_t seed,
                           fracosc_path** out) {
  if (p == nullptr) return null_argument();
  return make_path(out, [&] { return fracosc::sample_thermal(p->params, beta, n_modes, n, seed); });
}

int fracosc_thermal_truncated_variance(const fracosc_process* p, double beta, int n_modes, double* out) {
  return process_scalar(
      p, out, [&](auto& pp, auto&) { return fracosc::thermal_truncated_variance(pp, beta, n_modes); });
}

int fracosc_path_from_values(const double* values, size_t n, double dt, fracosc_path** out) {
  if (values == nullptr && n > 0) return null_argument();
  if (!(dt > 0.0)) return fail(FRACOSC_E_DOMAIN, "path spacing dt must be positive");
  return make_path(out, [&] {
    fracosc::SamplePath path;
    path.dt = dt;
    path.values.assign(values, values + n);
    return path;
  });
}

void fracosc_path_destroy(fracosc_path* path) { delete path; }

int fracosc_path_size(const fracosc_path* path, size_t* out) {
  if (any_null(path, out)) return null_argument();
  *out = path->path.values.size();
  return FRACOSC_OK;
}

int fracosc_path_dt(const fracosc_path* path, double* out) {
  if (any_null(path, out)) return null_argument();
  *out = path->path.dt;
  return FRACOSC_OK;
}

const double* fracosc_path_values(const fracosc_path* path) { return path ? path->path.values.data() : nullptr; }

int fracosc_path_method(const fracosc_path* path, int* out) {
  if (any_null(path, out)) return null_argument();
  *out = static_cast<int>(path->path.method);
  return FRACOSC_OK;
}

int fracosc_path_fallback(const fracosc_path* path, int* out) {
  if (any_null(path, out)) return null_argument();
  *out = path->path.fallback ? 1 : 0;
  return FRACOSC_OK;
}

int fracosc_path_variance_bias(const fracosc_path* path, double* out) {
  if (any_null(path, out)) return null_argument();
  *out = path->path.variance_bias;
  return FRACOSC_OK;
}

const char* fracosc_path_warning(const fracosc_path* path) { return path ? path->path.warning.c_str() : ""; }

int fracosc_variogram(const fracosc_path* path, int max_lag, double* lags, double* estimates, long* counts) {
  if (any_null(path, lags, estimates, counts)) return null_argument();
  return guarded([&] {
    const auto v = fracosc::empirical_variogram(path->path, max_lag);
    std::copy(v.lags.begin(), v.lags.end(), lags);
    std::copy(v.estimates.begin(), v.estimates.end(), estimates);
    std::copy(v.counts.begin(), v.counts.end(), counts);
  });
}

int fracosc_variogram_standard_error(const fracosc_process* p, double dt, int lag, long count, double* out) {
  return process_scalar(
      p, out, [&](auto& pp, auto&) { return fracosc::variogram_standard_error(pp, dt, lag, count); });
}

int fracosc_estimate_hurst(const double* lags, const double* estimates, size_t n, int fit_lo, int fit_hi, double* H,
                           double* std_error) {
  if (any_null(lags, estimates, H, std_error)) return null_argument();
  return guarded([&] {
    fracosc::Variogram v;
    v.lags.assign(lags, lags + n);
    v.estimates.assign(estimates, estimates + n);
    v.counts.assign(n, 0);
    const auto h = fracosc::estimate_hurst(v, fit_lo, fit_hi);
    *H = h.H;
    *std_error = h.std_error;
  });
}

int fracosc_rescaled_increment_path(const fracosc_path* path, int stride, double H, fracosc_path** out) {
  if (path == nullptr) return null_argument();
  return make_path(out, [&] { return fracosc::rescaled_increment_path(path->path, stride, H); });
}

int fracosc_rl_fractional_integral(const fracosc_path* path, double chi, fracosc_path** out) {
  if (path == nullptr) return null_argument();
  return make_path(out, [&] { return fracosc::rl_fractional_integral(path->path, chi); });
}

int fracosc_lambda_membership(double alpha, double tol, fracosc_lambda_branch* out) {
  if (out == nullptr) return null_argument();
  return guarded([&] {
    const auto b = fracosc::lambda_membership(alpha, lambda_tol_or_default(tol));
    *out = {b.in_lambda ? 1 : 0, b.u, b.sign};
  });
}

int fracosc_heat_remainder(double t, double alpha, double a, double* out) {
  return scalar(out, [&] { return fracosc::heat_remainder(t, alpha, a); });
}

int fracosc_zeta_value(double s, const fracosc_thermal_params* th, double alpha, double gamma, double* out) {
  if (th == nullptr) return null_argument();
  return scalar(out, [&] { return fracosc::zeta_value(s, thermal(th), alpha, gamma); });
}

int fracosc_zeta_at_zero(const fracosc_thermal_params* th, double alpha, double gamma, double* out) {
  if (th == nullptr) return null_argument();
  return scalar(out, [&] { return fracosc::zeta_at_zero(thermal(th), alpha, gamma); });
}

int fracosc_zeta_prime_at_zero(const fracosc_thermal_params* th, double alpha, double gamma, double* out) {
  if (th == nullptr) return null_argument();
  return scalar(out, [&] { return fracosc::zeta_prime_at_zero(thermal(th), alpha, gamma); });
}

int fracosc_free_energy(const fracosc_thermal_params* th, double alpha, double gamma, double lambda_tol,
                        fracosc_free_energy_result* out) {
  if (any_null(th, out)) return null_argument();
  return guarded([&] {
    const auto r = fracosc::free_energy(thermal(th), alpha, gamma, {}, lambda_tol_or_default(lambda_tol));
    fracosc_free_energy_result c{};
    c.zeta0 = r.zeta0;
    c.zeta0_prime = r.zeta0_prime;
    c.F = r.F;
    c.counterterm = r.counterterm;
    c.F_ren = r.F_ren;
    c.lambda_branch = {r.lambda_branch.in_lambda ? 1 : 0, r.lambda_branch.u, r.lambda_branch.sign};
    c.has_F_ren_lambda_branch = r.F_ren_lambda_branch.has_value() ? 1 : 0;
    c.F_ren_lambda_branch = r.F_ren_lambda_branch.value_or(0.0);
    const std::size_t len = std::min(r.warning.size(), sizeof(c.warning) - 1);
    std::memcpy(c.warning, r.warning.data(), len);
    c.warning[len] = '\0';
    *out = c;
  });
}

int fracosc_free_energy_low_t(const fracosc_thermal_params* th, double alpha, double gamma, int k_terms,
                              fracosc_expansion** out) {
  if (th == nullptr) return null_argument();
  return make_expansion(out, [&] { return fracosc::free_energy_low_T(thermal(th), alpha, gamma, k_terms); });
}

int fracosc_free_energy_high_t(const fracosc_thermal_params* th, double alpha, double gamma, int l_terms,
                               fracosc_expansion** out) {
  if (th == nullptr) return null_argument();
  return make_expansion(out, [&] { return fracosc::free_energy_high_T(thermal(th), alpha, gamma, l_terms); });
}

}  // extern "C"
