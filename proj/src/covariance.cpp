#include "fracosc/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "fracosc/error.hpp"
#include "fracosc/quadrature.hpp"
#include "fracosc/specfun.hpp"
#include "spectral.hpp"

namespace fracosc {

namespace sf = specfun;

namespace {

constexpr double kPi = std::numbers::pi;

quad::Options options_of(const QuadratureSpec& q) {
  return {q.abs_tol, q.rel_tol, q.max_subdivisions};
}

}  // namespace

const char* to_string(RegularityClass c) noexcept {
  switch (c) {
    case RegularityClass::GeneralizedOnly: return "GeneralizedOnly";
    case RegularityClass::Rough: return "Rough";
    case RegularityClass::Borderline: return "Borderline";
    case RegularityClass::Smooth: return "Smooth";
  }
  return "unknown";
}

ProcessParams::ProcessParams(double alpha, double gamma, double lambda)
    : alpha_(alpha), gamma_(gamma), lambda_(lambda) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCode::Domain, "alpha must lie in (0, 1], got " + std::to_string(alpha));
  }
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw Error(ErrorCode::Domain, "gamma must be positive, got " + std::to_string(gamma));
  }
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::Domain, "lambda must be positive, got " + std::to_string(lambda));
  }
}

RegularityClass ProcessParams::regularity(double tol_class) const noexcept {
  const double ag = alpha_ * gamma_;
  if (ag <= 0.5) return RegularityClass::GeneralizedOnly;
  if (std::abs(ag - 1.5) <= tol_class) return RegularityClass::Borderline;
  return ag < 1.5 ? RegularityClass::Rough : RegularityClass::Smooth;
}

void ProcessParams::require_finite_variance() const {
  if (alpha_ * gamma_ <= 0.5) {
    throw Error(ErrorCode::GeneralizedOnly,
                "alpha*gamma <= 1/2: generalized regime not supported (alpha*gamma = " +
                    std::to_string(alpha_ * gamma_) + ")");
  }
}

double ProcessParams::time_scale() const noexcept { return std::pow(lambda_, -1.0 / alpha_); }

void QuadratureSpec::validate() const {
  if (!(abs_tol > 0.0 && abs_tol <= 1e-4)) throw Error(ErrorCode::Domain, "abs_tol must lie in (0, 1e-4]");
  if (!(rel_tol > 0.0 && rel_tol <= 1e-4)) throw Error(ErrorCode::Domain, "rel_tol must lie in (0, 1e-4]");
  if (max_subdivisions < 1) throw Error(ErrorCode::Domain, "max_subdivisions must be positive");
  if (!(t_switch > 0.0)) throw Error(ErrorCode::Domain, "t_switch must be positive");
  if (tail_power_terms < 1) throw Error(ErrorCode::Domain, "tail_power_terms must be positive");
}

double spectral_density(const ProcessParams& p, double omega) {
  return detail::Spectrum(p).g(std::abs(omega)) / (2.0 * kPi);
}

double spectral_density_type12(const ProcessParams& p, double omega) {
  const double a = p.alpha(), l = p.lambda();
  const double w = std::abs(omega);
  const double wa = std::pow(w, a);
  const double base = wa * wa + 2.0 * l * wa * std::cos(kPi * a / 2.0) + l * l;
  return std::pow(base, -p.gamma()) / (2.0 * kPi);
}

double variance(const ProcessParams& p) {
  p.require_finite_variance();
  const double a = p.alpha(), g = p.gamma();
  const double h = 1.0 / (2.0 * a);
  const double log_v = sf::log_gamma(h) + sf::log_gamma(g - h) - sf::log_gamma(g) +
                       (1.0 / a - 2.0 * g) * std::log(p.lambda());
  return std::exp(log_v) / (2.0 * kPi * a);
}

double covariance_closed_alpha1(double gamma, double lambda, double t) {
  if (!(gamma > 0.5)) throw Error(ErrorCode::Domain, "closed form needs gamma > 1/2");
  if (!(lambda > 0.0)) throw Error(ErrorCode::Domain, "lambda must be positive");
  const double at = std::abs(t);
  const double nu = gamma - 0.5;
  if (at == 0.0) {
    const double frac = nu - std::floor(nu);
    if (frac == 0.0) return variance(ProcessParams(1.0, gamma, lambda));
    return std::sqrt(kPi) /
           (2.0 * std::pow(lambda, 2.0 * gamma - 1.0) * std::sin(kPi * nu) * sf::gamma_fn(gamma) *
            sf::gamma_fn(1.5 - gamma));
  }
  const double z = lambda * at;
  const double log_c = (0.5 - gamma) * std::log(2.0) - 0.5 * std::log(kPi) - sf::log_gamma(gamma) +
                       nu * std::log(at / lambda);
  return std::exp(log_c) * sf::bessel_k(nu, z);
}

double structure_function(const ProcessParams& p, double t, const QuadratureSpec& q) {
  p.require_finite_variance();
  q.validate();
  const double at = std::abs(t);
  if (at == 0.0) return 0.0;
  const detail::Spectrum s(p);
  const double cutoff = std::max(100.0 / at, s.tail_start());
  const auto pts = s.breakpoints(0.0, cutoff, at);
  auto f = [&](double w) {
    const double sn = std::sin(0.5 * w * at);
    return 2.0 * sn * sn * s.g(w);
  };
  const auto body = quad::integrate(f, pts, options_of(q));
  const double tail = s.plain_tail(cutoff, q) - s.cos_tail_asymptotic(cutoff, at);
  return (2.0 / kPi) * (body.value + tail);
}

namespace {

double laplace_covariance(const ProcessParams& p, double at, const QuadratureSpec& q) {
  const double a = p.alpha(), g = p.gamma();
  const double l2 = p.lambda() * p.lambda();
  const double sa = std::sin(kPi * a);
  const double one_plus_ca = 2.0 * std::pow(std::cos(kPi * a / 2.0), 2);
  const double log_l2 = std::log(l2);
  // Principal branch: the base lies in the lower half plane with argument in (-pi a, 0].
  // Its real part l^2 + cos(pi a) u^{2a} is split as (l^2 - u^{2a}) + (1 + cos(pi a)) u^{2a}
  // so that it stays accurate where it nearly vanishes as alpha -> 1.
  auto f = [&](double x) {
    const double u = std::exp(x);
    const double damp = std::exp(-u * at);
    if (damp == 0.0) return 0.0;
    const double u2a = std::exp(2.0 * a * x);
    const double re = -l2 * std::expm1(2.0 * a * x - log_l2) + one_plus_ca * u2a;
    const double im = -sa * u2a;
    const double modulus = std::hypot(re, im);
    const double arg = std::atan2(im, re);
    return u * damp * std::pow(modulus, -g) * std::sin(-g * arg);
  };
  const double x_hi = std::log(60.0 / at);
  const double x_lo = std::log(std::pow(1e-18, 1.0 / (2.0 * a + 1.0)) / at);
  std::vector<double> pts;
  for (double x = x_lo; x < x_hi; x += 1.0) pts.push_back(x);
  pts.push_back(x_hi);
  const double x_lam = std::log(l2) / (2.0 * a);
  if (x_lam > x_lo && x_lam < x_hi) pts.push_back(x_lam);
  std::sort(pts.begin(), pts.end());
  const auto r = quad::integrate(f, pts, options_of(q));
  return r.value / kPi;
}

}  // namespace

double covariance(const ProcessParams& p, double t, const QuadratureSpec& q, CovarianceRoute route) {
  p.require_finite_variance();
  q.validate();
  const double at = std::abs(t);
  if (route == CovarianceRoute::Auto) {
    if (p.alpha() == 1.0) {
      route = CovarianceRoute::ClosedForm;
    } else if (at / p.time_scale() >= q.t_switch) {
      route = CovarianceRoute::Laplace;
    } else {
      route = CovarianceRoute::StructureFunction;
    }
  }
  switch (route) {
    case CovarianceRoute::ClosedForm:
      if (p.alpha() != 1.0) throw Error(ErrorCode::Domain, "closed-form covariance needs alpha = 1");
      return covariance_closed_alpha1(p.gamma(), p.lambda(), at);
    case CovarianceRoute::Laplace:
      if (p.alpha() >= 1.0) {
        throw Error(ErrorCode::Domain, "Laplace representation needs alpha < 1 (branch point on the path)");
      }
      if (at == 0.0) return variance(p);
      return laplace_covariance(p, at, q);
    case CovarianceRoute::StructureFunction:
    case CovarianceRoute::Auto:
      break;
  }
  if (at == 0.0) return variance(p);
  return variance(p) - 0.5 * structure_function(p, at, q);
}

ThermalResult thermal_covariance_detail(const ProcessParams& p, double beta, double dt, int n_modes,
                                        const QuadratureSpec& q) {
  p.require_finite_variance();
  q.validate();
  if (!(beta > 0.0) || !std::isfinite(beta)) throw Error(ErrorCode::Domain, "beta must be positive");
  if (n_modes < 1) throw Error(ErrorCode::Domain, "n_modes must be positive");
  if (!std::isfinite(dt)) throw Error(ErrorCode::Domain, "dt must be finite");
  const detail::Spectrum s(p);
  // The sum is exactly beta-periodic and even; reduce so the tail integral sees |dt| <= beta/2.
  const double r = std::abs(dt - beta * std::nearbyint(dt / beta));
  const double step = 2.0 * kPi / beta;
  double sum = 0.0;
  for (int n = n_modes; n >= 1; --n) {
    const double w = step * n;
    sum += std::cos(w * r) * s.g(w);
  }
  ThermalResult out;
  const double head = (s.g(0.0) + 2.0 * sum) / beta;
  const double edge = step * (n_modes + 0.5);
  // Midpoint Euler-Maclaurin for the modes beyond N: the sum equals the
  // integral plus c_k step^{2k} h^{(2k-1)}(edge), h(w) = cos(w r) g(w).
  const auto d = s.derivatives(edge, 5);
  auto h = [&](int m) {
    double acc = 0.0, binom = 1.0, rk = 1.0;
    for (int k = 0; k <= m; ++k) {
      acc += binom * rk * std::cos(edge * r + k * kPi / 2.0) * d[m - k];
      binom = binom * (m - k) / (k + 1);
      rk *= r;
    }
    return acc;
  };
  const double s2 = step * step;
  const double integral = (r == 0.0) ? s.plain_tail(edge, q) : s.cos_tail(edge, r, q);
  out.tail = (integral + s2 / 24.0 * h(1) - 7.0 * s2 * s2 / 5760.0 * h(3)) / kPi;
  out.error_estimate = 31.0 / (32.0 * 42.0 * 720.0) * s2 * s2 * s2 * std::abs(h(5)) / kPi;
  out.value = head + out.tail;
  return out;
}

double thermal_covariance(const ProcessParams& p, double beta, double dt, int n_modes, double abs_tol) {
  QuadratureSpec q;
  const auto r = thermal_covariance_detail(p, beta, dt, n_modes, q);
  if (r.error_estimate > abs_tol) {
    throw Error(ErrorCode::Truncation, "thermal mode sum: tail error estimate " +
                                           std::to_string(r.error_estimate) + " exceeds " +
                                           std::to_string(abs_tol) + "; raise n_modes");
  }
  return r.value;
}

namespace {

// (1/pi) int_0^inf cos(w dt) e^{-A s} / A dw with A = (w^{2a} + l^2)^g, s > 0.
double relaxation_term(const ProcessParams& p, double dt, double s, const QuadratureSpec& q) {
  const double a = p.alpha(), g = p.gamma(), l2 = p.lambda() * p.lambda();
  const double a0 = std::pow(l2, g);
  if (a0 * s > 745.0) return 0.0;
  const double w_max = std::pow(std::pow(a0 + 42.0 / s, 1.0 / g) - l2, 1.0 / (2.0 * a));
  const detail::Spectrum sp(p);
  const auto pts = sp.breakpoints(0.0, w_max, std::abs(dt));
  auto f = [&](double w) {
    const double big_a = std::pow(std::pow(w, 2.0 * a) + l2, g);
    return std::cos(w * dt) * std::exp(-big_a * s) / big_a;
  };
  return quad::integrate(f, pts, options_of(q)).value / kPi;
}

}  // namespace

double relaxation_covariance(const ProcessParams& p, double dt, double tau1, double tau2,
                             const QuadratureSpec& q) {
  p.require_finite_variance();
  q.validate();
  if (!(tau1 >= 0.0) || !(tau2 >= 0.0)) throw Error(ErrorCode::Domain, "auxiliary times must be nonnegative");
  if (std::min(tau1, tau2) == 0.0) return 0.0;
  const double diff = std::abs(tau1 - tau2);
  const double first = diff == 0.0 ? covariance(p, dt, q) : relaxation_term(p, dt, diff, q);
  return first - relaxation_term(p, dt, tau1 + tau2, q);
}

}  // namespace fracosc
