#include "fracosc/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "fracosc/error.hpp"
#include "fracosc/quadrature.hpp"
#include "fracosc/specfun.hpp"

namespace fracosc {

namespace sf = specfun;

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) throw Error(ErrorCode::Domain, std::string(what) + " must be positive and finite");
}

void require_chi(double chi) {
  if (!(chi > 0.5 && chi < 1.5)) throw Error(ErrorCode::Domain, "chi must lie in (1/2, 3/2)");
}

double log_n_factor(const ProcessParams& p) {
  const double a = p.alpha(), g = p.gamma();
  return std::log(kPi * a) + sf::log_gamma(g) - sf::log_gamma(0.5 / a) - sf::log_gamma(g - 0.5 / a);
}

// The outer integrals sit on top of covariance quadratures, so asking for
// more than ~1e-11 relative only burns subdivisions on noise.
quad::Options outer_options(const QuadratureSpec& q) { return {0.0, std::max(q.rel_tol, 1e-11), q.max_subdivisions}; }

// Panel edges on [0, t] refined geometrically towards both ends at the
// covariance time scale.
std::vector<double> tau_breakpoints(double t, double scale) {
  std::vector<double> pts{0.0, t};
  for (int k = -30; k <= 60; ++k) {
    const double x = std::ldexp(scale, k);
    if (x >= t) break;
    pts.push_back(x);
    if (t - x > 0.0) pts.push_back(t - x);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

}  // namespace

ProcessParams to_covariance_convention(const ProcessParams& p) {
  return ProcessParams(p.alpha(), p.gamma(), std::pow(p.lambda(), p.alpha()));
}

void NoiseStrength::validate() const {
  require_positive(B, "B");
  require_positive(kT, "kT");
}

void MsdSpec::validate() const {
  require_chi(chi);
  require_positive(t_max, "t_max");
  quad.validate();
}

FdCoefficient fd_coefficient(const ProcessParams& p, double kT) {
  p.require_finite_variance();
  require_positive(kT, "kT");
  FdCoefficient out;
  out.n_factor = std::exp(log_n_factor(p));
  out.B = out.n_factor * std::pow(p.lambda(), 2.0 * p.ag() - 1.0) * std::pow(kT, p.ag());
  return out;
}

double equipartition_variance(const ProcessParams& p, double B) {
  p.require_finite_variance();
  require_positive(B, "B");
  return B * std::exp((1.0 - 2.0 * p.ag()) * std::log(p.lambda()) - log_n_factor(p));
}

double diffusion_constant(const ProcessParams& p, double B) {
  p.require_finite_variance();
  require_positive(B, "B");
  return B * std::pow(p.lambda(), -2.0 * p.ag());
}

double msd_velocity(const ProcessParams& p, double t, const QuadratureSpec& q) {
  p.require_finite_variance();
  q.validate();
  require_positive(t, "t");
  const ProcessParams pc = to_covariance_convention(p);
  auto f = [&](double tau) { return (t - tau) * covariance(pc, tau, q); };
  const auto pts = tau_breakpoints(t, pc.time_scale());
  return 2.0 * quad::integrate(f, pts, outer_options(q)).value;
}

double rl_kernel(double chi, double t, double tau) {
  require_chi(chi);
  require_positive(t, "t");
  if (tau >= t) return 0.0;
  if (tau <= 0.0) return std::pow(t, 2.0 * chi - 1.0) / (2.0 * chi - 1.0);
  const double span = t - tau;
  if (chi == 1.0) return span;
  // u = tau + (t - tau) w^{1/chi} absorbs (u - tau)^{chi-1}.
  const double inv_chi = 1.0 / chi;
  auto h = [&](double w) { return std::pow(tau + span * std::pow(w, inv_chi), chi - 1.0); };
  const double knee = std::min(1.0, std::pow(tau / span, chi));
  std::vector<double> pts{0.0, 1.0};
  for (int j = -40; j <= 20; ++j) {
    const double w = std::ldexp(knee, -2 * j);
    if (w > 0.0 && w < 1.0) pts.push_back(w);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const auto r = quad::integrate(h, pts, {0.0, 1e-13, 2000});
  return std::pow(span, chi) * inv_chi * r.value;
}

double msd_fractional(const ProcessParams& p, const MsdSpec& spec, double t) {
  p.require_finite_variance();
  spec.validate();
  require_positive(t, "t");
  if (t > spec.t_max) throw Error(ErrorCode::Range, "t exceeds the MsdSpec horizon t_max");
  const ProcessParams pc = to_covariance_convention(p);
  auto f = [&](double tau) { return rl_kernel(spec.chi, t, tau) * covariance(pc, tau, spec.quad); };
  const auto pts = tau_breakpoints(t, pc.time_scale());
  const double g = sf::gamma_fn(spec.chi);
  return 2.0 / (g * g) * quad::integrate(f, pts, outer_options(spec.quad)).value;
}

double covariance_first_moment(const ProcessParams& p, const QuadratureSpec& q) {
  p.require_finite_variance();
  q.validate();
  const double a = p.alpha(), g = p.gamma();
  if (!(a > 0.5)) throw Error(ErrorCode::Divergence, "int tau C(tau) dtau diverges for alpha <= 1/2");
  // int_0^inf tau C = -(1/pi) int_0^inf (g(w) - g(0)) / w^2 dw, in the lambda^2 convention.
  const double l2 = std::pow(p.lambda(), 2.0 * a);
  const double g0 = std::pow(l2, -g);
  // [0, w0]: binomial series in x = w^{2a}/l^2 <= 1/2.
  const double w0 = std::pow(0.5 * l2, 0.5 / a);
  double head = 0.0, coeff = 1.0, half_k = 1.0;
  for (int k = 1; k < 4000; ++k) {
    coeff *= (-g - (k - 1)) / k;
    half_k *= 0.5;
    const double term = coeff * half_k / (2.0 * a * k - 1.0);
    head += term;
    if (std::abs(term) < 1e-17 * std::abs(head)) break;
  }
  head *= g0 / w0;
  // [w0, inf): int g / w^2 = int_0^{1/w0} g(1/v) dv, minus g(0)/w0.
  auto h = [&](double v) {
    if (v == 0.0) return 0.0;
    const double lv = std::log(v);
    return std::exp(2.0 * a * g * lv - g * std::log1p(l2 * std::exp(2.0 * a * lv)));
  };
  std::vector<double> pts{0.0};
  for (int k = 80; k >= 0; --k) pts.push_back(std::ldexp(1.0 / w0, -k));
  const auto r = quad::integrate(h, pts, {0.0, 1e-14, q.max_subdivisions});
  return -(head + r.value - g0 / w0) / kPi;
}

AsymptoticExpansion msd_asymptotic(const ProcessParams& p, double chi, double B) {
  p.require_finite_variance();
  require_chi(chi);
  require_positive(B, "B");
  const double a = p.alpha();
  AsymptoticExpansion e;
  e.regime = Regime::LargeT;
  e.valid_class = p.regularity();
  e.validity = "t >> lambda^{-1}";
  const double g = sf::gamma_fn(chi);
  e.terms.push_back({2.0 * diffusion_constant(p, B) / ((2.0 * chi - 1.0) * g * g), 2.0 * chi - 1.0, 0});
  if (chi != 1.0) {
    const double order = std::max({0.0, 2.0 * chi - 2.0, 2.0 * chi - 2.0 * a - 1.0});
    e.order_tag = "O(t^" + std::to_string(order) + " log t)";
    return e;
  }
  const ProcessParams pc = to_covariance_convention(p);
  if (a == 1.0) {
    e.terms.push_back({-4.0 * B * covariance_first_moment(p), 0.0, 0});
    e.order_tag = "exponentially small";
  } else if (std::abs(a - 0.5) < 1e-12) {
    // int_0^t tau C ~ c1 log t
    const double c1 = 2.0 * B * covariance_large_t(pc, 1).terms[0].coeff;
    e.terms.push_back({2.0 * c1, 0.0, 1});
    e.order_tag = "O(1)";
  } else if (a > 0.5) {
    e.terms.push_back({-4.0 * B * covariance_first_moment(p), 0.0, 0});
    e.order_tag = "O(t^" + std::to_string(1.0 - 2.0 * a) + ")";
  } else {
    // -2 t int_t^inf C - 2 int_0^t tau C with C ~ c1 tau^{-2alpha-1}
    const double c1 = 2.0 * B * covariance_large_t(pc, 1).terms[0].coeff;
    e.terms.push_back({-2.0 * c1 * (0.5 / a + 1.0 / (1.0 - 2.0 * a)), 1.0 - 2.0 * a, 0});
    e.order_tag = "O(t^" + std::to_string(std::max(0.0, 1.0 - 4.0 * a)) + ")";
  }
  return e;
}

double msd_normalization(const ProcessParams& p) {
  p.require_finite_variance();
  const double ag = p.ag();
  if (ag >= 1.5) throw Error(ErrorCode::Regime, "chi = alpha*gamma must lie in (1/2, 3/2)");
  const double g = sf::gamma_fn(ag);
  return 2.0 * std::exp(log_n_factor(p)) * std::pow(p.lambda(), ag - 1.0) / ((2.0 * ag - 1.0) * g * g);
}

double effective_diffusion(const ProcessParams& p, double kT, double t) {
  p.require_finite_variance();
  require_positive(kT, "kT");
  require_positive(t, "t");
  const double ag = p.ag();
  return 0.5 * std::pow(kT / p.lambda(), ag) * (2.0 * ag - 1.0) * std::pow(t, 2.0 * ag - 2.0);
}

}  // namespace fracosc
