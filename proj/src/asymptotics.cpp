#include "fracosc/asymptotics.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fracosc/error.hpp"
#include "fracosc/specfun.hpp"

namespace fracosc {

namespace sf = specfun;

namespace {
constexpr double kPi = std::numbers::pi;
}

AsymptoticExpansion sigma2_small_t(const ProcessParams& p) {
  p.require_finite_variance();
  const double a = p.alpha(), g = p.gamma(), ag = p.ag();
  const double log_l = std::log(p.lambda());
  AsymptoticExpansion e;
  e.regime = Regime::SmallT;
  e.valid_class = p.regularity();
  e.validity = "|t| <= 0.01 lambda^{-1/alpha}";
  switch (e.valid_class) {
    case RegularityClass::Rough: {
      // cos(pi ag) < 0 on (1/2, 3/2), so the coefficient is positive
      const double c = -1.0 / (std::cos(kPi * ag) * sf::gamma_fn(2.0 * ag));
      e.terms.push_back({c, 2.0 * ag - 1.0, 0});
      e.order_tag = "o(|t|^{2 alpha gamma - 1})";
      break;
    }
    case RegularityClass::Smooth: {
      const double log_c = (3.0 / a - 2.0 * g) * log_l + sf::log_gamma(1.5 / a) + sf::log_gamma(g - 1.5 / a) -
                           sf::log_gamma(g);
      e.terms.push_back({std::exp(log_c) / (2.0 * kPi * a), 2.0, 0});
      e.order_tag = "o(|t|^2)";
      break;
    }
    case RegularityClass::Borderline: {
      const double psi1 = -sf::kEulerGamma;
      const double brace = log_l / a + (sf::digamma(g) - psi1) / (2.0 * a) - psi1 - 1.5;
      e.terms.push_back({1.0 / kPi, 2.0, 1});
      e.terms.push_back({-brace / kPi, 2.0, 0});
      e.order_tag = "o(|t|^2)";
      break;
    }
    case RegularityClass::GeneralizedOnly:
      break;  // unreachable after require_finite_variance
  }
  return e;
}

AsymptoticExpansion covariance_large_t(const ProcessParams& p, int n_terms) {
  p.require_finite_variance();
  if (n_terms < 1) throw Error(ErrorCode::Domain, "n_terms must be positive");
  const double a = p.alpha(), g = p.gamma(), l = p.lambda();
  AsymptoticExpansion e;
  e.regime = Regime::LargeT;
  e.valid_class = p.regularity();
  if (a == 1.0) {
    e.terms.push_back({1.0 / (std::pow(2.0 * l, g) * sf::gamma_fn(g)), g - 1.0, 0});
    e.exp_rate = l;
    e.validity = "alpha = 1, |t| >= 10/lambda";
    e.order_tag = "relative O(1/|t|)";
    return e;
  }
  e.validity = "alpha in (0,1), |t| >= 10 lambda^{-1/alpha}";
  const double log_l = std::log(l);
  for (int j = 1; j <= n_terms; ++j) {
    // sin(pi alpha j) vanishes exactly when alpha j is an integer
    const double aj = a * j;
    const double s = std::abs(aj - std::round(aj)) < 1e-12 ? 0.0 : std::sin(kPi * aj);
    const double log_mag = -2.0 * (g + j) * log_l - sf::log_gamma(j + 1.0) + sf::log_gamma(g + j) +
                           sf::log_gamma(1.0 + 2.0 * a * j) - sf::log_gamma(g);
    const double sign = (j % 2 == 1) ? 1.0 : -1.0;
    e.terms.push_back({sign * std::exp(log_mag) * s / kPi, -(2.0 * a * j + 1.0), 0});
  }
  e.order_tag = "O(|t|^{-(2 alpha (n+1) + 1)})";
  return e;
}

double evaluate_expansion(const AsymptoticExpansion& e, double x, int n) {
  if (x == 0.0 || !std::isfinite(x)) throw Error(ErrorCode::Domain, "expansion argument must be finite and nonzero");
  const double ax = std::abs(x);
  const double log_inv = -std::log(ax);
  const std::size_t count = n < 0 ? e.terms.size() : std::min<std::size_t>(n, e.terms.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const auto& t = e.terms[i];
    if (t.coeff == 0.0) continue;
    sum += t.coeff * std::pow(ax, t.power) * std::pow(log_inv, t.log_power);
  }
  if (e.exp_rate != 0.0) sum *= std::exp(-e.exp_rate * ax);
  return sum;
}

double hurst_index(const ProcessParams& p) {
  if (p.regularity() != RegularityClass::Rough) {
    throw Error(ErrorCode::Regime, "Hurst index needs 1/2 < alpha*gamma < 3/2 (alpha*gamma = " +
                                       std::to_string(p.ag()) + ")");
  }
  return p.ag() - 0.5;
}

double fractal_dimension(const ProcessParams& p) {
  p.require_finite_variance();
  return std::max(1.0, 2.5 - p.ag());
}

double holder_exponent(const ProcessParams& p) {
  p.require_finite_variance();
  return std::min(p.ag() - 0.5, 1.0);
}

double fbm_tangent_covariance(double H, double u, double v) {
  if (!(H > 0.0 && H < 1.0)) throw Error(ErrorCode::Domain, "H must lie in (0, 1)");
  const double c = -1.0 / (2.0 * std::cos(kPi * (H + 0.5)) * sf::gamma_fn(2.0 * H + 1.0));
  const double h2 = 2.0 * H;
  return c * (std::pow(std::abs(u), h2) + std::pow(std::abs(v), h2) - std::pow(std::abs(u - v), h2));
}

SrdTail srd_tail(const ProcessParams& p) {
  p.require_finite_variance();
  SrdTail s;
  if (p.alpha() == 1.0) {
    s.kind = SrdTail::Kind::Exponential;
    s.rate = p.lambda();
    s.power = p.gamma() - 1.0;
  } else {
    s.kind = SrdTail::Kind::PowerLaw;
    s.exponent = 2.0 * p.alpha() + 1.0;
  }
  s.srd = true;  // 2 alpha + 1 > 1, and exponential tails are integrable
  return s;
}

}  // namespace fracosc
