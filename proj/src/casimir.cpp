#include "fracosc/casimir.hpp"

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

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw Error(ErrorCode::Domain, "alpha must lie in (0, 1]");
}

void require_gamma(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw Error(ErrorCode::Domain, "gamma must be positive and finite");
}

// k(x) = K(t) as a function of x = t a^{2 alpha}.
class HeatKernel {
 public:
  explicit HeatKernel(double alpha) : alpha_(alpha) {
    // k(x) ~ sum_j c_j x^j with c_j = 2 (-1)^j zeta_R(-2 alpha j) / j!, and
    // |zeta_R(-s)| <= 2 Gamma(s+1) zeta(s+1) / (2 pi)^{s+1} bounds each term.
    double log_fact = 0.0;
    for (int j = 1; j <= kSeriesTerms; ++j) {
      log_fact += std::log(static_cast<double>(j));
      const double s = 2.0 * alpha * j;
      const double sign = (j % 2 == 0) ? 2.0 : -2.0;
      coeff_.push_back(sign * sf::riemann_zeta(-s) * std::exp(-log_fact));
      bound_.push_back(4.0 * std::exp(sf::log_gamma(s + 1.0) - (s + 1.0) * std::log(2.0 * kPi) - log_fact) *
                       sf::riemann_zeta(s + 1.0));
    }
    const double h = 0.5 / alpha;
    log_gamma_h_ = sf::log_gamma(h);
    // Taylor coefficients of (1 + y)^{2 alpha}
    binom_.resize(2 * kEmTerms);
    for (int j = 0; j < 2 * kEmTerms; ++j) binom_[j] = sf::binomial(2.0 * alpha, j);
  }

  static constexpr double kSeriesMax = 0.1;

  const std::vector<double>& coeff() const { return coeff_; }
  const std::vector<double>& bound() const { return bound_; }

  double operator()(double x) const { return x <= kSeriesMax ? series(x) : euler_maclaurin(x); }

 private:
  static constexpr int kSeriesTerms = 60;
  static constexpr int kEmTerms = 20;
  static constexpr int kEmStart = 32;

  double series(double x) const {
    double sum = 0.0, xj = 1.0;
    for (int j = 0; j < kSeriesTerms; ++j) {
      xj *= x;
      sum += coeff_[j] * xj;
      if (j > 0 && bound_[j] * xj < 1e-18 * x) break;
    }
    return sum;
  }

  // sum_{n>=1} f - int_0^inf f with f(n) = exp(-x n^{2 alpha}): explicit
  // terms below N, then Euler-Maclaurin at N with the integral over [0, N]
  // in closed form.
  double euler_maclaurin(double x) const {
    const double a2 = 2.0 * alpha_;
    const int N = kEmStart;
    double direct = 0.0;
    for (int n = 1; n < N; ++n) direct += std::exp(-x * std::pow(n, a2));
    const double xN = x * std::pow(N, a2);
    const double fN = std::exp(-xN);
    const double h = 0.5 / alpha_;
    const double head = std::exp(log_gamma_h_ - h * std::log(x)) * sf::gamma_p(h, xN) / a2;
    // Taylor coefficients of f(N + y) = exp(g(N + y)), g = -x n^{2 alpha}
    double correction = 0.0;
    if (fN > 0.0) {
      const int J = 2 * kEmTerms;
      std::vector<double> g(J), e(J);
      for (int j = 1; j < J; ++j) g[j] = -xN * binom_[j] * std::pow(N, -j);
      e[0] = fN;
      for (int j = 1; j < J; ++j) {
        double s = 0.0;
        for (int i = 1; i <= j; ++i) s += i * g[i] * e[j - i];
        e[j] = s / j;
      }
      // B_{2k}/(2k)! f^{(2k-1)}(N) = B_{2k}/(2k) e_{2k-1}
      for (int k = 1; k < kEmTerms; ++k) {
        const double term = sf::bernoulli_even(k) / (2.0 * k) * e[2 * k - 1];
        correction += term;
        if (std::abs(term) < 1e-18 * (1.0 + std::abs(direct))) break;
      }
    }
    return 2.0 * (direct + 0.5 * fN - head - correction) + 1.0;
  }

  double alpha_;
  double log_gamma_h_;
  std::vector<double> coeff_, bound_, binom_;
};

// J(sigma, rho) = int_0^inf x^{sigma-1} k(x) e^{-rho x} dx for sigma > -1.
double heat_mellin(const HeatKernel& k, double sigma, double rho, const QuadratureSpec& q) {
  const double x_lo = 1e-3 * std::min(1.0, 1.0 / rho);
  // [0, x_lo]: termwise in the series of k and of e^{-rho x}
  double head = 0.0;
  {
    const auto& c = k.coeff();
    const auto& b = k.bound();
    double xj = 1.0;
    for (std::size_t j = 0; j < c.size(); ++j) {
      xj *= x_lo;
      if (c[j] != 0.0) {
        double term = 1.0, s = 0.0;
        for (int l = 0; l < 200; ++l) {
          const double add = term / (sigma + j + 1 + l);
          s += add;
          if (std::abs(add) < 1e-18 * std::abs(s)) break;
          term *= -rho * x_lo / (l + 1);
        }
        head += c[j] * xj * std::pow(x_lo, sigma) * s;
      }
      if (j > 0 && b[j] * xj < 1e-18 * x_lo) break;
    }
  }
  const double x_hi = 60.0 / rho;
  std::vector<double> pts{x_lo};
  for (double x = 2.0 * x_lo; x < x_hi; x *= 2.0) pts.push_back(x);
  pts.push_back(x_hi);
  auto f = [&](double x) { return std::exp((sigma - 1.0) * std::log(x) - rho * x) * k(x); };
  const auto r = quad::integrate(f, pts, {q.abs_tol, q.rel_tol, q.max_subdivisions});
  return head + r.value;
}

// rho = m^2 / a^{2 alpha} = (beta m^{1/alpha} / 2pi)^{2 alpha}
double mass_ratio(const ThermalParams& th, double alpha) {
  return std::exp(2.0 * std::log(th.m) - 2.0 * alpha * std::log(th.a()));
}

double m_power(const ThermalParams& th, double alpha) { return std::pow(th.m, 1.0 / alpha); }

double lambda_coefficient(int u) { return sf::digamma(u + 1.0) - sf::digamma(1.0); }

}  // namespace

double ThermalParams::a() const { return 2.0 * kPi / beta; }

void ThermalParams::validate() const {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw Error(ErrorCode::Domain, "beta must be positive and finite");
  if (!(m > 0.0) || !std::isfinite(m)) throw Error(ErrorCode::Domain, "m must be positive and finite");
  if (!(mu > 0.0) || !std::isfinite(mu)) throw Error(ErrorCode::Domain, "mu must be positive and finite");
}

LambdaBranch lambda_membership(double alpha, double tol) {
  require_alpha(alpha);
  const double h = 0.5 / alpha;
  const double r = std::round(h);
  LambdaBranch b;
  if (r >= 1.0 && std::abs(h - r) <= tol) {
    b.in_lambda = true;
    b.u = static_cast<int>(r);
    b.sign = (b.u % 2 == 0) ? 1 : -1;
  }
  return b;
}

double heat_remainder(double t, double alpha, double a) {
  require_alpha(alpha);
  if (!(t > 0.0) || !std::isfinite(t)) throw Error(ErrorCode::Domain, "t must be positive and finite");
  if (!(a > 0.0) || !std::isfinite(a)) throw Error(ErrorCode::Domain, "a must be positive and finite");
  return HeatKernel(alpha)(t * std::pow(a, 2.0 * alpha));
}

double zeta_at_zero(const ThermalParams& th, double alpha, double gamma, double lambda_tol) {
  th.validate();
  require_gamma(gamma);
  const auto b = lambda_membership(alpha, lambda_tol);
  if (!b.in_lambda) return 0.0;
  return 2.0 * b.sign * m_power(th, alpha) / th.a();
}

double zeta_value(double s, const ThermalParams& th, double alpha, double gamma, const QuadratureSpec& q,
                  double lambda_tol) {
  th.validate();
  require_alpha(alpha);
  require_gamma(gamma);
  q.validate();
  if (!(s > -1.0 / gamma) || !std::isfinite(s)) throw Error(ErrorCode::Domain, "zeta(s) is continued to s > -1/gamma");
  const double sigma = gamma * s;
  if (sigma == 0.0) return zeta_at_zero(th, alpha, gamma, lambda_tol);
  const double h = 0.5 / alpha;
  const double z = sigma - h;
  if (z <= 0.0 && std::abs(z - std::round(z)) < 1e-12) {
    throw Error(ErrorCode::Pole, "zeta(s) has a pole where gamma s - 1/(2 alpha) is a nonpositive integer");
  }
  const double a = th.a();
  const double inv_g = sf::rgamma(sigma);
  const double first =
      sf::gamma_fn(h) * sf::gamma_fn(z) * inv_g / alpha / a * std::exp((1.0 / alpha - 2.0 * sigma) * std::log(th.m));
  const HeatKernel k(alpha);
  const double second = inv_g * std::exp(-2.0 * alpha * sigma * std::log(a)) * heat_mellin(k, sigma, mass_ratio(th, alpha), q);
  return first + second;
}

double zeta_prime_at_zero(const ThermalParams& th, double alpha, double gamma, const QuadratureSpec& q,
                          double lambda_tol) {
  th.validate();
  require_alpha(alpha);
  require_gamma(gamma);
  q.validate();
  const auto b = lambda_membership(alpha, lambda_tol);
  const double mp = m_power(th, alpha) / th.a();
  const double integral = heat_mellin(HeatKernel(alpha), 0.0, mass_ratio(th, alpha), q);
  double branch;
  if (b.in_lambda) {
    branch = 2.0 * b.sign * mp * gamma * (lambda_coefficient(b.u) - 2.0 * std::log(th.m));
  } else {
    branch = -gamma * 2.0 * kPi / std::sin(0.5 * kPi / alpha) * mp;
  }
  return branch + gamma * integral;
}

FreeEnergyResult free_energy(const ThermalParams& th, double alpha, double gamma, const QuadratureSpec& q,
                             double lambda_tol) {
  th.validate();
  require_alpha(alpha);
  require_gamma(gamma);
  q.validate();
  FreeEnergyResult r;
  r.lambda_branch = lambda_membership(alpha, lambda_tol);
  const auto& b = r.lambda_branch;
  const double beta = th.beta;
  const double log_m2 = 2.0 * std::log(th.m);
  const double mp = m_power(th, alpha);
  const double integral = heat_mellin(HeatKernel(alpha), 0.0, mass_ratio(th, alpha), q);
  const double mpa = mp / th.a();
  if (b.in_lambda) {
    r.zeta0 = 2.0 * b.sign * mpa;
    r.zeta0_prime = 2.0 * b.sign * mpa * gamma * (lambda_coefficient(b.u) - log_m2) + gamma * integral;
    r.counterterm = -b.sign / (2.0 * kPi) * mp * (2.0 * std::log(th.mu) + gamma * log_m2);
    // the counterterm amounts to mu^2 = m^{-2 gamma}
    r.F_ren = -(r.zeta0_prime + r.zeta0 * gamma * log_m2) / (2.0 * beta);
  } else {
    const double sine = std::sin(0.5 * kPi / alpha);
    r.zeta0_prime = -gamma * 2.0 * kPi / sine * mpa + gamma * integral;
    r.F_ren = -r.zeta0_prime / (2.0 * beta);
    if (std::abs(sine) < 1e-3) {
      const int u = static_cast<int>(std::round(0.5 / alpha));
      const int sign = (u % 2 == 0) ? 1 : -1;
      r.F_ren_lambda_branch = -(2.0 * sign * mpa * gamma * lambda_coefficient(u) + gamma * integral) / (2.0 * beta);
      r.warning = "alpha = " + std::to_string(alpha) + " is within " + std::to_string(std::abs(0.5 / alpha - u)) +
                  " of the Lambda point 1/(2*" + std::to_string(u) +
                  "); |sin(pi/(2 alpha))| < 1e-3 makes the off-Lambda formula ill-conditioned";
    }
  }
  r.F = -(r.zeta0_prime - r.zeta0 * 2.0 * std::log(th.mu)) / (2.0 * beta);
  return r;
}

AsymptoticExpansion free_energy_low_T(const ThermalParams& th, double alpha, double gamma, int k_terms,
                                      double lambda_tol) {
  th.validate();
  require_alpha(alpha);
  require_gamma(gamma);
  if (k_terms < 1) throw Error(ErrorCode::Domain, "k_terms must be at least 1");
  const auto b = lambda_membership(alpha, lambda_tol);
  const double mp = m_power(th, alpha);
  AsymptoticExpansion e;
  e.regime = Regime::SmallT;
  e.validity = "T m^{-1/alpha} << 1";
  if (b.in_lambda) {
    e.terms.push_back({-gamma * b.sign / (2.0 * kPi) * mp * lambda_coefficient(b.u), 0.0, 0});
  } else {
    e.terms.push_back({gamma * mp / (2.0 * std::sin(0.5 * kPi / alpha)), 0.0, 0});
  }
  const double log_m = std::log(th.m), log_2pi = std::log(2.0 * kPi);
  for (int k = 1; k <= k_terms; ++k) {
    const double s = 2.0 * alpha * k;
    const double zr = sf::riemann_zeta(-s);
    const double mag = zr == 0.0 ? 0.0 : std::exp(-2.0 * k * log_m + s * log_2pi) / k;
    e.terms.push_back({-gamma * ((k % 2 == 0) ? 1.0 : -1.0) * mag * zr, s + 1.0, 0});
  }
  e.order_tag = "O(T^" + std::to_string(2.0 * alpha * (k_terms + 1) + 1.0) + ")";
  return e;
}

AsymptoticExpansion free_energy_high_T(const ThermalParams& th, double alpha, double gamma, int l_terms,
                                       double lambda_tol) {
  th.validate();
  require_alpha(alpha);
  require_gamma(gamma);
  if (l_terms < 1) throw Error(ErrorCode::Domain, "l_terms must be at least 1");
  const double mp = m_power(th, alpha);
  if (!(th.beta * mp < 2.0 * kPi)) {
    throw Error(ErrorCode::Divergence, "high-temperature series needs beta m^{1/alpha} < 2 pi (got " +
                                           std::to_string(th.beta * mp) + ")");
  }
  const auto b = lambda_membership(alpha, lambda_tol);
  AsymptoticExpansion e;
  e.regime = Regime::SmallT;
  e.validity = "beta m^{1/alpha} < 2 pi";
  const double log_m = std::log(th.m);
  // (1/2beta) {gamma log m^2 + 2 alpha gamma log beta}
  e.terms.push_back({-alpha * gamma, -1.0, 1});
  e.terms.push_back({gamma * log_m, -1.0, 0});
  if (b.in_lambda) {
    const double c = gamma * b.sign * mp / (2.0 * kPi);
    const double psi1 = sf::digamma(1.0);
    e.terms.push_back({c * 2.0 * alpha, 0.0, 1});
    e.terms.push_back(
        {c * (2.0 * alpha * (std::log(2.0 * kPi) - log_m / alpha) + 2.0 * alpha * psi1 - sf::digamma(b.u) + psi1), 0.0,
         0});
  }
  const double log_2pi = std::log(2.0 * kPi);
  for (int l = 1; l <= l_terms; ++l) {
    if (b.in_lambda && l == b.u) continue;
    const double s = 2.0 * alpha * l;
    const double mag = std::exp(2.0 * l * log_m - s * log_2pi) / l;
    e.terms.push_back({-gamma * ((l % 2 == 0) ? 1.0 : -1.0) * mag * sf::riemann_zeta(s), s - 1.0, 0});
  }
  e.order_tag = "O((beta m^{1/alpha} / 2 pi)^{" + std::to_string(2.0 * alpha * (l_terms + 1)) + "} / beta)";
  return e;
}

}  // namespace fracosc
