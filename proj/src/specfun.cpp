#include "fracosc/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fracosc/error.hpp"

namespace fracosc::specfun {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

// B_2 .. B_30 as exact ratios; larger indices come from zeta(2n).
constexpr std::array<std::array<double, 2>, 15> kBernoulliSmall = {{
    {1.0, 6.0},
    {-1.0, 30.0},
    {1.0, 42.0},
    {-1.0, 30.0},
    {5.0, 66.0},
    {-691.0, 2730.0},
    {7.0, 6.0},
    {-3617.0, 510.0},
    {43867.0, 798.0},
    {-174611.0, 330.0},
    {854513.0, 138.0},
    {-236364091.0, 2730.0},
    {8553103.0, 6.0},
    {-23749461029.0, 870.0},
    {8615841276005.0, 14322.0},
}};

// Euler-Maclaurin with N = 20 and 15 correction terms. Accurate to a few ulp
// for s >= 0, s != 1.
double zeta_euler_maclaurin(double s) {
  constexpr int n_head = 20;
  double sum = 0.0;
  for (int n = n_head - 1; n >= 1; --n) sum += std::pow(static_cast<double>(n), -s);
  const double big_n = n_head;
  const double n_pow = std::pow(big_n, -s);
  sum += big_n * n_pow / (s - 1.0) + 0.5 * n_pow;
  // term_k = B_2k / (2k)! * s (s+1) ... (s+2k-2) * N^{-s-2k+1}
  double rising = s;           // s (s+1) ... (s+2k-2)
  double factorial = 2.0;      // (2k)!
  double n_factor = n_pow / big_n;  // N^{-s-2k+1}
  for (int k = 1; k <= 15; ++k) {
    const double b2k = kBernoulliSmall[k - 1][0] / kBernoulliSmall[k - 1][1];
    const double term = b2k / factorial * rising * n_factor;
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    rising *= (s + 2 * k - 1) * (s + 2 * k);
    factorial *= (2.0 * k + 1.0) * (2.0 * k + 2.0);
    n_factor /= big_n * big_n;
  }
  return sum;
}

// K_nu(z) for non-integer nu from the reflection form
// pi / (2 sin(pi nu)) [I_{-nu}(z) - I_nu(z)], summed in long double.
double bessel_k_series_fractional(double nu, double z, const SpecFunConfig& cfg) {
  using ld = long double;
  const ld half_z = static_cast<ld>(z) / 2;
  const ld q = half_z * half_z;
  auto series_i = [&](ld order) {
    ld term = std::pow(half_z, order) / std::tgamma(1 + order);
    ld sum = term;
    for (int j = 1; j < cfg.max_terms; ++j) {
      term *= q / (static_cast<ld>(j) * (j + order));
      sum += term;
      if (std::abs(term) < static_cast<ld>(cfg.series_tol) * std::abs(sum)) break;
    }
    return sum;
  };
  const ld nu_l = nu;
  const ld diff = series_i(-nu_l) - series_i(nu_l);
  return static_cast<double>(std::numbers::pi_v<ld> / (2 * std::sin(std::numbers::pi_v<ld> * nu_l)) * diff);
}

long double digamma_int(int n) {
  // psi(n) = -gamma_E + H_{n-1}
  long double h = 0;
  for (int k = 1; k < n; ++k) h += 1.0L / k;
  return h - static_cast<long double>(kEulerGamma);
}

// Integer-order series, m >= 0.
double bessel_k_series_integer(int m, double z, const SpecFunConfig& cfg) {
  using ld = long double;
  const ld half_z = static_cast<ld>(z) / 2;
  const ld log_half_z = std::log(half_z);
  ld finite = 0;
  if (m > 0) {
    ld fact_mj1 = std::tgamma(static_cast<ld>(m));  // (m-j-1)!
    ld fact_j = 1;
    for (int j = 0; j < m; ++j) {
      if (j > 0) {
        fact_mj1 /= (m - j);
        fact_j *= j;
      }
      const ld sign = (j % 2 == 0) ? 1 : -1;
      finite += sign * fact_mj1 / fact_j * std::pow(half_z, static_cast<ld>(2 * j - m));
    }
    finite /= 2;
  }
  ld term = std::pow(half_z, static_cast<ld>(m)) / std::tgamma(static_cast<ld>(m + 1));
  ld psi_j = digamma_int(1);
  ld psi_jm = digamma_int(m + 1);
  ld sum = term * (log_half_z - psi_j / 2 - psi_jm / 2);
  for (int j = 1; j < cfg.max_terms; ++j) {
    term *= half_z * half_z / (static_cast<ld>(j) * (m + j));
    psi_j += 1.0L / j;
    psi_jm += 1.0L / (m + j);
    const ld contrib = term * (log_half_z - psi_j / 2 - psi_jm / 2);
    sum += contrib;
    if (std::abs(contrib) < static_cast<ld>(cfg.series_tol) * std::abs(sum)) break;
  }
  const ld sign = (m % 2 == 0) ? -1 : 1;  // (-1)^{m+1}
  return static_cast<double>(finite + sign * sum);
}

// Temme's normalisation of Steed's continued fraction CF2 for K_mu, K_{mu+1}
// with |mu| <= 1/2, followed by upward recurrence. Valid for z >= 2.
double bessel_k_continued_fraction(double nu, double z, const SpecFunConfig& cfg) {
  const int shift = static_cast<int>(std::floor(nu + 0.5));
  const double mu = nu - shift;
  const double mu2 = mu * mu;
  const double eps = std::numeric_limits<double>::epsilon();
  double b = 2.0 * (1.0 + z);
  double d = 1.0 / b;
  double h = d;
  double delh = d;
  double q1 = 0.0;
  double q2 = 1.0;
  const double a1 = 0.25 - mu2;
  double q = a1;
  double c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  int i = 1;
  for (; i < 10 * cfg.max_terms; ++i) {
    a -= 2 * i;
    c = -a * c / (i + 1.0);
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < eps) break;
  }
  if (i >= 10 * cfg.max_terms) {
    throw Error(ErrorCode::Truncation, "bessel_k: continued fraction did not converge");
  }
  h *= a1;
  double k_mu = std::sqrt(kPi / (2.0 * z)) * std::exp(-z) / s;
  double k_mu1 = k_mu * (mu + z + 0.5 - h) / z;
  for (int k = 1; k <= shift; ++k) {
    const double next = (mu + k) * (2.0 / z) * k_mu1 + k_mu;
    k_mu = k_mu1;
    k_mu1 = next;
  }
  return k_mu;
}

double bessel_k_asymptotic(double nu, double z, const SpecFunConfig& cfg) {
  const double four_nu2 = 4.0 * nu * nu;
  double term = 1.0;
  double sum = 1.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 1; k < cfg.max_terms; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = term * (four_nu2 - odd * odd) / (8.0 * k * z);
    if (std::abs(next) >= prev) break;  // optimal truncation
    prev = std::abs(next);
    term = next;
    sum += term;
    if (term == 0.0 || std::abs(term) < cfg.series_tol * std::abs(sum)) break;
  }
  return std::sqrt(kPi / (2.0 * z)) * std::exp(-z) * sum;
}

}  // namespace

void SpecFunConfig::validate() const {
  if (!(series_tol > 0.0 && series_tol <= 1e-6)) {
    throw Error(ErrorCode::Domain, "SpecFunConfig: series_tol must lie in (0, 1e-6]");
  }
  if (max_terms < 50) throw Error(ErrorCode::Domain, "SpecFunConfig: max_terms must be >= 50");
  if (!(series_max_z > 0.0 && asymptotic_min_z >= series_max_z)) {
    throw Error(ErrorCode::Domain, "SpecFunConfig: need 0 < series_max_z <= asymptotic_min_z");
  }
}

double gamma_fn(double x) {
  if (std::isnan(x)) throw Error(ErrorCode::Domain, "gamma_fn: NaN argument");
  if (is_nonpositive_integer(x)) {
    throw Error(ErrorCode::Pole, "gamma_fn: pole at nonpositive integer " + std::to_string(x));
  }
  const double g = std::tgamma(x);
  if (!std::isfinite(g)) throw Error(ErrorCode::Overflow, "gamma_fn: overflow at x = " + std::to_string(x));
  return g;
}

double log_gamma(double x) {
  if (is_nonpositive_integer(x)) {
    throw Error(ErrorCode::Pole, "log_gamma: pole at nonpositive integer " + std::to_string(x));
  }
  if (x < 0.5) {
    // Reflection keeps this free of the global signgam written by lgamma.
    return std::log(kPi / std::abs(std::sin(kPi * x))) - log_gamma(1.0 - x);
  }
  if (x < 15.0) return std::log(std::tgamma(x));
  // Stirling series
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  const double series =
      inv * (1.0 / 12 - inv2 * (1.0 / 360 - inv2 * (1.0 / 1260 - inv2 * (1.0 / 1680 - inv2 / 1188))));
  return (x - 0.5) * std::log(x) - x + 0.5 * std::log(2.0 * kPi) + series;
}

double rgamma(double x) {
  if (is_nonpositive_integer(x)) return 0.0;
  if (x > 171.0) return std::exp(-log_gamma(x));
  return 1.0 / std::tgamma(x);
}

double digamma(double x) {
  if (std::isnan(x)) throw Error(ErrorCode::Domain, "digamma: NaN argument");
  if (is_nonpositive_integer(x)) {
    throw Error(ErrorCode::Pole, "digamma: pole at nonpositive integer " + std::to_string(x));
  }
  if (x < 0.0) return digamma(1.0 - x) - kPi / std::tan(kPi * x);
  double acc = 0.0;
  while (x < 12.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  const double inv2 = 1.0 / (x * x);
  // -sum B_2k / (2k x^{2k})
  const double tail =
      inv2 * (1.0 / 12 -
              inv2 * (1.0 / 120 -
                      inv2 * (1.0 / 252 -
                              inv2 * (1.0 / 240 - inv2 * (1.0 / 132 - inv2 * (691.0 / 32760 - inv2 / 12.0))))));
  return acc + std::log(x) - 0.5 / x - tail;
}

double riemann_zeta(double s) {
  if (std::isnan(s)) throw Error(ErrorCode::Domain, "riemann_zeta: NaN argument");
  if (s == 1.0) throw Error(ErrorCode::Pole, "riemann_zeta: pole at s = 1");
  if (s >= 0.0) return zeta_euler_maclaurin(s);
  if (std::fmod(s, 2.0) == 0.0) return 0.0;  // trivial zeros
  // zeta(s) = 2^s pi^{s-1} sin(pi s / 2) Gamma(1-s) zeta(1-s), in log form
  const double one_minus_s = 1.0 - s;
  const double sine = std::sin(0.5 * kPi * std::fmod(s, 4.0));
  const double log_mag = s * std::log(2.0) + (s - 1.0) * std::log(kPi) + std::log(std::abs(sine)) +
                         log_gamma(one_minus_s) + std::log(zeta_euler_maclaurin(one_minus_s));
  if (log_mag > std::log(std::numeric_limits<double>::max())) {
    throw Error(ErrorCode::Overflow, "riemann_zeta: overflow at s = " + std::to_string(s));
  }
  return std::copysign(std::exp(log_mag), sine);
}

double bessel_k(double nu, double z, const SpecFunConfig& cfg) {
  if (!(z > 0.0)) throw Error(ErrorCode::Domain, "bessel_k: z must be positive");
  if (std::isnan(nu)) throw Error(ErrorCode::Domain, "bessel_k: NaN order");
  nu = std::abs(nu);  // K_nu = K_{-nu}
  if (z >= cfg.asymptotic_min_z) return bessel_k_asymptotic(nu, z, cfg);
  if (z > cfg.series_max_z) return bessel_k_continued_fraction(nu, z, cfg);
  const double nearest = std::round(nu);
  if (std::abs(nu - nearest) <= cfg.integer_nu_tol) {
    return bessel_k_series_integer(static_cast<int>(nearest), z, cfg);
  }
  return bessel_k_series_fractional(nu, z, cfg);
}

double bernoulli_even(int n) {
  if (n < 1 || n > 40) throw Error(ErrorCode::Range, "bernoulli_even: n must be in [1, 40]");
  if (n <= static_cast<int>(kBernoulliSmall.size())) {
    return kBernoulliSmall[n - 1][0] / kBernoulliSmall[n - 1][1];
  }
  // B_2n = (-1)^{n+1} 2 (2n)! zeta(2n) / (2 pi)^{2n}
  const double two_n = 2.0 * n;
  const double log_mag = std::log(2.0) + log_gamma(two_n + 1.0) - two_n * std::log(2.0 * kPi);
  const double mag = std::exp(log_mag) * zeta_euler_maclaurin(two_n);
  return (n % 2 == 1) ? mag : -mag;
}

double gamma_p(double s, double x) {
  if (!(s > 0.0) || x < 0.0) throw Error(ErrorCode::Domain, "gamma_p: need s > 0, x >= 0");
  if (x == 0.0) return 0.0;
  const double eps = 1e-16;
  const double log_prefactor = s * std::log(x) - x - log_gamma(s);
  if (x < s + 1.0) {
    double ap = s;
    double del = 1.0 / s;
    double sum = del;
    for (int n = 0; n < 10000; ++n) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::abs(del) < std::abs(sum) * eps) break;
    }
    return sum * std::exp(log_prefactor);
  }
  // Lentz continued fraction for Q(s, x)
  const double tiny = 1e-300;
  double b = x + 1.0 - s;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < eps) break;
  }
  return 1.0 - std::exp(log_prefactor) * h;
}

double binomial(double a, int j) {
  double r = 1.0;
  for (int i = 0; i < j; ++i) r *= (a - i) / (i + 1);
  return r;
}

}  // namespace fracosc::specfun
