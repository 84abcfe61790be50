#pragma once

// Internal helpers around g(w) = (w^{2a} + l^2)^{-gamma}: breakpoints for
// oscillatory quadrature, derivatives, and the analytic tails beyond a cutoff.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "fracosc/covariance.hpp"
#include "fracosc/error.hpp"
#include "fracosc/quadrature.hpp"
#include "fracosc/specfun.hpp"

namespace fracosc::detail {

class Spectrum {
 public:
  explicit Spectrum(const ProcessParams& p)
      : a_(p.alpha()), g_(p.gamma()), l2_(p.lambda() * p.lambda()), wc_(std::pow(p.lambda(), 1.0 / p.alpha())) {}

  double g(double w) const { return std::pow(std::pow(w, 2.0 * a_) + l2_, -g_); }

  /// Smallest cutoff for which l^2 / w^{2a} <= 1/2.
  double tail_start() const { return std::pow(2.0 * l2_, 1.0 / (2.0 * a_)); }

  /// Panel edges on [lo, hi]: geometric around the spectral scale plus every
  /// period 2 pi / t of the oscillatory factor.
  std::vector<double> breakpoints(double lo, double hi, double t) const {
    std::vector<double> pts{lo, hi};
    for (int k = -40; k <= 60; ++k) {
      const double x = std::ldexp(wc_, k);
      if (x > lo && x < hi) pts.push_back(x);
    }
    if (t > 0.0) {
      const double period = 2.0 * std::numbers::pi / t;
      const double first = std::ceil(lo / period);
      const double last = std::floor(hi / period);
      const double count = last - first + 1.0;
      const double stride = count > 20000.0 ? std::ceil(count / 20000.0) : 1.0;
      for (double k = std::max(first, 1.0); k <= last; k += stride) {
        const double x = k * period;
        if (x > lo && x < hi) pts.push_back(x);
      }
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
  }

  /// Scaled Taylor coefficients f_n = g^{(n)}(w) w^n / n!, n = 0..n_max,
  /// from the power recurrence applied to w^{2a} + l^2.
  std::vector<double> scaled_taylor(double w, int n_max) const {
    std::vector<double> base(n_max + 1), f(n_max + 1);
    const double w2a = std::pow(w, 2.0 * a_);
    base[0] = w2a + l2_;
    double binom = 1.0;
    for (int k = 1; k <= n_max; ++k) {
      binom *= (2.0 * a_ - (k - 1)) / k;
      base[k] = binom * w2a;
    }
    const double pw = -g_;
    f[0] = std::pow(base[0], pw);
    for (int n = 1; n <= n_max; ++n) {
      double acc = 0.0;
      for (int k = 1; k <= n; ++k) acc += (pw * k - (n - k)) * base[k] * f[n - k];
      f[n] = acc / (n * base[0]);
    }
    return f;
  }

  /// g and its first n derivatives at w > 0.
  std::vector<double> derivatives(double w, int n) const {
    auto f = scaled_taylor(w, n);
    double fact = 1.0;
    for (int k = 0; k <= n; ++k) {
      if (k > 0) fact *= k;
      f[k] *= fact / std::pow(w, k);
    }
    return f;
  }

  /// int_W^inf g(w) dw.
  double plain_tail(double cut, const QuadratureSpec& q) const {
    const double start = tail_start();
    double head = 0.0;
    if (cut < start) {
      auto f = [this](double w) { return g(w); };
      head = quad::integrate(f, breakpoints(cut, start, 0.0), {q.abs_tol, q.rel_tol, q.max_subdivisions}).value;
      cut = start;
    }
    const double r = l2_ / std::pow(cut, 2.0 * a_);
    const double s0 = 2.0 * a_ * g_;
    double sum = 0.0, rj = 1.0;
    bool converged = false;
    for (int j = 0; j < q.tail_power_terms; ++j) {
      const double term = specfun::binomial(-g_, j) * rj / (s0 + 2.0 * a_ * j - 1.0);
      sum += term;
      if (std::abs(term) <= 1e-18 * std::abs(sum)) {
        converged = true;
        break;
      }
      rj *= r;
    }
    if (!converged) {
      throw Error(ErrorCode::Truncation, "spectral tail: binomial series not converged in " +
                                             std::to_string(q.tail_power_terms) + " terms");
    }
    return head + std::pow(cut, 1.0 - s0) * sum;
  }

  /// int_W^inf cos(w t) g(w) dw by repeated integration by parts; needs W t
  /// large (>= about 60) for full double precision.
  double cos_tail_asymptotic(double cut, double t) const {
    constexpr int kMax = 400;
    const double theta = cut * t;
    const double sn = std::sin(theta), cs = std::cos(theta);
    const double phase[4] = {-sn, cs, sn, -cs};
    const auto f = scaled_taylor(cut, kMax);
    double sum = 0.0, scale = 0.0;
    double ratio = 1.0 / t;  // k! / (W t)^k / t
    double prev = HUGE_VAL;
    for (int k = 0; k <= kMax; ++k) {
      if (k > 0) ratio *= k / theta;
      const double term = ((k % 2) ? -1.0 : 1.0) * f[k] * ratio;
      const double mag = std::abs(term);
      if (mag > prev && mag > 1e-16 * scale) {
        throw Error(ErrorCode::Truncation, "oscillatory tail: asymptotic series diverged before converging");
      }
      sum += phase[k % 4] * term;
      scale = std::max(scale, mag);
      if (mag <= 1e-18 * scale && k > 0) break;
      prev = mag;
    }
    return sum;
  }

  /// int_W^inf cos(w t) g(w) dw for t > 0.
  double cos_tail(double cut, double t, const QuadratureSpec& q) const {
    const double far = std::max({cut, 100.0 / t, tail_start()});
    double head = 0.0;
    if (far > cut) {
      auto f = [this, t](double w) { return std::cos(w * t) * g(w); };
      head = quad::integrate(f, breakpoints(cut, far, t), {q.abs_tol, q.rel_tol, q.max_subdivisions}).value;
    }
    return head + cos_tail_asymptotic(far, t);
  }

 private:
  double a_, g_, l2_, wc_;
};

}  // namespace fracosc::detail
