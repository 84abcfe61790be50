#pragma once

// Globally adaptive Gauss-Kronrod (7/15-point pairs nested in a 10/21 rule)
// integration on finite intervals. Header-only so integrands inline.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "fracosc/error.hpp"

namespace fracosc::quad {

struct Result {
  double value = 0.0;
  double abs_error = 0.0;
  int evaluations = 0;
};

struct Options {
  double abs_tol = 1e-13;
  double rel_tol = 1e-12;
  int max_subdivisions = 2000;
};

namespace detail {

inline constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
inline constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208980050509, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
  double a, b, value, error, abs_value;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment gk21(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double f_center = f(center);
  double kronrod = f_center * kWgk[10];
  double gauss = 0.0;
  double abs_sum = std::abs(kronrod);
  std::array<double, 10> f1{}, f2{};
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = f(center - dx);
    f2[j] = f(center + dx);
    kronrod += kWgk[j] * (f1[j] + f2[j]);
    abs_sum += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1[j] + f2[j]);
  }
  const double mean = 0.5 * kronrod;
  double asc = kWgk[10] * std::abs(f_center - mean);
  for (int j = 0; j < 10; ++j) asc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  const double result = kronrod * half;
  const double abs_result = abs_sum * std::abs(half);
  asc *= std::abs(half);
  double err = std::abs((kronrod - gauss) * half);
  if (asc != 0.0 && err != 0.0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
  const double round_floor = 50.0 * std::numeric_limits<double>::epsilon() * abs_result;
  if (abs_result > std::numeric_limits<double>::min() / (50.0 * std::numeric_limits<double>::epsilon())) {
    err = std::max(err, round_floor);
  }
  return {a, b, result, err, abs_result};
}

}  // namespace detail

/// Integrates f over the union of [points[i], points[i+1]]. Throws
/// QuadratureError when the subdivision budget runs out before the error
/// estimate meets max(abs_tol, rel_tol |I|), unless roundoff dominates.
template <class F>
Result integrate(F&& f, std::span<const double> points, const Options& opt = {}) {
  Result out;
  if (points.size() < 2) return out;
  std::priority_queue<detail::Segment> heap;
  double total = 0.0, total_err = 0.0, total_abs = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (points[i + 1] == points[i]) continue;
    auto seg = detail::gk21(f, points[i], points[i + 1]);
    out.evaluations += 21;
    total += seg.value;
    total_err += seg.error;
    total_abs += seg.abs_value;
    heap.push(seg);
  }
  const double eps = std::numeric_limits<double>::epsilon();
  int subdivisions = static_cast<int>(heap.size());
  while (!heap.empty()) {
    const double target = std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
    if (total_err <= target) break;
    if (total_err <= 200.0 * eps * total_abs) break;  // roundoff-limited
    if (subdivisions >= opt.max_subdivisions) {
      std::ostringstream msg;
      msg << "quadrature: subdivision limit reached (error estimate " << total_err << ", target " << target << ")";
      throw QuadratureError(msg.str(), total_err);
    }
    const auto worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > std::min(worst.a, worst.b) && mid < std::max(worst.a, worst.b))) {
      break;  // interval cannot be split further in double precision
    }
    heap.pop();
    auto left = detail::gk21(f, worst.a, mid);
    auto right = detail::gk21(f, mid, worst.b);
    out.evaluations += 42;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    total_abs += left.abs_value + right.abs_value - worst.abs_value;
    heap.push(left);
    heap.push(right);
    ++subdivisions;
  }
  // Re-sum to shed the drift of incremental updates.
  double sum = 0.0, err = 0.0;
  std::vector<detail::Segment> segs;
  segs.reserve(heap.size());
  while (!heap.empty()) {
    segs.push_back(heap.top());
    heap.pop();
  }
  std::sort(segs.begin(), segs.end(), [](const auto& x, const auto& y) { return x.a < y.a; });
  for (const auto& s : segs) {
    sum += s.value;
    err += s.error;
  }
  out.value = sum;
  out.abs_error = err;
  return out;
}

template <class F>
Result integrate(F&& f, double a, double b, const Options& opt = {}) {
  const std::array<double, 2> pts{a, b};
  return integrate(std::forward<F>(f), std::span<const double>(pts), opt);
}

}  // namespace fracosc::quad
