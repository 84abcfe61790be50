#pragma once

// Sample paths of X_{alpha,gamma}, fractional Brownian motion and the
// periodic thermal process, with variogram and Hurst estimators.
//
// Random numbers: normal number i of a stream with seed s is Box-Muller on
// the two uniforms drawn from SplitMix64(s, 2i) and SplitMix64(s, 2i + 1),
// where SplitMix64(s, c) is the SplitMix64 output function applied to
// s + (c + 1) * 0x9e3779b97f4a7c15. Paths therefore depend only on their
// inputs, not on call order or thread.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fracosc/covariance.hpp"

namespace fracosc {

enum class SynthesisMethod { Circulant, Spectral, FourierSeries };

const char* to_string(SynthesisMethod m) noexcept;

struct SamplePath {
  double dt = 1.0;
  std::vector<double> values;
  std::uint64_t seed = 0;
  SynthesisMethod method = SynthesisMethod::Circulant;
  // Circulant that fell back to Spectral after a failed embedding
  bool fallback = false;
  // Spectral: |C(0) - variance of the discretized spectrum|
  double variance_bias = 0.0;
  std::string warning;
};

struct SampleOptions {
  double embed_tol = 1e-10;       // relative to C(0)
  int max_embed_doublings = 2;    // padding attempts before giving up
  bool allow_fallback = true;     // false: throw Embedding instead
  int spectral_bins_per_point = 8;
  QuadratureSpec quad;
};

/// Normal number `index` of stream `seed`.
double standard_normal(std::uint64_t seed, std::uint64_t index);

/// Precomputes the circulant eigenvalues or spectral bin powers for paths of
/// n samples at spacing dt, so that ensembles pay for the covariance once.
class PathSampler {
 public:
  PathSampler(const ProcessParams& p, int n, double dt, SynthesisMethod method = SynthesisMethod::Circulant,
              const SampleOptions& opt = {});

  SamplePath sample(std::uint64_t seed) const;

  SynthesisMethod method() const noexcept { return method_; }
  bool fallback() const noexcept { return fallback_; }
  double variance_bias() const noexcept { return bias_; }
  const std::string& warning() const noexcept { return warning_; }

 private:
  int n_;
  double dt_;
  SynthesisMethod method_;
  bool fallback_ = false;
  double bias_ = 0.0;
  std::string warning_;
  std::vector<double> weights_;  // eigenvalues, bin powers, or {C(0)} when n = 1
};

/// n samples of X_{alpha,gamma} at spacing dt.
SamplePath sample_path(const ProcessParams& p, int n, double dt, std::uint64_t seed,
                       SynthesisMethod method = SynthesisMethod::Circulant, const SampleOptions& opt = {});

/// fBm B_H at 0, dt, ..., (n-1) dt with Var B_H(1) = -1/(cos(pi(H+1/2)) Gamma(2H+1)).
SamplePath sample_fbm(double H, int n, double dt, std::uint64_t seed);

/// n points spanning one period [0, beta] of the truncated Matsubara series
/// a_0 + sum_{k=1}^{n_modes} a_k cos(w_k t) + b_k sin(w_k t), w_k = 2 pi k / beta.
/// Var a_0 = g(0)/beta and Var a_k = Var b_k = 2 g(w_k)/beta, so the
/// covariance is the thermal two-point function truncated at |k| <= n_modes.
SamplePath sample_thermal(const ProcessParams& p, double beta, int n_modes, int n, std::uint64_t seed);

/// Variance of sample_thermal's values: the truncated series at dt = 0.
double thermal_truncated_variance(const ProcessParams& p, double beta, int n_modes);

struct Variogram {
  std::vector<double> lags;
  std::vector<double> estimates;
  std::vector<long> counts;
};

/// Mean squared increments at lags dt, 2dt, ..., max_lag dt; max_lag < n/4.
Variogram empirical_variogram(const SamplePath& path, int max_lag);

struct HurstEstimate {
  double H = 0.0;
  double std_error = 0.0;
};

/// Standard error of the lag-k variogram estimate from `count` squared
/// increments of a stationary Gaussian path:
///   SE^2 = (2/count^2) sum_{|h| < count} (count - |h|) r(h)^2,
/// r(h) = C((h+k)dt) + C((h-k)dt) - 2C(h dt), summed up to |h| <= max_h.
double variogram_standard_error(const ProcessParams& p, double dt, int lag, long count, int max_h = 4096);

/// Half the least-squares slope of log estimate against log lag over the
/// inclusive index range [fit_lo, fit_hi], which must hold at least 4 lags.
HurstEstimate estimate_hurst(const Variogram& v, int fit_lo, int fit_hi);

/// Z_k = eps^{-H} (X(eps k) - X(0)) with eps = stride dt; the result has dt = 1.
SamplePath rescaled_increment_path(const SamplePath& path, int stride, double H);

/// Riemann-Liouville integral of order chi by product integration of the
/// piecewise-constant path: Y_k = dt^chi / Gamma(chi+1) sum_{j<k} [(k-j)^chi - (k-j-1)^chi] X_j.
SamplePath rl_fractional_integral(const SamplePath& path, double chi);

/// Two columns t,value with a header row, 17 significant digits.
void write_csv(std::ostream& out, const SamplePath& path);

}  // namespace fracosc
