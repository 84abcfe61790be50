#include "fracosc/simulate.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <iomanip>
#include <limits>
#include <mutex>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "fracosc/asymptotics.hpp"
#include "fracosc/error.hpp"
#include "fracosc/specfun.hpp"

namespace fracosc {

namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t seed, std::uint64_t counter) {
  std::uint64_t z = seed + (counter + 1) * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Uniform in the open interval (0, 1).
double open_uniform(std::uint64_t bits) { return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53; }

// FFTW's planner is not reentrant; execution on distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class ComplexFft {
 public:
  explicit ComplexFft(int n, int sign) : n_(n) {
    data_ = fftw_alloc_complex(n);
    std::lock_guard lock(planner_mutex());
    plan_ = fftw_plan_dft_1d(n, data_, data_, sign, FFTW_ESTIMATE);
  }
  ~ComplexFft() {
    {
      std::lock_guard lock(planner_mutex());
      fftw_destroy_plan(plan_);
    }
    fftw_free(data_);
  }
  ComplexFft(const ComplexFft&) = delete;
  ComplexFft& operator=(const ComplexFft&) = delete;

  std::complex<double>* data() { return reinterpret_cast<std::complex<double>*>(data_); }
  void run() { fftw_execute(plan_); }
  int size() const { return n_; }

 private:
  int n_;
  fftw_complex* data_;
  fftw_plan plan_;
};

void require_count(int n) {
  if (n < 1) throw Error(ErrorCode::Domain, "path length must be at least 1");
}

void require_step(double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorCode::Domain, "dt must be positive and finite");
}

int next_pow2(int n) {
  int m = 1;
  while (m < n) m <<= 1;
  return m;
}

// Eigenvalues of the circulant of size 2L whose first row mirrors c[0..L].
std::vector<double> circulant_eigenvalues(const std::vector<double>& c) {
  const int L = static_cast<int>(c.size()) - 1;
  const int m = 2 * L;
  ComplexFft fft(m, FFTW_FORWARD);
  auto* d = fft.data();
  for (int k = 0; k <= L; ++k) d[k] = c[k];
  for (int k = L + 1; k < m; ++k) d[k] = c[m - k];
  fft.run();
  std::vector<double> eig(m);
  for (int k = 0; k < m; ++k) eig[k] = d[k].real();
  return eig;
}

// Real part of sum_k sqrt(eig_k / m) xi_k e^{-2 pi i jk/m}: its first n
// entries have covariance c[|i-j|].
std::vector<double> circulant_sample(const std::vector<double>& eig, int n, std::uint64_t seed) {
  const int m = static_cast<int>(eig.size());
  ComplexFft fft(m, FFTW_FORWARD);
  auto* d = fft.data();
  for (int k = 0; k < m; ++k) {
    const double s = std::sqrt(std::max(eig[k], 0.0) / m);
    d[k] = {s * standard_normal(seed, 2 * static_cast<std::uint64_t>(k)),
            s * standard_normal(seed, 2 * static_cast<std::uint64_t>(k) + 1)};
  }
  fft.run();
  std::vector<double> out(n);
  for (int j = 0; j < n; ++j) out[j] = d[j].real();
  return out;
}

// Spectral bins: midpoints w_k = (k + 1/2) dw on (0, pi/dt) with
// dw = 2 pi / (B n dt), i.e. B n bins over the symmetric band [-pi/dt, pi/dt].
std::vector<double> spectral_powers(const ProcessParams& p, int n, double dt, int bins_per_point) {
  const int half = bins_per_point * n / 2;
  const double dw = 2.0 * kPi / (bins_per_point * n * dt);
  std::vector<double> power(half);
  for (int k = 0; k < half; ++k) power[k] = 2.0 * spectral_density(p, (k + 0.5) * dw) * dw;
  return power;
}

// One FFT of length B n: x_j = Re sum_k sqrt(P_k) (a_k - i b_k) e^{i w_k j dt}.
std::vector<double> spectral_sample(const std::vector<double>& power, int n, std::uint64_t seed) {
  const int half = static_cast<int>(power.size());
  const int bins = 2 * half;
  ComplexFft fft(bins, FFTW_BACKWARD);
  auto* d = fft.data();
  for (int k = 0; k < bins; ++k) d[k] = 0.0;
  for (int k = 0; k < half; ++k) {
    const double s = std::sqrt(power[k]);
    d[k] = {s * standard_normal(seed, 2 * static_cast<std::uint64_t>(k)),
            -s * standard_normal(seed, 2 * static_cast<std::uint64_t>(k) + 1)};
  }
  fft.run();
  std::vector<double> out(n);
  for (int j = 0; j < n; ++j) {
    // e^{i w_k j dt} = e^{i pi j / bins} e^{2 pi i k j / bins}
    out[j] = (std::polar(1.0, kPi * j / bins) * d[j]).real();
  }
  return out;
}

}  // namespace

const char* to_string(SynthesisMethod m) noexcept {
  switch (m) {
    case SynthesisMethod::Circulant: return "Circulant";
    case SynthesisMethod::Spectral: return "Spectral";
    case SynthesisMethod::FourierSeries: return "FourierSeries";
  }
  return "?";
}

double standard_normal(std::uint64_t seed, std::uint64_t index) {
  const double u1 = open_uniform(splitmix64(seed, 2 * index));
  const double u2 = open_uniform(splitmix64(seed, 2 * index + 1));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

PathSampler::PathSampler(const ProcessParams& p, int n, double dt, SynthesisMethod method, const SampleOptions& opt)
    : n_(n), dt_(dt), method_(method) {
  p.require_finite_variance();
  require_count(n);
  require_step(dt);
  if (method == SynthesisMethod::FourierSeries) {
    throw Error(ErrorCode::Domain, "FourierSeries synthesis is the thermal process; use sample_thermal");
  }
  if (opt.spectral_bins_per_point < 2 || opt.spectral_bins_per_point % 2 != 0) {
    throw Error(ErrorCode::Domain, "spectral_bins_per_point must be even and at least 2");
  }
  const double c0 = variance(p);
  if (n == 1) {
    weights_ = {c0};
    return;
  }
  auto use_spectral = [&] {
    weights_ = spectral_powers(p, n, dt, opt.spectral_bins_per_point);
    double total = 0.0;
    for (double w : weights_) total += w;
    bias_ = std::abs(c0 - total);
  };
  if (method == SynthesisMethod::Spectral) {
    use_spectral();
    return;
  }
  std::vector<double> c{c0};
  int L = next_pow2(n - 1);
  for (int attempt = 0; attempt <= opt.max_embed_doublings; ++attempt, L *= 2) {
    c.reserve(L + 1);
    for (int k = static_cast<int>(c.size()); k <= L; ++k) c.push_back(covariance(p, k * dt, opt.quad));
    auto eig = circulant_eigenvalues(c);
    if (*std::min_element(eig.begin(), eig.end()) >= -opt.embed_tol * c0) {
      weights_ = std::move(eig);
      return;
    }
  }
  const std::string msg = "circulant embedding has negative eigenvalues after " +
                          std::to_string(opt.max_embed_doublings) + " doublings";
  if (!opt.allow_fallback) throw Error(ErrorCode::Embedding, msg);
  use_spectral();
  method_ = SynthesisMethod::Spectral;
  fallback_ = true;
  warning_ = msg + "; used Spectral synthesis";
}

SamplePath PathSampler::sample(std::uint64_t seed) const {
  SamplePath out;
  out.dt = dt_;
  out.seed = seed;
  out.method = method_;
  out.fallback = fallback_;
  out.variance_bias = bias_;
  out.warning = warning_;
  if (n_ == 1) {
    out.values = {std::sqrt(weights_[0]) * standard_normal(seed, 0)};
  } else if (method_ == SynthesisMethod::Spectral) {
    out.values = spectral_sample(weights_, n_, seed);
  } else {
    out.values = circulant_sample(weights_, n_, seed);
  }
  return out;
}

SamplePath sample_path(const ProcessParams& p, int n, double dt, std::uint64_t seed, SynthesisMethod method,
                       const SampleOptions& opt) {
  return PathSampler(p, n, dt, method, opt).sample(seed);
}

SamplePath sample_fbm(double H, int n, double dt, std::uint64_t seed) {
  if (!(H > 0.0 && H < 1.0)) throw Error(ErrorCode::Domain, "H must lie in (0, 1)");
  require_count(n);
  require_step(dt);
  SamplePath out;
  out.dt = dt;
  out.seed = seed;
  out.method = SynthesisMethod::Circulant;
  out.values.assign(n, 0.0);
  if (n == 1) return out;
  // fractional Gaussian noise with Var = V dt^{2H}
  const double V = fbm_tangent_covariance(H, 1.0, 1.0);
  const double scale = 0.5 * V * std::pow(dt, 2.0 * H);
  const int L = std::max(1, next_pow2(n - 1));
  std::vector<double> c(L + 1);
  const double h2 = 2.0 * H;
  for (int k = 0; k <= L; ++k) {
    const double kk = k;
    c[k] = scale * (std::pow(kk + 1.0, h2) - 2.0 * std::pow(kk, h2) + std::pow(std::abs(kk - 1.0), h2));
  }
  auto eig = circulant_eigenvalues(c);
  const auto inc = circulant_sample(eig, n - 1, seed);
  double sum = 0.0;
  for (int j = 1; j < n; ++j) {
    sum += inc[j - 1];
    out.values[j] = sum;
  }
  return out;
}

double thermal_truncated_variance(const ProcessParams& p, double beta, int n_modes) {
  p.require_finite_variance();
  if (!(beta > 0.0) || !std::isfinite(beta)) throw Error(ErrorCode::Domain, "beta must be positive and finite");
  if (n_modes < 0) throw Error(ErrorCode::Domain, "n_modes must be nonnegative");
  const double twopi = 2.0 * kPi;
  double v = 2.0 * kPi * spectral_density(p, 0.0) / beta;
  for (int k = 1; k <= n_modes; ++k) v += 2.0 * twopi * spectral_density(p, twopi * k / beta) / beta;
  return v;
}

SamplePath sample_thermal(const ProcessParams& p, double beta, int n_modes, int n, std::uint64_t seed) {
  p.require_finite_variance();
  if (!(beta > 0.0) || !std::isfinite(beta)) throw Error(ErrorCode::Domain, "beta must be positive and finite");
  if (n_modes < 0) throw Error(ErrorCode::Domain, "n_modes must be nonnegative");
  if (n < 2) throw Error(ErrorCode::Domain, "a thermal path needs at least 2 points to span a period");
  const double twopi = 2.0 * kPi;
  // spectral_density = g / (2 pi)
  const double a0 = std::sqrt(twopi * spectral_density(p, 0.0) / beta) * standard_normal(seed, 0);
  std::vector<double> a(n_modes + 1), b(n_modes + 1);
  for (int k = 1; k <= n_modes; ++k) {
    const double s = std::sqrt(2.0 * twopi * spectral_density(p, twopi * k / beta) / beta);
    a[k] = s * standard_normal(seed, 2 * static_cast<std::uint64_t>(k) - 1);
    b[k] = s * standard_normal(seed, 2 * static_cast<std::uint64_t>(k));
  }
  const long cells = n - 1;
  SamplePath out;
  out.dt = beta / cells;
  out.seed = seed;
  out.method = SynthesisMethod::FourierSeries;
  out.values.resize(n);
  for (long j = 0; j < n; ++j) {
    double x = a0;
    for (long k = 1; k <= n_modes; ++k) {
      // the phase is reduced exactly, so t = 0 and t = beta agree bit for bit
      const double theta = twopi * static_cast<double>((k * j) % cells) / cells;
      x += a[k] * std::cos(theta) + b[k] * std::sin(theta);
    }
    out.values[j] = x;
  }
  return out;
}

Variogram empirical_variogram(const SamplePath& path, int max_lag) {
  const long n = static_cast<long>(path.values.size());
  if (max_lag < 1 || 4L * max_lag >= n) {
    throw Error(ErrorCode::InsufficientData, "variogram needs 1 <= max_lag < n/4 (n = " + std::to_string(n) + ")");
  }
  Variogram v;
  const auto& x = path.values;
  for (int k = 1; k <= max_lag; ++k) {
    double s = 0.0;
    for (long i = 0; i + k < n; ++i) {
      const double d = x[i + k] - x[i];
      s += d * d;
    }
    v.lags.push_back(k * path.dt);
    v.estimates.push_back(s / (n - k));
    v.counts.push_back(n - k);
  }
  return v;
}

double variogram_standard_error(const ProcessParams& p, double dt, int lag, long count, int max_h) {
  p.require_finite_variance();
  require_step(dt);
  if (lag < 1 || count < 1) throw Error(ErrorCode::Domain, "lag and count must be positive");
  const long hmax = std::min<long>(max_h, count - 1);
  std::vector<double> c(hmax + lag + 1);
  for (long i = 0; i < static_cast<long>(c.size()); ++i) c[i] = covariance(p, i * dt);
  double s = 0.0;
  for (long h = -hmax; h <= hmax; ++h) {
    const long ah = std::abs(h);
    const double r = c[ah + lag] + c[std::abs(ah - lag)] - 2.0 * c[ah];
    s += (count - ah) * r * r;
  }
  return std::sqrt(2.0 * s) / count;
}

HurstEstimate estimate_hurst(const Variogram& v, int fit_lo, int fit_hi) {
  const int size = static_cast<int>(v.lags.size());
  if (fit_lo < 0 || fit_hi >= size || fit_hi - fit_lo + 1 < 4) {
    throw Error(ErrorCode::Range, "Hurst fit needs an index range inside the variogram with at least 4 lags");
  }
  const int m = fit_hi - fit_lo + 1;
  std::vector<double> xs, ys;
  for (int i = fit_lo; i <= fit_hi; ++i) {
    if (!(v.estimates[i] > 0.0) || !(v.lags[i] > 0.0)) {
      throw Error(ErrorCode::Range, "Hurst fit needs positive variogram estimates");
    }
    xs.push_back(std::log(v.lags[i]));
    ys.push_back(std::log(v.estimates[i]));
  }
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < m; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < m; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  double rss = 0.0;
  for (int i = 0; i < m; ++i) {
    const double r = ys[i] - my - slope * (xs[i] - mx);
    rss += r * r;
  }
  return {0.5 * slope, 0.5 * std::sqrt(rss / (m - 2) / sxx)};
}

SamplePath rescaled_increment_path(const SamplePath& path, int stride, double H) {
  if (stride < 1) throw Error(ErrorCode::Range, "stride must be positive");
  const long n = static_cast<long>(path.values.size());
  if (n == 0) throw Error(ErrorCode::Range, "empty path");
  const double eps = stride * path.dt;
  const double scale = std::pow(eps, -H);
  SamplePath out = path;
  out.dt = 1.0;
  out.values.clear();
  for (long j = 0; j < n; j += stride) out.values.push_back(scale * (path.values[j] - path.values[0]));
  return out;
}

SamplePath rl_fractional_integral(const SamplePath& path, double chi) {
  if (!(chi > 0.5 && chi < 1.5)) throw Error(ErrorCode::Domain, "chi must lie in (1/2, 3/2)");
  const int n = static_cast<int>(path.values.size());
  SamplePath out = path;
  if (n == 0) return out;
  std::vector<double> w(n);
  for (int m = 1; m < n; ++m) w[m] = std::pow(m, chi) - std::pow(m - 1, chi);
  const double pre = std::pow(path.dt, chi) / specfun::gamma_fn(chi + 1.0);
  const auto& x = path.values;
  std::vector<double> y(n, 0.0);
  if (n <= 512) {
    for (int k = 1; k < n; ++k) {
      double s = 0.0;
      for (int j = 0; j < k; ++j) s += w[k - j] * x[j];
      y[k] = s;
    }
  } else {
    const int m = next_pow2(2 * n);
    ComplexFft fwd(m, FFTW_FORWARD), bwd(m, FFTW_BACKWARD);
    auto* d = fwd.data();
    for (int i = 0; i < m; ++i) d[i] = {i < n ? x[i] : 0.0, i < n ? w[i] : 0.0};
    fwd.run();
    // unpack the transforms of x and w from one complex FFT
    auto* e = bwd.data();
    for (int k = 0; k < m; ++k) {
      const auto zk = d[k];
      const auto zc = std::conj(d[(m - k) % m]);
      const auto fx = 0.5 * (zk + zc);
      const auto fw = std::complex<double>(0.0, -0.5) * (zk - zc);
      e[k] = fx * fw;
    }
    bwd.run();
    for (int k = 1; k < n; ++k) y[k] = e[k].real() / m;
  }
  for (int k = 0; k < n; ++k) out.values[k] = pre * y[k];
  out.values[0] = 0.0;
  return out;
}

void write_csv(std::ostream& out, const SamplePath& path) {
  const auto old_flags = out.flags();
  const auto old_prec = out.precision();
  out << "t,value\n" << std::setprecision(17);
  for (std::size_t j = 0; j < path.values.size(); ++j) out << j * path.dt << ',' << path.values[j] << '\n';
  out.flags(old_flags);
  out.precision(old_prec);
}

}  // namespace fracosc
