#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "approx.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <vector>

#include "fracosc/covariance.hpp"
#include "fracosc/error.hpp"
#include "oracles.hpp"

using namespace fracosc;

namespace {

constexpr double kPi = std::numbers::pi;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

double g_of(const ProcessParams& p, double w) {
  return std::pow(std::pow(w, 2.0 * p.alpha()) + p.lambda() * p.lambda(), -p.gamma());
}

}  // namespace

TEST_CASE("parameter validation and classification") {
  CHECK_THROWS_AS(ProcessParams(0.0, 1.0, 1.0), Error);
  CHECK_THROWS_AS(ProcessParams(1.2, 1.0, 1.0), Error);
  CHECK_THROWS_AS(ProcessParams(0.5, -1.0, 1.0), Error);
  CHECK_THROWS_AS(ProcessParams(0.5, 1.0, 0.0), Error);
  CHECK(ProcessParams(0.5, 1.0, 1.0).regularity() == RegularityClass::GeneralizedOnly);
  CHECK(ProcessParams(0.5, 1.2, 1.0).regularity() == RegularityClass::Rough);
  CHECK(ProcessParams(1.0, 1.5, 1.0).regularity() == RegularityClass::Borderline);
  CHECK(ProcessParams(0.75, 2.0, 1.0).regularity() == RegularityClass::Borderline);
  CHECK(ProcessParams(1.0, 1.5 + 1e-9, 1.0).regularity() == RegularityClass::Smooth);
  CHECK(ProcessParams(1.0, 1.5 + 1e-9, 1.0).regularity(1e-6) == RegularityClass::Borderline);
  CHECK(ProcessParams(0.9, 2.0, 1.0).regularity() == RegularityClass::Smooth);
  try {
    variance(ProcessParams(0.5, 1.0, 1.0));
    FAIL("expected GeneralizedOnly");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::GeneralizedOnly);
  }
  QuadratureSpec q;
  q.rel_tol = 1e-3;
  CHECK_THROWS_AS(q.validate(), Error);
  q = {};
  q.t_switch = 0.0;
  CHECK_THROWS_AS(covariance(ProcessParams(0.8, 1.0, 1.0), 1.0, q), Error);
}

TEST_CASE("spectral densities") {
  CHECK(spectral_density(ProcessParams(1, 1, 1), 0.0) == rel(1.0 / (2 * kPi)));
  CHECK(spectral_density(ProcessParams(1, 1, 2), 2.0) == rel(1.0 / (16 * kPi)));
  const ProcessParams p(0.7, 1.3, 0.8);
  for (double w = 0.01; w < 1e4; w *= 1.7) {
    CHECK(spectral_density(p, w) == spectral_density(p, -w));
    CHECK(spectral_density(p, w) > 0.0);
    CHECK(spectral_density(p, w) < std::pow(w, -2.0 * p.ag()) / (2 * kPi));
  }
  const ProcessParams h(0.5, 1.0, 1.0);
  // |w|^{2a} + 2 l |w|^a cos(pi a/2) + l^2 = 1 + sqrt 2 + 1 at a = 1/2, w = 1
  CHECK(spectral_density_type12(h, 1.0) == rel(1.0 / (2 * kPi * (2.0 + std::sqrt(2.0)))).epsilon(1e-14));
  for (double w : {0.0, 0.3, 2.0, 17.0}) {
    const ProcessParams one(1.0, 1.4, 0.6);
    CHECK(spectral_density_type12(one, w) == rel(spectral_density(one, w)).epsilon(1e-14));
    CHECK(spectral_density_type12(p, w) > 0.0);
  }
}

TEST_CASE("variance closed form") {
  CHECK(variance(ProcessParams(1, 1, 1)) == rel(0.5).epsilon(1e-15));
  CHECK(variance(ProcessParams(1, 1, 2)) == rel(0.25).epsilon(1e-15));
  const ProcessParams p(0.8, 1.0, 1.3);
  const double direct = oracle::integrate_to_inf([&](double w) { return g_of(p, w); }, 0.0, 1e-13) / kPi;
  CHECK(rel(variance(p), direct) < 1e-9);
}

TEST_CASE("OU covariance") {
  for (double lambda : {0.5, 1.0, 2.0}) {
    const ProcessParams p(1, 1, lambda);
    for (double t : {0.0, 0.1, 1.0, 5.0, -3.0}) {
      const double exact = std::exp(-lambda * std::abs(t)) / (2 * lambda);
      CHECK(rel(covariance(p, t), exact) < 1e-10);
      CHECK(rel(covariance(p, t, {}, CovarianceRoute::StructureFunction), exact) < 1e-10);
      if (t != 0.0) CHECK(rel(structure_function(p, t), (1.0 - std::exp(-lambda * std::abs(t))) / lambda) < 1e-10);
    }
  }
}

TEST_CASE("closed form at alpha = 1") {
  CHECK(covariance_closed_alpha1(1.0, 1.0, 0.0) == rel(0.5).epsilon(1e-14));
  CHECK_THROWS_AS(covariance_closed_alpha1(0.5, 1.0, 1.0), Error);
  // t = 0 constant of the closed form vs the pole-free variance; gamma = 1.5, 2.5 sit on poles of Gamma(3/2 - gamma)
  for (double g : {0.7, 1.0, 1.2, 1.5, 2.0, 2.5, 3.3}) {
    CHECK(rel(covariance_closed_alpha1(g, 1.7, 0.0), variance(ProcessParams(1.0, g, 1.7))) < 1e-13);
    // continuity at 0: C(0) - C(t) = O(t^{min(2 gamma - 1, 2)})
    const double t = 1e-9;
    CHECK(rel(covariance_closed_alpha1(g, 1.7, t), covariance_closed_alpha1(g, 1.7, 0.0)) <
          10.0 * std::pow(t, std::min(2.0 * g - 1.0, 1.0)));
  }
  const ProcessParams p(0.9999999, 1.25, 1.0);
  CHECK(rel(covariance_closed_alpha1(1.25, 1.0, 0.7), covariance(p, 0.7)) < 1e-6);
}

TEST_CASE("alpha = 1 quadrature matches the Bessel closed form") {
  for (double g : {0.8, 1.0, 1.5, 2.5}) {
    const ProcessParams p(1.0, g, 1.0);
    for (double t = 0.01; t <= 10.0 + 1e-12; t *= std::pow(1000.0, 0.25)) {
      const double q = covariance(p, t, {}, CovarianceRoute::StructureFunction);
      CHECK(rel(q, covariance_closed_alpha1(g, 1.0, t)) < 1e-8);
    }
  }
  CHECK_THROWS_AS(covariance(ProcessParams(1.0, 1.0, 1.0), 1.0, {}, CovarianceRoute::Laplace), Error);
  CHECK_THROWS_AS(covariance(ProcessParams(0.8, 1.0, 1.0), 1.0, {}, CovarianceRoute::ClosedForm), Error);
}

TEST_CASE("Laplace and structure-function routes agree") {
  const QuadratureSpec q;
  for (double a : {0.6, 0.75, 0.9}) {
    for (double ag : {0.7, 1.2, 2.0}) {
      const ProcessParams p(a, ag / a, 1.0);
      for (double t : {0.05, 0.2, 1.0, 3.0, 8.0, 20.0}) {
        const double lap = covariance(p, t, q, CovarianceRoute::Laplace);
        const double sf = covariance(p, t, q, CovarianceRoute::StructureFunction);
        CHECK(std::abs(lap - sf) <= std::max(1e-12, 1e-10 * std::abs(lap)));
      }
    }
  }
  const ProcessParams p(0.75, 1.0 / 0.75, 1.0);
  CHECK(rel(covariance(p, 1.0, q, CovarianceRoute::Laplace), covariance(p, 1.0, q, CovarianceRoute::StructureFunction)) <
        1e-8);
}

TEST_CASE("covariance against a direct Fourier oracle") {
  // (1/pi) int_0^inf cos(w t) g(w) dw by GSL's oscillatory Fourier integrator
  gsl_set_error_handler_off();
  for (const auto& p : {ProcessParams(0.6, 2.0, 1.0), ProcessParams(0.8, 1.5, 0.7), ProcessParams(0.9, 1.0, 2.0)}) {
    for (double t : {0.5, 2.0, 6.0}) {
      std::function<double(double)> f = [&](double w) { return g_of(p, w); };
      gsl_function F{&oracle::detail::trampoline, &f};
      auto* ws = gsl_integration_workspace_alloc(5000);
      auto* cyc = gsl_integration_workspace_alloc(5000);
      auto* tab = gsl_integration_qawo_table_alloc(t, 1.0, GSL_INTEG_COSINE, 50);
      double res = 0.0, err = 0.0;
      gsl_integration_qawf(&F, 0.0, 1e-13, 5000, ws, cyc, tab, &res, &err);
      gsl_integration_qawo_table_free(tab);
      gsl_integration_workspace_free(cyc);
      gsl_integration_workspace_free(ws);
      CHECK(std::abs(covariance(p, t) - res / kPi) < 1e-9);
    }
  }
}

TEST_CASE("structure function identities") {
  for (const auto& p : {ProcessParams(0.9, 0.8, 1.0), ProcessParams(0.6, 1.5, 1.4), ProcessParams(0.35, 3.0, 0.8)}) {
    CHECK(structure_function(p, 0.0) == 0.0);
    const double c0 = variance(p);
    for (double t : {1e-6, 1e-3, 0.05, 0.4, 2.0, 10.0, 40.0}) {
      const double s2 = structure_function(p, t);
      CHECK(s2 >= 0.0);
      CHECK(s2 == structure_function(p, -t));
      CHECK(std::abs(s2 + 2.0 * covariance(p, t) - 2.0 * c0) < 1e-10 * c0);
    }
  }
  const ProcessParams p(0.9, 0.8, 1.0);
  CHECK(std::abs(structure_function(p, 10.0) - (2.0 * variance(p) - 2.0 * covariance(p, 10.0))) < 1e-8);
}

TEST_CASE("covariance is even and equals the variance at zero") {
  const ProcessParams p(0.7, 1.4, 1.1);
  CHECK(covariance(p, 0.0) == variance(p));
  for (double t : {0.01, 0.3, 4.0, 50.0}) CHECK(covariance(p, t) == covariance(p, -t));
}

TEST_CASE("covariance matrices are positive semidefinite") {
  for (const auto& p : {ProcessParams(0.75, 1.0, 1.0), ProcessParams(0.6, 2.0, 1.5), ProcessParams(1.0, 0.7, 1.0)}) {
    const int n = 64;
    const double dt = 0.15;
    std::vector<double> c(n);
    for (int k = 0; k < n; ++k) c[k] = covariance(p, k * dt);
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = c[std::abs(i - j)];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().minCoeff() > -1e-8 * c[0]);
  }
}

TEST_CASE("thermal covariance") {
  const ProcessParams ou(1, 1, 1);
  // Poisson summation of e^{-|t|}/2 over the period
  for (double beta : {2.0, 20.0}) {
    for (double dt : {0.0, 0.3, 1.0, 1.7}) {
      const double exact = std::cosh(beta / 2 - dt) / (2 * std::sinh(beta / 2));
      CHECK(std::abs(thermal_covariance(ou, beta, dt, 20000) - exact) < 1e-11);
    }
  }
  // long direct sum
  {
    const double beta = 20.0, dt = 1.0;
    long double sum = 0.0L;
    for (long n = 1000000; n >= 1; --n) {
      const long double w = 2.0L * std::numbers::pi_v<long double> * n / beta;
      sum += std::cos(w * dt) / (w * w + 1.0L);
    }
    const double direct = static_cast<double>((1.0L + 2.0L * sum) / beta);
    CHECK(std::abs(thermal_covariance(ou, beta, dt, 1000) - direct) < 1e-8);
  }
  const ProcessParams p(0.7, 1.3, 0.9);
  for (double dt : {0.2, 1.1, 2.9}) {
    CHECK(thermal_covariance(p, 3.0, dt, 5000) == rel(thermal_covariance(p, 3.0, dt + 3.0, 5000)).epsilon(1e-13));
    CHECK(thermal_covariance(p, 3.0, dt, 5000) == rel(thermal_covariance(p, 3.0, -dt, 5000)).epsilon(1e-13));
  }
  for (double dt = 0.0; dt <= 3.0; dt += 0.25) {
    const ProcessParams f(0.6, 2.0, 1.0);
    CHECK(std::abs(thermal_covariance(f, 1000.0, dt, 20000) - covariance(f, dt)) < 1e-4);
  }
  try {
    thermal_covariance(ou, 20.0, 7.0, 10, 1e-10);
    FAIL("expected truncation error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Truncation);
  }
  const auto d = thermal_covariance_detail(ou, 20.0, 1.0, 100, {});
  CHECK(std::abs(d.value - std::cosh(9.0) / (2 * std::sinh(10.0))) < 3.0 * d.error_estimate);
  CHECK_THROWS_AS(thermal_covariance(ou, 0.0, 1.0, 10), Error);
  CHECK_THROWS_AS(thermal_covariance(ou, 1.0, 1.0, 0), Error);
}

TEST_CASE("relaxation covariance") {
  const ProcessParams ou(1, 1, 1);
  CHECK(relaxation_covariance(ou, 0.3, 0.0, 2.0) == 0.0);
  CHECK(relaxation_covariance(ou, 0.3, 2.0, 0.0) == 0.0);
  // (1/2pi) int (1 - e^{-10(w^2+1)})/(w^2+1) dw = (1 - erfc(sqrt 10))/2
  CHECK(std::abs(relaxation_covariance(ou, 0.0, 5.0, 5.0) - 0.5 * (1.0 - std::erfc(std::sqrt(10.0)))) < 1e-13);
  // brute-force double integral: (1/pi) int_0^inf dw int_0^tau 2 e^{-2 A s} ds, A = w^2 + 1
  {
    const double tau = 5.0, dt = 0.0;
    // outer variable w = tan(theta) keeps the range finite
    const double two_d = oracle::integrate(
                             [&](double theta) {
                               const double w = std::tan(theta);
                               const double a = w * w + 1.0;
                               const double inner =
                                   oracle::integrate([&](double s) { return 2.0 * std::exp(-2.0 * a * s); }, 0.0,
                                                     std::min(tau, 20.0 / a));
                               return std::cos(w * dt) * inner * a;
                             },
                             0.0, kPi / 2, 1e-11) /
                         kPi;
    CHECK(std::abs(relaxation_covariance(ou, dt, tau, tau) - two_d) < 1e-9);
  }
  for (const auto& p : {ProcessParams(0.8, 1.0, 1.0), ProcessParams(0.6, 2.0, 1.3)}) {
    double prev = 0.0;
    for (double tau : {0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0}) {
      const double v = relaxation_covariance(p, 0.0, tau, tau);
      CHECK(v >= prev);
      prev = v;
    }
    const double tau_eq = 20.0 / std::pow(p.lambda() * p.lambda(), p.gamma());
    for (double dt : {0.0, 0.7, 2.0}) CHECK(std::abs(relaxation_covariance(p, dt, tau_eq, tau_eq) - covariance(p, dt)) < 1e-4);
    // unequal auxiliary times: symmetric, bounded by Cauchy-Schwarz
    const double a = relaxation_covariance(p, 0.5, 0.7, 1.9), b = relaxation_covariance(p, 0.5, 1.9, 0.7);
    CHECK(a == rel(b).epsilon(1e-14));
    CHECK(std::abs(a) <= std::sqrt(relaxation_covariance(p, 0.0, 0.7, 0.7) * relaxation_covariance(p, 0.0, 1.9, 1.9)));
  }
  CHECK_THROWS_AS(relaxation_covariance(ou, 0.0, -1.0, 1.0), Error);
}
