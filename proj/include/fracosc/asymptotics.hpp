#pragma once

// Asymptotic expansions of sigma^2(t) near 0 and C(t) at infinity, and the
// path-regularity descriptors that follow from them.

#include <string>
#include <vector>

#include "fracosc/covariance.hpp"

namespace fracosc {

enum class Regime { SmallT, LargeT };

/// coeff * |x|^power * (log(1/|x|))^log_power
struct Term {
  double coeff = 0.0;
  double power = 0.0;
  int log_power = 0;
};

struct AsymptoticExpansion {
  std::vector<Term> terms;  // ordered by dominance in the regime
  Regime regime = Regime::SmallT;
  RegularityClass valid_class = RegularityClass::Rough;
  std::string validity;      // human-readable range, advisory only
  std::string order_tag;     // size of the first omitted contribution
  double exp_rate = 0.0;     // nonzero: the sum is multiplied by exp(-exp_rate |x|)
};

AsymptoticExpansion sigma2_small_t(const ProcessParams& p);

/// For alpha < 1, the first n_terms terms of the power series in 1/t. For
/// alpha = 1 the exponential form |t|^{gamma-1} e^{-lambda|t|} / ((2 lambda)^gamma Gamma(gamma)).
AsymptoticExpansion covariance_large_t(const ProcessParams& p, int n_terms = 1);

/// Partial sum of the first n terms (all terms when n < 0) at x != 0.
double evaluate_expansion(const AsymptoticExpansion& e, double x, int n = -1);

double hurst_index(const ProcessParams& p);
double fractal_dimension(const ProcessParams& p);
double holder_exponent(const ProcessParams& p);

/// Covariance of the fBm tangent process in the normalization where
/// Var B_H(1) = -1 / (cos(pi (H + 1/2)) Gamma(2H + 1)).
double fbm_tangent_covariance(double H, double u, double v);

struct SrdTail {
  enum class Kind { PowerLaw, Exponential } kind = Kind::PowerLaw;
  double exponent = 0.0;  // PowerLaw: C ~ t^{-exponent}
  double rate = 0.0;      // Exponential: C ~ t^{power} e^{-rate t}
  double power = 0.0;
  bool srd = true;
};

SrdTail srd_tail(const ProcessParams& p);

}  // namespace fracosc
