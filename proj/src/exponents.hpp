#pragma once

#include <string>

#include "errors.hpp"
#include "rational.hpp"

namespace hvf {

enum class Regime { Subcritical, Critical, Supercritical };

// Embedding data for W^{k,p}_{X,0}: L^q for kp < nu, all finite q at kp = nu,
// Hölder order/exponent for kp > nu. All arithmetic is exact rational.
struct EmbeddingInfo {
  Regime regime;
  Rational q;           // subcritical only: q = p*nu/(nu - k*p)
  int holder_order = 0; // supercritical: k - floor(nu/p) - 1
  Rational alpha;       // supercritical, nu/p not an integer
  bool alpha_free = false;  // nu/p integral: any alpha in (0,1) works

  std::string describe() const;
};

EmbeddingInfo critical_exponents(const Rational& nu_tilde, int k, const Rational& p);

// Interpolation-inequality parameter set (Gagliardo-Nirenberg family).
struct GNParams {
  Rational nu;
  Rational p;
  int k = 1;
  Rational s1, s2, a, b;
};

// Throws RegimeError naming the failed identity; exact rational checks.
void validate_gn_params(const GNParams& g);

GNParams nash_params(const Rational& nu_tilde);   // requires nu > 2
GNParams moser_params(const Rational& nu_tilde);  // requires nu > 2
// General GN specialization from theta in (0,1]; s2 derived from the identity
// 1/s2 = (1-theta)/s1 + theta(1/p - k/nu).
GNParams gn_theta_params(const Rational& nu_tilde, const Rational& p, int k,
                         const Rational& s1, const Rational& theta);

}  // namespace hvf
