#include "exponents.hpp"

namespace hvf {

namespace {

// floor(a/b) for positive rationals.
int floor_div(const Rational& r) {
  std::int64_t q = r.num() / r.den();
  if (r.num() < 0 && r.num() % r.den() != 0) --q;
  return static_cast<int>(q);
}

}  // namespace

std::string EmbeddingInfo::describe() const {
  switch (regime) {
    case Regime::Subcritical:
      return "subcritical: L^q embedding with q = " + q.str();
    case Regime::Critical:
      return "critical: L^q embedding for every finite q >= 1";
    case Regime::Supercritical:
      if (alpha_free)
        return "supercritical: Hölder order " + std::to_string(holder_order) +
               ", any exponent in (0,1)";
      return "supercritical: Hölder order " + std::to_string(holder_order) +
             ", exponent alpha = " + alpha.str();
  }
  return "";
}

EmbeddingInfo critical_exponents(const Rational& nu_tilde, int k, const Rational& p) {
  if (p < Rational(1)) throw std::invalid_argument("p must be at least 1");
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  if (nu_tilde < Rational(2)) throw std::invalid_argument("nu_tilde must be at least 2");
  EmbeddingInfo info;
  Rational kp = p * Rational(k);
  if (kp < nu_tilde) {
    info.regime = Regime::Subcritical;
    info.q = p * nu_tilde / (nu_tilde - kp);
  } else if (kp == nu_tilde) {
    info.regime = Regime::Critical;
  } else {
    info.regime = Regime::Supercritical;
    Rational ratio = nu_tilde / p;
    int fl = floor_div(ratio);
    info.holder_order = k - fl - 1;
    if (ratio.is_integer()) {
      info.alpha_free = true;
    } else {
      info.alpha = Rational(fl + 1) - ratio;
    }
  }
  return info;
}

void validate_gn_params(const GNParams& g) {
  auto fail = [](const std::string& identity) {
    throw RegimeError("parameter relation violated: " + identity);
  };
  if (g.p < Rational(1)) fail("p >= 1");
  if (g.k < 1) fail("k >= 1");
  Rational kp = g.p * Rational(g.k);
  if (!(kp < g.nu)) fail("k*p < nu_tilde");
  Rational qstar = g.p * g.nu / (g.nu - kp);
  if (!(Rational(1) <= g.s1)) fail("1 <= s1");
  if (!(g.s1 < g.s2)) fail("s1 < s2");
  if (!(g.s2 < qstar)) fail("s2 < p*nu/(nu - k*p) = " + qstar.str());
  if (g.b - g.a != (g.nu - kp) / g.nu)
    fail("b - a = (nu - k*p)/nu, expected " + ((g.nu - kp) / g.nu).str() +
         ", got " + (g.b - g.a).str());
  if (g.b * g.s2 - g.a * g.s1 != g.p)
    fail("b*s2 - a*s1 = p, expected " + g.p.str() + ", got " + (g.b * g.s2 - g.a * g.s1).str());
}

GNParams nash_params(const Rational& nu_tilde) {
  if (!(nu_tilde > Rational(2)))
    throw RegimeError("Nash inequality requires nu_tilde > 2 (got " + nu_tilde.str() + ")");
  GNParams g;
  g.nu = nu_tilde;
  g.p = Rational(2);
  g.k = 1;
  g.s1 = Rational(1);
  g.s2 = Rational(2);
  g.a = Rational(4) / nu_tilde;
  g.b = Rational(1) + Rational(2) / nu_tilde;
  validate_gn_params(g);
  return g;
}

GNParams moser_params(const Rational& nu_tilde) {
  if (!(nu_tilde > Rational(2)))
    throw RegimeError("Moser inequality requires nu_tilde > 2 (got " + nu_tilde.str() + ")");
  GNParams g;
  g.nu = nu_tilde;
  g.p = Rational(2);
  g.k = 1;
  g.s1 = Rational(2);
  g.s2 = Rational(2) + Rational(4) / nu_tilde;
  g.a = Rational(2) / nu_tilde;
  g.b = Rational(1);
  validate_gn_params(g);
  return g;
}

GNParams gn_theta_params(const Rational& nu_tilde, const Rational& p, int k,
                         const Rational& s1, const Rational& theta) {
  if (!(theta > Rational(0)) || theta > Rational(1))
    throw RegimeError("Gagliardo-Nirenberg requires theta in (0,1]");
  GNParams g;
  g.nu = nu_tilde;
  g.p = p;
  g.k = k;
  g.s1 = s1;
  Rational inv_s2 =
      (Rational(1) - theta) / s1 + theta * (Rational(1) / p - Rational(k) / nu_tilde);
  if (!(inv_s2 > Rational(0))) throw RegimeError("derived 1/s2 is not positive");
  g.s2 = Rational(1) / inv_s2;
  g.b = p / (theta * g.s2);
  g.a = p * (Rational(1) - theta) / (s1 * theta);
  validate_gn_params(g);
  return g;
}

}  // namespace hvf
