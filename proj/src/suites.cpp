#include "suites.hpp"

#include <algorithm>
#include <cmath>

namespace hvf {

namespace {

std::vector<std::vector<int>> multi_indices(int m, int k) {
  std::vector<std::vector<int>> out;
  if (k == 0) {
    out.push_back({});
    return out;
  }
  std::vector<int> idx(k, 0);
  while (true) {
    out.push_back(idx);
    int c = k - 1;
    while (c >= 0 && ++idx[c] == m) idx[c--] = 0;
    if (c < 0) break;
  }
  return out;
}

QuadValue norm_from_integral(QuadValue integral, double p, double flag_drift) {
  QuadValue out;
  out.value = std::pow(std::max(integral.value, 0.0), 1.0 / p);
  out.refined = std::pow(std::max(integral.refined, 0.0), 1.0 / p);
  out.drift = std::fabs(out.refined - out.value) / std::max(out.refined, 1e-300);
  out.flagged = out.drift > flag_drift;  // the 0.5% rule applies to the norm
  return out;
}

// Worst member wins: ranks FAIL > FLAG > PASS.
void raise_verdict(SuiteReport& rep, const std::string& v) {
  auto rank = [](const std::string& s) { return s == "FAIL" ? 2 : s == "FLAG" ? 1 : 0; };
  if (rank(v) > rank(rep.verdict)) rep.verdict = v;
}

// Boundedness rule: the empirical constant over the ordered family must not
// grow by more than 2x from its first half to the whole family.
void apply_stability(SuiteReport& rep, const std::vector<double>& ratios, bool flagged) {
  rep.family_size = static_cast<int>(ratios.size());
  double c_half = 0.0, c_full = 0.0;
  std::size_t half = (ratios.size() + 1) / 2;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    if (i < half) c_half = std::max(c_half, ratios[i]);
    c_full = std::max(c_full, ratios[i]);
  }
  rep.constant = c_full;
  double growth = c_half > 0.0 ? c_full / c_half : 1.0;
  rep.metrics["stability_growth"] = growth;
  if (!std::isfinite(c_full) || growth > 2.0) raise_verdict(rep, "FAIL");
  if (flagged) raise_verdict(rep, "FLAG");
}

double sup_on_grid(const GatedEval& g, const TestFunction& tf, int points) {
  auto lo = tf.support_lo();
  auto hi = tf.support_hi();
  const int n = tf.dim();
  std::vector<int> idx(n, 0);
  std::vector<double> x(n);
  double best = 0.0;
  while (true) {
    for (int i = 0; i < n; ++i) x[i] = lo[i] + (idx[i] + 0.5) * (hi[i] - lo[i]) / points;
    best = std::max(best, std::fabs(g(x)));
    int c = n - 1;
    while (c >= 0 && ++idx[c] == points) idx[c--] = 0;
    if (c < 0) break;
  }
  return best;
}

std::string rstr(const Rational& r) { return r.str(); }

}  // namespace

QuadValue lp_norm(const TestFunction& u, double p, const QuadPlan& plan) {
  if (p < 1.0) throw std::invalid_argument("p must be at least 1");
  GatedEval g(u, u.expression);
  auto integrand = [&](std::span<const double> x) { return std::pow(std::fabs(g(x)), p); };
  return norm_from_integral(integrate_checked(integrand, u.support_lo(), u.support_hi(), plan), p,
                            plan.flag_drift);
}

QuadValue horizontal_derivative_norm(const VectorFieldSystem& sys, const TestFunction& u,
                                     std::span<const int> J, double p, const QuadPlan& plan) {
  if (J.empty()) return lp_norm(u, p, plan);
  Expr d = horizontal_derivative(sys, u.expression, J);
  GatedEval g(u, d);
  auto integrand = [&](std::span<const double> x) { return std::pow(std::fabs(g(x)), p); };
  return norm_from_integral(integrate_checked(integrand, u.support_lo(), u.support_hi(), plan), p,
                            plan.flag_drift);
}

QuadValue derivative_sum_norm(const VectorFieldSystem& sys, const TestFunction& u, int k, double p,
                              const QuadPlan& plan) {
  QuadValue sum;
  bool flagged = false;
  for (const auto& J : multi_indices(sys.m, k)) {
    auto nv = horizontal_derivative_norm(sys, u, J, p, plan);
    sum.value += nv.value;
    sum.refined += nv.refined;
    flagged = flagged || nv.flagged;
  }
  sum.drift = std::fabs(sum.refined - sum.value) / std::max(sum.refined, 1e-300);
  sum.flagged = flagged || sum.drift > plan.flag_drift;
  return sum;
}

QuadValue gradient_norm(const VectorFieldSystem& sys, const TestFunction& u, double p,
                        const QuadPlan& plan) {
  std::vector<GatedEval> comps;
  for (int j = 0; j < sys.m; ++j) {
    int J[1] = {j};
    comps.emplace_back(u, horizontal_derivative(sys, u.expression, J));
  }
  auto integrand = [&](std::span<const double> x) {
    double s = 0.0;
    for (const auto& g : comps) {
      double v = g(x);
      s += v * v;
    }
    return std::pow(s, p / 2.0);
  };
  return norm_from_integral(integrate_checked(integrand, u.support_lo(), u.support_hi(), plan), p,
                            plan.flag_drift);
}

SuiteReport sobolev_suite(const VectorFieldSystem& sys, const Rational& nu_tilde,
                          const SobolevOptions& opt, const std::vector<TestFunction>& family,
                          const std::vector<TestFunction>& probe_family) {
  SuiteReport rep;
  rep.suite = "sobolev";
  auto info = critical_exponents(nu_tilde, opt.k, opt.p);
  double q;
  if (info.regime == Regime::Subcritical) {
    q = info.q.to_double();
    rep.exponents["q"] = rstr(info.q);
  } else if (info.regime == Regime::Critical) {
    q = 4.0 * opt.p.to_double();  // one representative finite q in the critical range
    rep.exponents["q"] = "critical: all finite q (checked at 4p)";
  } else {
    throw RegimeError("sobolev_suite requires kp <= nu_tilde");
  }
  rep.exponents["nu_tilde"] = rstr(nu_tilde);
  rep.exponents["k"] = std::to_string(opt.k);
  rep.exponents["p"] = rstr(opt.p);
  const double p = opt.p.to_double();

  std::vector<double> ratios;
  bool flagged = false;
  for (const auto& u : family) {
    auto nq = lp_norm(u, q, opt.plan);
    auto dsum = derivative_sum_norm(sys, u, opt.k, p, opt.plan);
    if (dsum.value < 1e-300) continue;
    double ratio = nq.value / dsum.value;
    ratios.push_back(ratio);
    flagged = flagged || nq.flagged || dsum.flagged;
    std::map<std::string, double> row = u.params;
    row["norm_q"] = nq.value;
    row["deriv_sum"] = dsum.value;
    row["ratio"] = ratio;
    rep.rows.push_back(row);
    if (ratio >= rep.constant) rep.worst_params = u.params;
  }
  apply_stability(rep, ratios, flagged);

  // The sharpness probe only makes sense below the critical line: there it
  // gives evidence that q = p*nu/(nu - kp) cannot be raised. At kp = nu every
  // finite q embeds, so there is nothing to rule out.
  if (!probe_family.empty() && info.regime == Regime::Subcritical) {
    double qp = opt.q_probe > 0.0 ? opt.q_probe : 1.1 * q;
    rep.exponents["q_probe"] = std::to_string(qp);
    std::vector<double> probe;
    for (const auto& u : probe_family) {
      auto nq = lp_norm(u, qp, opt.plan);
      auto dsum = derivative_sum_norm(sys, u, opt.k, p, opt.plan);
      if (dsum.value < 1e-300) continue;
      probe.push_back(nq.value / dsum.value);
      std::map<std::string, double> row = u.params;
      row["probe"] = 1.0;
      row["ratio"] = probe.back();
      rep.rows.push_back(row);
    }
    bool monotone = true;
    for (std::size_t i = 1; i < probe.size(); ++i)
      if (probe[i] < probe[i - 1] * 0.95) monotone = false;
    double growth = probe.empty() ? 0.0 : probe.back() / probe.front();
    rep.metrics["probe_growth"] = growth;
    rep.metrics["probe_monotone"] = monotone ? 1.0 : 0.0;
    if (growth < 2.0 || !monotone) {
      raise_verdict(rep, "FAIL");
      rep.notes += "sharpness probe did not grow 2x monotonically; ";
    }
  } else if (!probe_family.empty()) {
    rep.notes += "sharpness probe skipped: no finite critical exponent at kp = nu_tilde; ";
  }
  return rep;
}

SuiteReport gn_suite(const VectorFieldSystem& sys, const GNParams& params,
                     const std::string& variant, const std::vector<TestFunction>& family,
                     const QuadPlan& plan) {
  validate_gn_params(params);
  SuiteReport rep;
  rep.suite = variant;
  rep.exponents["nu_tilde"] = rstr(params.nu);
  rep.exponents["p"] = rstr(params.p);
  rep.exponents["k"] = std::to_string(params.k);
  rep.exponents["s1"] = rstr(params.s1);
  rep.exponents["s2"] = rstr(params.s2);
  rep.exponents["a"] = rstr(params.a);
  rep.exponents["b"] = rstr(params.b);

  const double p = params.p.to_double();
  const double s1 = params.s1.to_double(), s2 = params.s2.to_double();
  const double a = params.a.to_double(), b = params.b.to_double();

  std::vector<double> ratios;
  bool flagged = false;
  for (const auto& u : family) {
    auto n2 = lp_norm(u, s2, plan);
    auto n1 = lp_norm(u, s1, plan);
    QuadValue dsum_p;  // sum over |J|=k of ||X^J u||_p^p
    bool dflag = false;
    for (const auto& J : multi_indices(sys.m, params.k)) {
      auto nv = horizontal_derivative_norm(sys, u, J, p, plan);
      dsum_p.value += std::pow(nv.value, p);
      dflag = dflag || nv.flagged;
    }
    double rhs = dsum_p.value * std::pow(n1.value, a * s1);
    if (rhs < 1e-300) continue;
    double lhs = std::pow(n2.value, b * s2);
    double ratio = lhs / rhs;
    ratios.push_back(ratio);
    flagged = flagged || n1.flagged || n2.flagged || dflag;
    std::map<std::string, double> row = u.params;
    row["lhs"] = lhs;
    row["rhs"] = rhs;
    row["ratio"] = ratio;
    rep.rows.push_back(row);
    if (ratio >= rep.constant) rep.worst_params = u.params;
  }
  apply_stability(rep, ratios, flagged);
  return rep;
}

double Ellipsoid::measure() const {
  double prod = 1.0;
  for (double r : radii) prod *= r;
  if (radii.size() == 2) return M_PI * prod;
  if (radii.size() == 3) return 4.0 * M_PI / 3.0 * prod;
  throw std::invalid_argument("ellipsoid measure implemented for n = 2, 3");
}

QuadValue x_perimeter(const VectorFieldSystem& sys, const Ellipsoid& shape, int points) {
  const int n = static_cast<int>(shape.center.size());
  if (n != sys.n) throw std::invalid_argument("shape dimension does not match the system");
  for (double r : shape.radii)
    if (!(r > 1e-12)) throw DomainError("degenerate boundary parameterization");
  CompiledSystem cs(sys);
  std::vector<double> b(static_cast<std::size_t>(sys.m) * n);

  auto xperim_2d = [&](int mpts) {
    double acc = 0.0;
    std::vector<double> gamma(2), eta(2);
    const double a1 = shape.radii[0], a2 = shape.radii[1];
    for (int i = 0; i < mpts; ++i) {
      double t = 2.0 * M_PI * (i + 0.5) / mpts;
      gamma[0] = shape.center[0] + a1 * std::cos(t);
      gamma[1] = shape.center[1] + a2 * std::sin(t);
      double speed = std::sqrt(a1 * a1 * std::sin(t) * std::sin(t) +
                               a2 * a2 * std::cos(t) * std::cos(t));
      if (speed < 1e-12) throw DomainError("degenerate boundary parameterization");
      eta[0] = std::cos(t) / a1;
      eta[1] = std::sin(t) / a2;
      double en = std::sqrt(eta[0] * eta[0] + eta[1] * eta[1]);
      eta[0] /= en;
      eta[1] /= en;
      cs.eval_fields(gamma, b.data());
      double s = 0.0;
      for (int j = 0; j < sys.m; ++j) {
        double dot = b[j * 2 + 0] * eta[0] + b[j * 2 + 1] * eta[1];
        s += dot * dot;
      }
      acc += std::sqrt(s) * speed * (2.0 * M_PI / mpts);
    }
    return acc;
  };

  auto xperim_3d = [&](int mpts) {
    double acc = 0.0;
    const double a1 = shape.radii[0], a2 = shape.radii[1], a3 = shape.radii[2];
    int nth = mpts, nph = 2 * mpts;
    std::vector<double> gamma(3), eta(3);
    for (int it = 0; it < nth; ++it) {
      double th = M_PI * (it + 0.5) / nth;
      for (int ip = 0; ip < nph; ++ip) {
        double ph = 2.0 * M_PI * (ip + 0.5) / nph;
        double st = std::sin(th), ct = std::cos(th), cp = std::cos(ph), sp = std::sin(ph);
        gamma[0] = shape.center[0] + a1 * st * cp;
        gamma[1] = shape.center[1] + a2 * st * sp;
        gamma[2] = shape.center[2] + a3 * ct;
        double tx[3] = {a1 * ct * cp, a2 * ct * sp, -a3 * st};
        double px[3] = {-a1 * st * sp, a2 * st * cp, 0.0};
        double cr[3] = {tx[1] * px[2] - tx[2] * px[1], tx[2] * px[0] - tx[0] * px[2],
                        tx[0] * px[1] - tx[1] * px[0]};
        double area = std::sqrt(cr[0] * cr[0] + cr[1] * cr[1] + cr[2] * cr[2]);
        if (area < 1e-14) continue;  // poles of the parameterization
        for (int i = 0; i < 3; ++i) eta[i] = cr[i] / area;
        cs.eval_fields(gamma, b.data());
        double s = 0.0;
        for (int j = 0; j < sys.m; ++j) {
          double dot = 0.0;
          for (int i = 0; i < 3; ++i) dot += b[j * 3 + i] * eta[i];
          s += dot * dot;
        }
        acc += std::sqrt(s) * area * (M_PI / nth) * (2.0 * M_PI / nph);
      }
    }
    return acc;
  };

  QuadValue out;
  if (n == 2) {
    out.value = xperim_2d(points);
    out.refined = xperim_2d(2 * points);
  } else if (n == 3) {
    out.value = xperim_3d(points / 8 + 32);
    out.refined = xperim_3d(points / 4 + 64);
  } else {
    throw std::invalid_argument("x_perimeter implemented for n = 2, 3");
  }
  out.drift = std::fabs(out.refined - out.value) / std::max(std::fabs(out.refined), 1e-300);
  out.flagged = out.drift > 0.005;
  return out;
}

SuiteReport isoperimetric_suite(const VectorFieldSystem& sys, const Rational& exponent,
                                const std::vector<Ellipsoid>& shapes, int points) {
  SuiteReport rep;
  rep.suite = "isoperimetric";
  rep.exponents["exponent"] = rstr(exponent);
  const double e = exponent.to_double();
  std::vector<double> ratios;
  bool flagged = false;
  bool monotone_decay = true;
  double prev = -1.0;
  for (const auto& shape : shapes) {
    auto per = x_perimeter(sys, shape, points);
    double quotient = std::pow(shape.measure(), e) / per.value;
    ratios.push_back(quotient);
    flagged = flagged || per.flagged;
    std::map<std::string, double> row;
    row["measure"] = shape.measure();
    row["perimeter"] = per.value;
    row["quotient"] = quotient;
    row["r1"] = shape.radii[0];
    rep.rows.push_back(row);
    if (prev >= 0.0 && quotient > prev * 1.02) monotone_decay = false;
    prev = quotient;
  }
  apply_stability(rep, ratios, flagged);
  rep.metrics["decay_factor"] = ratios.front() / std::max(ratios.back(), 1e-300);
  rep.metrics["monotone_decay"] = monotone_decay ? 1.0 : 0.0;
  return rep;
}

SuiteReport log_sobolev_suite(const VectorFieldSystem& sys, const Rational& nu_tilde, int k,
                              const Rational& p, const std::vector<TestFunction>& family,
                              const QuadPlan& plan) {
  SuiteReport rep;
  rep.suite = "log-sobolev";
  Rational kp = p * Rational(k);
  if (kp > nu_tilde) throw RegimeError("log-sobolev requires kp <= nu_tilde");
  double q;
  if (kp < nu_tilde) {
    q = (p * nu_tilde / (nu_tilde - kp)).to_double();
  } else {
    q = 4.0 * p.to_double();
    rep.notes += "critical case: C taken from the q = 4p embedding; ";
  }
  rep.exponents["nu_tilde"] = rstr(nu_tilde);
  rep.exponents["k"] = std::to_string(k);
  rep.exponents["p"] = rstr(p);
  const double pd = p.to_double();
  const double knu = static_cast<double>(k) / nu_tilde.to_double();

  struct Member {
    double nq, np, dsum, entropy;
    bool flagged;
    const TestFunction* tf;
  };
  std::vector<Member> members;
  for (const auto& u : family) {
    auto nq = lp_norm(u, q, plan);
    auto np = lp_norm(u, pd, plan);
    auto ds = derivative_sum_norm(sys, u, k, pd, plan);
    if (np.value < 1e-300 || ds.value < 1e-300) continue;
    GatedEval g(u, u.expression);
    auto ent_integrand = [&](std::span<const double> x) {
      double w = std::pow(std::fabs(g(x)), pd);
      return w < 1e-300 ? 0.0 : w * std::log(w);
    };
    auto ent = integrate_checked(ent_integrand, u.support_lo(), u.support_hi(), plan);
    members.push_back(
        {nq.value, np.value, ds.value, ent.value, nq.flagged || np.flagged || ds.flagged, &u});
  }
  double c_emp = 0.0;
  for (const auto& mem : members) c_emp = std::max(c_emp, mem.nq / mem.dsum);
  double c = 1.05 * c_emp;
  rep.metrics["sobolev_constant"] = c_emp;
  rep.constant = c;
  rep.family_size = static_cast<int>(members.size());

  bool flagged = false;
  for (const auto& mem : members) {
    double dn = mem.dsum / mem.np;  // derivative sum of the p-normalized member
    double entropy_n = mem.entropy / std::pow(mem.np, pd) - pd * std::log(mem.np);
    double lhs = c / M_E * dn;
    double mid = std::log(c * dn);
    double rhs = knu * entropy_n;
    double tol = 1e-9 + 10.0 * plan.flag_drift * std::fabs(mid);
    std::map<std::string, double> row = mem.tf->params;
    row["lhs"] = lhs;
    row["mid"] = mid;
    row["rhs"] = rhs;
    rep.rows.push_back(row);
    flagged = flagged || mem.flagged;
    if (lhs + tol < mid || mid + tol < rhs) {
      raise_verdict(rep, "FAIL");
      rep.worst_params = mem.tf->params;
    }
  }
  if (flagged) raise_verdict(rep, "FLAG");
  return rep;
}

SuiteReport holder_suite(const VectorFieldSystem& sys, const DistanceOracle& oracle,
                         const Rational& nu_tilde, int k, const Rational& p,
                         const std::vector<TestFunction>& family, const QuadPlan& plan,
                         int pairs, std::uint64_t seed) {
  SuiteReport rep;
  rep.suite = "holder";
  auto info = critical_exponents(nu_tilde, k, p);
  if (info.regime != Regime::Supercritical || info.holder_order != 0)
    throw RegimeError("holder_suite requires kp > nu_tilde with k - floor(nu/p) - 1 = 0");
  Rational alpha = info.alpha_free ? Rational(1, 2) : info.alpha;
  if (info.alpha_free) rep.notes += "nu/p integral: alpha = 1/2 chosen from (0,1); ";
  rep.exponents["nu_tilde"] = rstr(nu_tilde);
  rep.exponents["k"] = std::to_string(k);
  rep.exponents["p"] = rstr(p);
  rep.exponents["alpha"] = rstr(alpha);
  const double al = alpha.to_double();
  const double pd = p.to_double();

  // Pairs sampled in the widest support, clipped into the oracle box.
  const auto& dom = oracle.domain();
  const int n = sys.n;
  std::vector<double> lo = family.front().support_lo(), hi = family.front().support_hi();
  for (const auto& u : family) {
    auto l2 = u.support_lo();
    auto h2 = u.support_hi();
    for (int i = 0; i < n; ++i) {
      lo[i] = std::min(lo[i], l2[i]);
      hi[i] = std::max(hi[i], h2[i]);
    }
  }
  for (int i = 0; i < n; ++i) {
    double c = 0.5 * (lo[i] + hi[i]), w = 0.75 * (hi[i] - lo[i]);
    lo[i] = std::max(c - w, dom.lo[i]);
    hi[i] = std::min(c + w, dom.hi[i]);
  }
  const int n_sources = 10;
  const int per_source = std::max(1, pairs / n_sources);
  std::uint64_t ctr = 0;
  auto draw = [&](std::vector<double>& x) {
    for (int i = 0; i < n; ++i)
      x[i] = lo[i] + (hi[i] - lo[i]) * uniform01(seed, ctr++);
  };
  std::vector<std::vector<double>> xs(n_sources, std::vector<double>(n));
  std::vector<std::vector<std::vector<double>>> ys(n_sources);
  std::vector<std::vector<double>> dists(n_sources);
  int skipped = 0;
  for (int s = 0; s < n_sources; ++s) {
    draw(xs[s]);
    for (int t = 0; t < per_source; ++t) {
      std::vector<double> y(n);
      draw(y);
      double d = oracle.distance(xs[s], y).value;
      if (d < 4.0 * oracle.h_step()) {
        ++skipped;
        continue;
      }
      ys[s].push_back(y);
      dists[s].push_back(d);
    }
  }
  if (skipped > 0)
    rep.notes += std::to_string(skipped) + " pairs below 4h oracle resolution skipped; ";

  std::vector<double> ratios;
  bool flagged = false;
  for (const auto& u : family) {
    GatedEval g(u, u.expression);
    double semi = 0.0;
    for (int s = 0; s < n_sources; ++s) {
      double ux = g(xs[s]);
      for (std::size_t t = 0; t < ys[s].size(); ++t) {
        double dv = std::fabs(ux - g(ys[s][t]));
        if (dv > 0.0) semi = std::max(semi, dv / std::pow(dists[s][t], al));
      }
    }
    double supu = sup_on_grid(g, u, std::min(plan.points, 65));
    auto dsum = derivative_sum_norm(sys, u, k, pd, plan);
    if (dsum.value < 1e-300) continue;
    double ratio = (semi + supu) / dsum.value;
    ratios.push_back(ratio);
    flagged = flagged || dsum.flagged;
    std::map<std::string, double> row = u.params;
    row["seminorm"] = semi;
    row["sup"] = supu;
    row["deriv_sum"] = dsum.value;
    row["ratio"] = ratio;
    rep.rows.push_back(row);
    if (ratio >= rep.constant) rep.worst_params = u.params;
  }
  apply_stability(rep, ratios, flagged);
  return rep;
}

SuiteReport moser_trudinger_suite(const VectorFieldSystem& sys, const DomainSpec& omega,
                                  const Rational& nu_tilde, const std::vector<double>& sigmas,
                                  const std::vector<TestFunction>& family, const QuadPlan& plan,
                                  double omega_multiple) {
  SuiteReport rep;
  rep.suite = "moser-trudinger";
  rep.exponents["nu_tilde"] = rstr(nu_tilde);
  const double nu = nu_tilde.to_double();
  const double expnt = nu / (nu - 1.0);
  rep.exponents["exponent"] = std::to_string(expnt);

  auto indicator = [&](std::span<const double> x) { return omega.in_closure(x) ? 1.0 : 0.0; };
  double omega_vol = integrate_box(indicator, omega.lo, omega.hi, plan.points);
  rep.metrics["omega_volume"] = omega_vol;

  std::vector<double> sorted_sigmas = sigmas;
  std::sort(sorted_sigmas.begin(), sorted_sigmas.end());
  double family_sigma = sorted_sigmas.back();
  bool flagged = false;
  for (const auto& u : family) {
    auto dn = gradient_norm(sys, u, nu, plan);
    TestFunction v = u;
    if (dn.value > 1e-300) v.amplitude = u.amplitude / dn.value;  // ||Xv||_nu = 1
    flagged = flagged || dn.flagged;
    GatedEval g(v, v.expression);
    double member_sigma = 0.0;
    for (double sigma : sorted_sigmas) {
      auto integrand = [&](std::span<const double> x) {
        double a = std::fabs(g(x));
        if (a == 0.0) return 0.0;
        double e = sigma * std::pow(a, expnt);
        return std::exp(std::min(e, 700.0)) - 1.0;  // overflow-guarded
      };
      double excess =
          integrate_box(integrand, v.support_lo(), v.support_hi(), plan.points);
      double integral = omega_vol + excess;
      std::map<std::string, double> row = u.params;
      row["sigma"] = sigma;
      row["integral_over_omega"] = integral / omega_vol;
      rep.rows.push_back(row);
      if (integral <= omega_multiple * omega_vol) member_sigma = sigma;
    }
    family_sigma = std::min(family_sigma, member_sigma);
  }
  rep.metrics["sigma_star"] = family_sigma;
  rep.constant = family_sigma;
  rep.family_size = static_cast<int>(family.size());
  if (family_sigma <= 0.0) raise_verdict(rep, "FAIL");
  if (flagged) raise_verdict(rep, "FLAG");
  return rep;
}

SuiteReport poincare_check(const VectorFieldSystem& sys, const Rational& p,
                           const std::vector<TestFunction>& family, const QuadPlan& plan) {
  SuiteReport rep;
  rep.suite = "poincare";
  rep.exponents["p"] = rstr(p);
  const double pd = p.to_double();
  std::vector<double> ratios;
  bool flagged = false;
  for (const auto& u : family) {
    auto np = lp_norm(u, pd, plan);
    auto gn = gradient_norm(sys, u, pd, plan);
    if (np.value < 1e-300 && gn.value < 1e-300) continue;  // zero member skipped
    double ratio = std::pow(np.value / gn.value, pd);
    ratios.push_back(ratio);
    flagged = flagged || np.flagged || gn.flagged;
    std::map<std::string, double> row = u.params;
    row["norm_p"] = np.value;
    row["grad_p"] = gn.value;
    row["ratio"] = ratio;
    rep.rows.push_back(row);
    if (ratio >= rep.constant) rep.worst_params = u.params;
  }
  apply_stability(rep, ratios, flagged);
  return rep;
}

SuiteReport representation_check(const VectorFieldSystem& sys, const DistanceOracle& oracle,
                                 const CommutatorBasis& basis,
                                 const std::vector<TestFunction>& family, const QuadPlan& plan,
                                 int sample_points, std::uint64_t seed) {
  SuiteReport rep;
  rep.suite = "representation";
  const int n = sys.n;
  const auto& dom = oracle.domain();

  // Shared evaluation points inside the widest support, clipped to the box.
  std::vector<double> lo = family.front().support_lo(), hi = family.front().support_hi();
  for (int i = 0; i < n; ++i) {
    lo[i] = std::max(lo[i], dom.lo[i]);
    hi[i] = std::min(hi[i], dom.hi[i]);
  }
  std::vector<std::vector<double>> samples;
  std::uint64_t ctr = 0;
  while (static_cast<int>(samples.size()) < sample_points) {
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = lo[i] + (hi[i] - lo[i]) * uniform01(seed, ctr++);
    samples.push_back(std::move(x));
  }

  bool warned = false;
  std::vector<double> ratios;
  bool flagged = false;
  for (const auto& u : family) {
    GatedEval g(u, u.expression);
    std::vector<GatedEval> grads;
    for (int j = 0; j < sys.m; ++j) {
      int J[1] = {j};
      grads.emplace_back(u, horizontal_derivative(sys, u.expression, J));
    }
    auto density = [&](std::span<const double> y) {
      double s = 0.0;
      for (const auto& gj : grads) {
        double v = gj(y);
        s += v * v;
      }
      return std::sqrt(s) + std::fabs(g(y));
    };

    // Midpoint grid over the member support for the kernel integral.
    auto slo = u.support_lo();
    auto shi = u.support_hi();
    const int pts = std::min(plan.points, 129);
    std::vector<double> gx(n);
    double cell = 1.0;
    std::vector<double> step(n);
    for (int i = 0; i < n; ++i) {
      step[i] = (shi[i] - slo[i]) / pts;
      cell *= step[i];
    }

    double member_best = 0.0;
    std::map<std::string, double> worst;
    for (const auto& x : samples) {
      double ux = std::fabs(g(x));
      if (ux == 0.0) continue;
      auto fx = oracle.field(x);
      int nu_x = pointwise_nu(basis, x);
      double rmax = 4.1 * oracle.h_step();
      for (std::size_t nd = 0; nd < oracle.node_count(); ++nd)
        if (std::isfinite((*fx)[nd])) rmax = std::max(rmax, (*fx)[nd]);
      VolumeTable table(oracle, x, rmax, nu_x);

      double r0 = 2.0 * oracle.h_step();
      double rhs = 0.0;
      std::vector<int> idx(n, 0);
      while (true) {
        for (int i = 0; i < n; ++i) gx[i] = slo[i] + (idx[i] + 0.5) * step[i];
        double w = density(gx);
        if (w > 0.0 && dom.in_box(gx)) {
          double d = oracle.interpolate(*fx, gx);
          if (std::isfinite(d) && d >= r0) rhs += cell * d / table(d) * w;
        }
        int c = n - 1;
        while (c >= 0 && ++idx[c] == pts) idx[c--] = 0;
        if (c < 0) break;
      }
      // Inner shells: density is ~constant at scale r0 around x.
      const int shells = 32;
      double t_eps = r0 * 1e-3, prev_t = t_eps, prev_v = table(t_eps), inner = 0.0;
      for (int kk = 1; kk <= shells; ++kk) {
        double t = t_eps * std::pow(r0 / t_eps, static_cast<double>(kk) / shells);
        double v = table(t);
        inner += prev_t / prev_v * std::max(v - prev_v, 0.0);
        prev_t = t;
        prev_v = v;
      }
      rhs += inner * density(x);
      if (!warned && inner > 0.25 * rhs) {
        rep.notes += "inner-shell extrapolation dominates at some sample points; ";
        warned = true;
      }
      if (rhs <= 0.0) continue;
      double ratio = ux / rhs;
      if (ratio > member_best) {
        member_best = ratio;
        worst = u.params;
      }
    }
    if (member_best == 0.0) continue;
    ratios.push_back(member_best);
    std::map<std::string, double> row = u.params;
    row["ratio"] = member_best;
    rep.rows.push_back(row);
    if (member_best >= rep.constant) rep.worst_params = worst;
  }
  apply_stability(rep, ratios, flagged);
  return rep;
}

SuiteReport rayleigh_bound(const VectorFieldSystem& sys, const Rational& nu_tilde,
                           const std::vector<TestFunction>& family, const QuadPlan& plan) {
  SuiteReport rep;
  rep.suite = "rayleigh";
  rep.exponents["nu_tilde"] = rstr(nu_tilde);
  const double nu = nu_tilde.to_double();
  double best = std::numeric_limits<double>::infinity();
  bool flagged = false;
  for (const auto& u : family) {
    auto np = lp_norm(u, nu, plan);
    auto gn = gradient_norm(sys, u, nu, plan);
    if (np.value < 1e-300) continue;  // zero member skipped
    double quotient = std::pow(gn.value / np.value, nu);
    flagged = flagged || np.flagged || gn.flagged;
    std::map<std::string, double> row = u.params;
    row["quotient"] = quotient;
    rep.rows.push_back(row);
    if (quotient < best) {
      best = quotient;
      rep.worst_params = u.params;
    }
  }
  rep.constant = best;
  rep.family_size = static_cast<int>(rep.rows.size());
  rep.notes += "upper bound on lambda_1(nu); ";
  if (!std::isfinite(best)) raise_verdict(rep, "FAIL");
  if (flagged) raise_verdict(rep, "FLAG");
  return rep;
}

}  // namespace hvf
