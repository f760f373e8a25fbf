#include <cmath>

#include "doctest.h"
#include "models.hpp"
#include "parser.hpp"
#include "suites.hpp"
#include "support.hpp"

using namespace hvf;
using hvf::testing::rel_err;

namespace {

std::vector<Rational> rvec(std::initializer_list<Rational> rs) { return rs; }

QuadPlan plan2d() {
  QuadPlan p;
  p.points = 129;
  return p;
}

QuadPlan plan3d() {
  QuadPlan p;
  p.points = 33;
  return p;
}

}  // namespace

TEST_SUITE_BEGIN("suites");

TEST_CASE("lp norm of the standard bump matches a radial reference") {
  TestFunction u = bump(rvec({Rational(0), Rational(0)}), rvec({Rational(1), Rational(1)}));
  auto norm = lp_norm(u, 1.0, plan2d());
  // reference: 2*pi*int_0^1 exp(-1/(1-r^2)) r dr by fine 1-D midpoint
  const int nref = 400000;
  double ref = 0.0;
  for (int i = 0; i < nref; ++i) {
    double r = (i + 0.5) / nref;
    ref += std::exp(-1.0 / (1.0 - r * r)) * r;
  }
  ref *= 2.0 * M_PI / nref;
  CHECK(rel_err(norm.value, ref) < 1e-3);
  CHECK(!norm.flagged);
}

TEST_CASE("zero member has zero norm") {
  TestFunction u = bump(rvec({Rational(0), Rational(0)}), rvec({Rational(1), Rational(1)}));
  u.amplitude = 0.0;
  CHECK(lp_norm(u, 2.0, plan2d()).value == 0.0);
}

TEST_CASE("norm scaling under dilation is s^(n/p)") {
  auto fam = radial_family(rvec({Rational(0), Rational(0)}), rvec({Rational(1), Rational(1)}), 2);
  for (double p : {1.0, 2.0, 3.0}) {
    double n1 = lp_norm(fam[0], p, plan2d()).value;
    double nh = lp_norm(fam[1], p, plan2d()).value;
    CHECK(rel_err(nh, n1 * std::pow(0.5, 2.0 / p)) < 1e-12);
  }
}

TEST_CASE("horizontal derivative norm against a finite-difference oracle") {
  auto sys = gallery::system_for("euclid2");
  TestFunction u = bump(rvec({Rational(1, 2), Rational(1, 2)}),
                        rvec({Rational(2, 5), Rational(2, 5)}));
  u.expression = mul(variable(0), u.expression);  // x1 * bump
  int J[1] = {0};
  auto sym = horizontal_derivative_norm(sys, u, J, 2.0, plan2d());

  GatedEval g(u, u.expression);
  auto fd = [&](std::span<const double> x) {
    const double h = 1e-5;
    std::vector<double> xp(x.begin(), x.end()), xm(x.begin(), x.end());
    xp[0] += h;
    xm[0] -= h;
    double d = (g(xp) - g(xm)) / (2 * h);
    return d * d;
  };
  double ref = std::sqrt(integrate_box(fd, u.support_lo(), u.support_hi(), 257));
  CHECK(rel_err(sym.value, ref) < 5e-3);

  // |J| = 0 is the identity
  auto empty = horizontal_derivative_norm(sys, u, std::span<const int>{}, 2.0, plan2d());
  CHECK(empty.value == lp_norm(u, 2.0, plan2d()).value);
}

TEST_CASE("grushin X2 derivative equals the weighted d2 norm") {
  auto sys = gallery::system_for("grushin");
  TestFunction u = bump(rvec({Rational(1, 2), Rational(0)}),
                        rvec({Rational(3, 10), Rational(3, 10)}));
  int J[1] = {1};
  auto sym = horizontal_derivative_norm(sys, u, J, 2.0, plan2d());
  GatedEval d2(u, differentiate(u.expression, 1));
  auto weighted = [&](std::span<const double> x) {
    double v = x[0] * d2(x);
    return v * v;
  };
  double ref = std::sqrt(integrate_box(weighted, u.support_lo(), u.support_hi(), 257));
  CHECK(rel_err(sym.value, ref) < 1e-6);
}

TEST_CASE("symbolic X^J agrees with nested central differences") {
  std::mt19937 rng(2024);
  for (const auto& model : gallery::models()) {
    auto sys = gallery::system_for(model.name);
    std::vector<Rational> c(sys.n, Rational(0)), r(sys.n, Rational(1, 2));
    TestFunction u = bump(c, r);
    CompiledSystem cs(sys);
    std::vector<double> b(static_cast<std::size_t>(sys.m) * sys.n);
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<int> J(1 + trial % 2);
      for (auto& j : J) j = static_cast<int>(rng() % sys.m);
      Expr full = horizontal_derivative(sys, u.expression, J);
      Expr tail = J.size() > 1
                      ? horizontal_derivative(sys, u.expression,
                                              std::span<const int>(J.data() + 1, J.size() - 1))
                      : u.expression;
      GatedEval gfull(u, full), gtail(u, tail);
      auto p = hvf::testing::random_point(rng, sys.n, -0.3, 0.3);
      cs.eval_fields(p, b.data());
      const double h = 1e-5;
      double fd = 0.0;
      for (int kk = 0; kk < sys.n; ++kk) {
        std::vector<double> xp(p), xm(p);
        xp[kk] += h;
        xm[kk] -= h;
        fd += b[J[0] * sys.n + kk] * (gtail(xp) - gtail(xm)) / (2 * h);
      }
      double sym = gfull(p);
      CHECK(std::fabs(sym - fd) <= 1e-4 * std::max({1.0, std::fabs(sym), std::fabs(fd)}));
    }
  }
}

TEST_CASE("classical sobolev inequality on euclid2 (p=1, q=2)") {
  auto sys = gallery::system_for("euclid2");
  auto center = rvec({Rational(1, 2), Rational(1, 2)});
  auto base = rvec({Rational(2, 5), Rational(2, 5)});
  auto family = radial_family(center, base, 8);
  auto probe = aniso_family(center, base, {1, 1}, 4, 5);
  SobolevOptions opt;
  opt.k = 1;
  opt.p = Rational(1);
  opt.plan = plan2d();
  auto rep = sobolev_suite(sys, Rational(2), opt, family, probe);
  CHECK(rep.verdict == "PASS");
  CHECK(rep.exponents.at("q") == "2");
  CHECK(rep.constant > 0.0);
  CHECK(rep.constant < 1.0);  // classical GNS constant is below 1
  CHECK(rep.metrics.at("probe_growth") >= 2.0);
  CHECK(rep.metrics.at("probe_monotone") == 1.0);
}

TEST_CASE("critical-line sobolev embeds every finite q and skips the probe") {
  auto sys = gallery::system_for("euclid2");
  auto center = rvec({Rational(1, 2), Rational(1, 2)});
  auto base = rvec({Rational(2, 5), Rational(2, 5)});
  auto family = radial_family(center, base, 6);
  auto probe = aniso_family(center, base, {1, 1}, 4, 5);
  SobolevOptions opt;
  opt.k = 1;
  opt.p = Rational(2);  // kp = nu_tilde = 2
  opt.plan = plan2d();
  auto rep = sobolev_suite(sys, Rational(2), opt, family, probe);
  CHECK(rep.verdict == "PASS");
  CHECK(rep.metrics.count("probe_growth") == 0);
  CHECK(rep.notes.find("probe skipped") != std::string::npos);
}

TEST_CASE("nash inequality on heisenberg passes") {
  auto sys = gallery::system_for("heisenberg");
  auto params = nash_params(Rational(4));
  auto center = rvec({Rational(0), Rational(0), Rational(0)});
  auto base = rvec({Rational(1, 2), Rational(1, 2), Rational(1, 2)});
  auto family = radial_family(center, base, 4);
  auto rep = gn_suite(sys, params, "nash", family, plan3d());
  CHECK(rep.verdict == "PASS");
  CHECK(rep.constant > 0.0);
}

TEST_CASE("x-perimeter of euclidean disks") {
  auto sys = gallery::system_for("euclid2");
  for (double rho : {0.5, 0.25, 0.125}) {
    Ellipsoid e{{0.0, 0.0}, {rho, rho}};
    auto per = x_perimeter(sys, e);
    CHECK(rel_err(per.value, 2 * M_PI * rho) < 1e-10);
    CHECK(rel_err(per.value / std::sqrt(e.measure()), 2 * std::sqrt(M_PI)) < 1e-10);
  }
}

TEST_CASE("grushin perimeter of the unit disk matches a 1-D reference") {
  auto sys = gallery::system_for("grushin");
  Ellipsoid e{{0.0, 0.0}, {1.0, 1.0}};
  auto per = x_perimeter(sys, e);
  const int nref = 2000000;
  double ref = 0.0;
  for (int i = 0; i < nref; ++i) {
    double t = 2.0 * M_PI * (i + 0.5) / nref;
    double c = std::cos(t), s = std::sin(t);
    ref += std::sqrt(c * c + c * c * s * s) * (2.0 * M_PI / nref);
  }
  CHECK(rel_err(per.value, ref) < 1e-3);
}

TEST_CASE("euclidean isoperimetric quotient is dilation invariant") {
  auto sys = gallery::system_for("euclid2");
  std::vector<Ellipsoid> shapes;
  for (double s : {1.0, 0.5, 0.25, 0.125, 0.0625})
    shapes.push_back({{0.0, 0.0}, {0.4 * s, 0.4 * s}});
  auto rep = isoperimetric_suite(sys, Rational(1, 2), shapes);
  CHECK(rep.verdict == "PASS");
  for (const auto& row : rep.rows)
    CHECK(rel_err(row.at("quotient"), 1.0 / (2 * std::sqrt(M_PI))) < 5e-3);
  CHECK(rep.metrics.at("decay_factor") == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("log-sobolev chain on euclid2") {
  auto sys = gallery::system_for("euclid2");
  auto center = rvec({Rational(1, 2), Rational(1, 2)});
  auto base = rvec({Rational(2, 5), Rational(2, 5)});
  auto family = radial_family(center, base, 6);
  auto rep = log_sobolev_suite(sys, Rational(2), 1, Rational(1), family, plan2d());
  CHECK(rep.verdict == "PASS");
  // calculus identity behind the first inequality: ln(Cx) = (C/e)x at x = e/C
  double c = rep.constant;
  double x = M_E / c;
  CHECK(rel_err(std::log(c * x), c / M_E * x) < 1e-12);
}

TEST_CASE("moser-trudinger: zero member gives exactly the domain volume") {
  auto sys = gallery::system_for("euclid2");
  TestFunction zero = bump(rvec({Rational(1, 2), Rational(1, 2)}),
                           rvec({Rational(1, 4), Rational(1, 4)}));
  zero.amplitude = 0.0;
  zero.params["scale"] = 0.0;
  auto rep = moser_trudinger_suite(sys, gallery::domain_for("euclid2"), Rational(2),
                                   {0.1, 0.2, 0.4}, {zero}, plan2d());
  for (const auto& row : rep.rows) CHECK(row.at("integral_over_omega") == 1.0);
  CHECK(rep.verdict == "PASS");
  CHECK(rep.metrics.at("sigma_star") == 0.4);
}

TEST_CASE("moser-trudinger integral is nondecreasing in sigma") {
  auto sys = gallery::system_for("euclid2");
  auto family = radial_family(rvec({Rational(1, 2), Rational(1, 2)}),
                              rvec({Rational(1, 4), Rational(1, 4)}), 2);
  auto rep = moser_trudinger_suite(sys, gallery::domain_for("euclid2"), Rational(2),
                                   {0.05, 0.1, 0.2, 0.4, 0.8}, family, plan2d());
  double prev = 0.0;
  int count = 0;
  for (const auto& row : rep.rows) {
    if (count % 5 == 0) prev = 0.0;
    CHECK(row.at("integral_over_omega") >= prev);
    prev = row.at("integral_over_omega");
    ++count;
  }
}

TEST_CASE("poincare with plateau families") {
  auto sysE = gallery::system_for("euclid2");
  auto famE = plateau_family(rvec({Rational(1, 2), Rational(1, 2)}),
                             rvec({Rational(2, 5), Rational(2, 5)}), 5);
  auto repE = poincare_check(sysE, Rational(1), famE, plan2d());
  CHECK(repE.verdict == "PASS");
  CHECK(repE.constant > 0.0);

  // Grushin family supported across the degenerate line x1 = 0.
  auto sysG = gallery::system_for("grushin");
  auto famG = plateau_family(rvec({Rational(0), Rational(3, 10)}),
                             rvec({Rational(2, 5), Rational(3, 10)}), 4);
  QuadPlan fine = plan2d();
  fine.points = 385;  // the eps = 1/27 shell needs a few cells across
  auto repG = poincare_check(sysG, Rational(2), famG, fine);
  CHECK(repG.verdict == "PASS");
}

TEST_CASE("representation bound on euclid2 with the 1/(pi d) kernel") {
  auto sys = gallery::system_for("euclid2");
  OracleParams params;
  params.h = 1.0 / 24;
  DistanceOracle oracle(sys, gallery::domain_for("euclid2"), params);
  CommutatorBasis basis(sys, 1);
  auto family = radial_family(rvec({Rational(1, 2), Rational(1, 2)}),
                              rvec({Rational(3, 10), Rational(3, 10)}), 3);
  QuadPlan plan;
  plan.points = 65;
  auto rep = representation_check(sys, oracle, basis, family, plan, 12, 9);
  CHECK(rep.verdict == "PASS");
  CHECK(rep.constant > 0.0);
  CHECK(rep.constant < 3.0);  // the true euclidean constant is about 1/2
}

TEST_CASE("rayleigh quotient upper bound and invariances") {
  auto sys = gallery::system_for("euclid2");
  TestFunction u = bump(rvec({Rational(1, 2), Rational(1, 2)}),
                        rvec({Rational(1, 2), Rational(1, 2)}));
  auto rep = rayleigh_bound(sys, Rational(2), {u}, plan2d());
  // Dirichlet lambda_1 of the unit square is 2 pi^2; any quotient sits above.
  CHECK(rep.constant >= 2 * M_PI * M_PI);

  TestFunction u2 = u;
  u2.amplitude = 2.0;
  auto rep2 = rayleigh_bound(sys, Rational(2), {u2}, plan2d());
  CHECK(rep2.constant == rep.constant);  // scale invariance, exactly

  auto fam3 = radial_family(rvec({Rational(1, 2), Rational(1, 2)}),
                            rvec({Rational(1, 2), Rational(1, 2)}), 3);
  auto rep3 = rayleigh_bound(sys, Rational(2), fam3, plan2d());
  CHECK(rep3.constant <= rep.constant * (1 + 1e-12));  // min can only decrease
}

TEST_CASE("derivative expression growth is capped") {
  auto sys = gallery::system_for("example21");
  TestFunction u = bump(rvec({Rational(0), Rational(0)}), rvec({Rational(1, 2), Rational(1, 2)}));
  std::vector<int> deep(6, 0);
  CHECK_THROWS_AS(horizontal_derivative(sys, u.expression, deep, /*node_budget=*/500),
                  BudgetError);
}

TEST_CASE("degenerate boundary parameterization is rejected") {
  auto sys = gallery::system_for("euclid2");
  Ellipsoid flat{{0.0, 0.0}, {0.0, 0.5}};
  CHECK_THROWS_AS(x_perimeter(sys, flat), DomainError);
}

TEST_CASE("axis dilation weights from the commutator filtration") {
  auto check_weights = [](const char* name, std::vector<double> at, std::vector<int> want) {
    auto sys = gallery::system_for(name);
    CommutatorBasis basis(sys, sys.s0_hint.value_or(1));
    CHECK(axis_weights(basis, at) == want);
  };
  check_weights("euclid2", {0.3, 0.4}, {1, 1});
  check_weights("grushin", {0.0, 0.0}, {1, 2});
  check_weights("heisenberg", {0.0, 0.0, 0.0}, {1, 1, 2});
  check_weights("martinet", {0.0, 0.0, 0.0}, {1, 1, 3});
  check_weights("example21", {0.0, 0.0}, {1, 2});
}

TEST_SUITE_END();
