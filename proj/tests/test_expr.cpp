#include <cmath>
#include <random>

#include "doctest.h"
#include "expr.hpp"
#include "parser.hpp"
#include "support.hpp"

using namespace hvf;
using hvf::testing::fd_partial;
using hvf::testing::random_point;
using hvf::testing::rel_err;

TEST_SUITE_BEGIN("expr");

TEST_CASE("rational arithmetic and parsing") {
  CHECK(Rational::parse("1.25") == Rational(5, 4));
  CHECK(Rational::parse("-3/4") == Rational(-3, 4));
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK((Rational(1, 3) + Rational(1, 6)) == Rational(1, 2));
  CHECK((Rational(2, 3) * Rational(3, 2)).is_one());
  CHECK(Rational(1, 3).pow(-2) == Rational(9));
  CHECK_THROWS_AS(Rational::parse("x"), std::invalid_argument);
  CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
}

TEST_CASE("evaluation matches closed forms") {
  // exp(x2) at (0.3, 0) -> 1
  Expr e1 = fn(FnKind::Exp, variable(1));
  CHECK(evaluate(e1, std::vector<double>{0.3, 0.0}) == doctest::Approx(1.0).epsilon(1e-15));
  // x1*x2 at (2,3) -> 6
  Expr e2 = mul(variable(0), variable(1));
  CHECK(evaluate(e2, std::vector<double>{2.0, 3.0}) == 6.0);
  // exp(2*x2) at (0, 0.5) -> e, to 1e-12 against the library exponential
  Expr e3 = fn(FnKind::Exp, mul(constant(2), variable(1)));
  CHECK(rel_err(evaluate(e3, std::vector<double>{0.0, 0.5}), std::exp(1.0)) < 1e-12);
}

TEST_CASE("evaluation errors carry the offending subexpression") {
  Expr bad = div(constant(1), variable(0));
  try {
    evaluate(bad, std::vector<double>{0.0});
    FAIL("expected EvalError");
  } catch (const EvalError& err) {
    CHECK(err.subexpr == "1/x1");
  }
  Expr logbad = fn(FnKind::Log, variable(0));
  CHECK_THROWS_AS(evaluate(logbad, std::vector<double>{-1.0}), EvalError);
}

TEST_CASE("differentiation rules") {
  // d/dx2 exp(x2) = exp(x2)
  Expr e = fn(FnKind::Exp, variable(1));
  Expr de = differentiate(e, 1);
  std::vector<double> p{0.7, -0.2};
  CHECK(evaluate(de, p) == evaluate(e, p));
  // d/dx1 (x1*x2) = x2
  Expr prod = mul(variable(0), variable(1));
  CHECK(to_string(differentiate(prod, 0)) == "x2");
  // d/dx2 exp(2*x2) = 2*exp(2*x2), finite-difference cross-check at x2 in {0, 0.5}
  Expr e2 = fn(FnKind::Exp, mul(constant(2), variable(1)));
  Expr de2 = differentiate(e2, 1);
  for (double x2 : {0.0, 0.5}) {
    std::vector<double> q{0.0, x2};
    CHECK(rel_err(evaluate(de2, q), 2 * std::exp(2 * x2)) < 1e-14);
    CHECK(rel_err(evaluate(de2, q), fd_partial(e2, q, 1)) < 1e-6);
  }
}

TEST_CASE("derivative matches central differences at random safe points") {
  std::mt19937 rng(20240817);
  std::vector<Expr> pool = {
      parse_expression("exp(x2)*sin(x1) + x1^3/(2 + cos(x2))", 2),
      parse_expression("log(2 + x1^2) - x2/(1 + x1^2)", 2),
      parse_expression("(x1 - x2)^2*exp(x1*x2)", 2),
  };
  for (const auto& e : pool) {
    for (int axis = 0; axis < 2; ++axis) {
      Expr de = differentiate(e, axis);
      for (int t = 0; t < 25; ++t) {
        auto p = random_point(rng, 2);
        CHECK(rel_err(evaluate(de, p), fd_partial(e, p, axis)) < 1e-6);
      }
    }
  }
}

TEST_CASE("differentiation is linear under evaluation") {
  std::mt19937 rng(7);
  Expr e1 = parse_expression("sin(x1)*exp(x2)", 2);
  Expr e2 = parse_expression("x1^2*x2 - cos(x2)", 2);
  double a = 3.5;
  Expr combo = add(mul(constant(Rational(7, 2)), e1), e2);
  Expr d_combo = differentiate(combo, 0);
  Expr d_split = add(mul(constant(Rational(7, 2)), differentiate(e1, 0)), differentiate(e2, 0));
  for (int t = 0; t < 100; ++t) {
    auto p = random_point(rng, 2);
    double lhs = evaluate(d_combo, p);
    double rhs = a * evaluate(differentiate(e1, 0), p) + evaluate(differentiate(e2, 0), p);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-14));
    CHECK(evaluate(d_split, p) == doctest::Approx(lhs).epsilon(1e-14));
  }
}

TEST_CASE("pinned rewrites only") {
  CHECK(to_string(mul(constant(0), fn(FnKind::Exp, variable(0)))) == "0");
  CHECK(to_string(mul(constant(1), variable(1))) == "x2");
  CHECK(to_string(add(variable(0), constant(0))) == "x1");
  CHECK(to_string(div(constant(3), constant(4))) == "3/4");
  // No structural zero-detection beyond that: x1 - x1 stays a sum.
  Expr diff = sub(variable(0), variable(0));
  CHECK(diff->kind == ExprKind::Add);
}

TEST_CASE("print/parse round-trip is bitwise for rational expressions") {
  std::mt19937 rng(99);
  std::vector<Expr> pool = {
      parse_expression("1/3*x1^2 - 7/5*x2 + 2", 2),
      parse_expression("(x1 + 1/2)^3/(x2^2 + 1) - x1*x2", 2),
      parse_expression("exp(x1/3)*cos(x2) + sin(x1)^2", 2),
      differentiate(parse_expression("(x1 - x2)^4/(1 + x1^2)", 2), 0),
  };
  for (const auto& e : pool) {
    Expr back = parse_expression(to_string(e), 2);
    for (int t = 0; t < 50; ++t) {
      auto p = random_point(rng, 2);
      CHECK(evaluate(back, p) == evaluate(e, p));  // bitwise
    }
  }
}

TEST_CASE("compiled evaluator agrees with the interpreter") {
  std::mt19937 rng(4242);
  Expr e = parse_expression("exp(x2)*x1^3 - sin(x1*x2)/(2 + cos(x1)) + 5/2", 2);
  CompiledExpr c(e);
  for (int t = 0; t < 200; ++t) {
    auto p = random_point(rng, 2);
    CHECK(c.eval(p) == evaluate(e, p));
  }
}

TEST_SUITE_END();
