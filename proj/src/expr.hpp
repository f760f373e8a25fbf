#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rational.hpp"

namespace hvf {

enum class ExprKind : std::uint8_t { Constant, Variable, Add, Mul, Div, Pow, Fn };
enum class FnKind : std::uint8_t { Exp, Log, Sin, Cos };

struct ExprNode;
// Immutable shared AST; safe to alias across threads once built.
using Expr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  ExprKind kind;
  Rational value;            // Constant
  int var = 0;               // Variable, 0-based
  int expo = 0;              // Pow
  FnKind fn = FnKind::Exp;   // Fn
  std::vector<Expr> kids;
};

struct EvalError : std::runtime_error {
  EvalError(const std::string& what, std::string subexpr_)
      : std::runtime_error(what + " in subexpression: " + subexpr_), subexpr(std::move(subexpr_)) {}
  std::string subexpr;
};

// Factories apply only the pinned rewrites: 0*e -> 0, 1*e -> e, e+0 -> e,
// rational constant folding. Adds/muls are flattened n-ary chains evaluated
// left to right, so print -> parse reproduces the identical tree.
Expr constant(Rational v);
Expr constant(std::int64_t v);
Expr variable(int var0);
Expr add(std::vector<Expr> kids);
Expr add(Expr a, Expr b);
Expr sub(Expr a, Expr b);
Expr mul(std::vector<Expr> kids);
Expr mul(Expr a, Expr b);
Expr div(Expr a, Expr b);
Expr neg(Expr a);
Expr pow_int(Expr a, int k);
Expr fn(FnKind f, Expr a);

double evaluate(const Expr& e, std::span<const double> x);
// Exact symbolic partial; axis is 0-based.
Expr differentiate(const Expr& e, int axis);
std::string to_string(const Expr& e);
std::size_t node_count(const Expr& e);
int max_variable(const Expr& e);  // largest 0-based index used, -1 if none

const char* fn_name(FnKind f);

// Flat postfix program for hot loops. No exceptions: division by zero and
// log of a nonpositive argument produce inf/nan per IEEE and the caller
// screens with std::isfinite.
class CompiledExpr {
 public:
  CompiledExpr() = default;
  explicit CompiledExpr(const Expr& e);

  double eval(std::span<const double> x) const;
  bool empty() const { return ops_.empty(); }

 private:
  struct Op {
    ExprKind kind;
    FnKind fn;
    std::int32_t a, b;  // slot operands
    std::int32_t expo;
    double c;
  };
  int compile(const Expr& e);
  std::vector<Op> ops_;
  mutable std::vector<double> slots_;
};

}  // namespace hvf
