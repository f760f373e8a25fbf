#include "expr.hpp"

#include <cmath>
#include <utility>

namespace hvf {

namespace {

Expr make(ExprNode n) { return std::make_shared<const ExprNode>(std::move(n)); }

bool is_const(const Expr& e) { return e->kind == ExprKind::Constant; }
bool is_const_zero(const Expr& e) { return is_const(e) && e->value.is_zero(); }
bool is_const_one(const Expr& e) { return is_const(e) && e->value.is_one(); }

double eval_pow(double base, int k) {
  if (k == 0) return 1.0;
  int m = k < 0 ? -k : k;
  if (m <= 32) {
    double acc = 1.0;
    for (int i = 0; i < m; ++i) acc *= base;
    return k < 0 ? 1.0 / acc : acc;
  }
  return std::pow(base, static_cast<double>(k));
}

int print_prec(const Expr& e) {
  switch (e->kind) {
    case ExprKind::Add: return 1;
    case ExprKind::Mul:
    case ExprKind::Div: return 2;
    case ExprKind::Pow: return 3;
    default: return 4;
  }
}

void print(const Expr& e, std::string& out);

void print_wrapped(const Expr& e, int min_prec, std::string& out) {
  bool paren = print_prec(e) < min_prec ||
               (is_const(e) && (e->value.num() < 0 || !e->value.is_integer()) && min_prec >= 2);
  if (paren) out += '(';
  print(e, out);
  if (paren) out += ')';
}

// Splits a leading -1 factor (or negative constant) so sums print with " - ".
bool negated_form(const Expr& e, Expr& positive) {
  if (is_const(e) && e->value < Rational(0)) {
    positive = constant(-e->value);
    return true;
  }
  if (e->kind == ExprKind::Mul && !e->kids.empty() && is_const(e->kids.front()) &&
      e->kids.front()->value < Rational(0)) {
    std::vector<Expr> kids = e->kids;
    Rational v = -kids.front()->value;
    if (v.is_one())
      kids.erase(kids.begin());
    else
      kids.front() = constant(v);
    positive = mul(std::move(kids));
    return true;
  }
  return false;
}

void print(const Expr& e, std::string& out) {
  switch (e->kind) {
    case ExprKind::Constant:
      out += e->value.str();
      return;
    case ExprKind::Variable:
      out += 'x';
      out += std::to_string(e->var + 1);
      return;
    case ExprKind::Add: {
      for (std::size_t i = 0; i < e->kids.size(); ++i) {
        Expr pos;
        if (i > 0 && negated_form(e->kids[i], pos)) {
          out += " - ";
          print_wrapped(pos, 2, out);
        } else {
          if (i > 0) out += " + ";
          print_wrapped(e->kids[i], 2, out);
        }
      }
      return;
    }
    case ExprKind::Mul: {
      for (std::size_t i = 0; i < e->kids.size(); ++i) {
        if (i > 0) out += '*';
        print_wrapped(e->kids[i], i == 0 ? 2 : 3, out);
      }
      return;
    }
    case ExprKind::Div: {
      print_wrapped(e->kids[0], 2, out);
      out += '/';
      print_wrapped(e->kids[1], 3, out);
      return;
    }
    case ExprKind::Pow: {
      print_wrapped(e->kids[0], 4, out);
      out += '^';
      out += std::to_string(e->expo);
      return;
    }
    case ExprKind::Fn: {
      out += fn_name(e->fn);
      out += '(';
      print(e->kids[0], out);
      out += ')';
      return;
    }
  }
}

}  // namespace

const char* fn_name(FnKind f) {
  switch (f) {
    case FnKind::Exp: return "exp";
    case FnKind::Log: return "log";
    case FnKind::Sin: return "sin";
    case FnKind::Cos: return "cos";
  }
  return "?";
}

Expr constant(Rational v) {
  ExprNode n;
  n.kind = ExprKind::Constant;
  n.value = v;
  return make(std::move(n));
}

Expr constant(std::int64_t v) { return constant(Rational(v)); }

Expr variable(int var0) {
  if (var0 < 0) throw std::invalid_argument("variable index must be nonnegative");
  ExprNode n;
  n.kind = ExprKind::Variable;
  n.var = var0;
  return make(std::move(n));
}

Expr add(std::vector<Expr> kids) {
  std::vector<Expr> flat;
  flat.reserve(kids.size());
  for (auto& k : kids) {
    if (k->kind == ExprKind::Add)
      flat.insert(flat.end(), k->kids.begin(), k->kids.end());
    else
      flat.push_back(std::move(k));
  }
  std::vector<Expr> out;
  out.reserve(flat.size());
  int const_at = -1;
  Rational csum(0);
  bool fold_ok = true;
  for (auto& k : flat) {
    if (is_const(k) && fold_ok) {
      try {
        csum = csum + k->value;
        if (const_at < 0) {
          const_at = static_cast<int>(out.size());
          out.push_back(k);
        }
        continue;
      } catch (const RationalOverflow&) {
        fold_ok = false;
      }
    }
    out.push_back(std::move(k));
  }
  if (const_at >= 0) {
    if (csum.is_zero() && out.size() > 1)
      out.erase(out.begin() + const_at);
    else
      out[const_at] = constant(csum);
  }
  if (out.empty()) return constant(0);
  if (out.size() == 1) return out.front();
  ExprNode n;
  n.kind = ExprKind::Add;
  n.kids = std::move(out);
  return make(std::move(n));
}

Expr add(Expr a, Expr b) { return add(std::vector<Expr>{std::move(a), std::move(b)}); }

Expr sub(Expr a, Expr b) { return add(std::move(a), neg(std::move(b))); }

Expr mul(std::vector<Expr> kids) {
  std::vector<Expr> flat;
  flat.reserve(kids.size());
  for (auto& k : kids) {
    if (k->kind == ExprKind::Mul)
      flat.insert(flat.end(), k->kids.begin(), k->kids.end());
    else
      flat.push_back(std::move(k));
  }
  std::vector<Expr> out;
  out.reserve(flat.size());
  int const_at = -1;
  Rational cprod(1);
  bool fold_ok = true;
  for (auto& k : flat) {
    if (is_const_zero(k)) return constant(0);
    if (is_const(k) && fold_ok) {
      try {
        cprod = cprod * k->value;
        if (const_at < 0) {
          const_at = static_cast<int>(out.size());
          out.push_back(k);
        }
        continue;
      } catch (const RationalOverflow&) {
        fold_ok = false;
      }
    }
    out.push_back(std::move(k));
  }
  if (const_at >= 0) {
    if (cprod.is_one() && out.size() > 1)
      out.erase(out.begin() + const_at);
    else
      out[const_at] = constant(cprod);
  }
  if (out.empty()) return constant(1);
  if (out.size() == 1) return out.front();
  ExprNode n;
  n.kind = ExprKind::Mul;
  n.kids = std::move(out);
  return make(std::move(n));
}

Expr mul(Expr a, Expr b) { return mul(std::vector<Expr>{std::move(a), std::move(b)}); }

Expr neg(Expr a) { return mul(constant(-1), std::move(a)); }

Expr div(Expr a, Expr b) {
  if (is_const_one(b)) return a;
  if (is_const(a) && is_const(b) && !b->value.is_zero()) {
    try {
      return constant(a->value / b->value);
    } catch (const RationalOverflow&) {
    }
  }
  ExprNode n;
  n.kind = ExprKind::Div;
  n.kids = {std::move(a), std::move(b)};
  return make(std::move(n));
}

Expr pow_int(Expr a, int k) {
  if (k == 0) return constant(1);
  if (k == 1) return a;
  if (is_const(a)) {
    if (a->value.is_zero() && k < 0) throw std::domain_error("0 raised to a negative power");
    try {
      return constant(a->value.pow(k));
    } catch (const RationalOverflow&) {
    }
  }
  ExprNode n;
  n.kind = ExprKind::Pow;
  n.expo = k;
  n.kids = {std::move(a)};
  return make(std::move(n));
}

Expr fn(FnKind f, Expr a) {
  ExprNode n;
  n.kind = ExprKind::Fn;
  n.fn = f;
  n.kids = {std::move(a)};
  return make(std::move(n));
}

double evaluate(const Expr& e, std::span<const double> x) {
  switch (e->kind) {
    case ExprKind::Constant:
      return e->value.to_double();
    case ExprKind::Variable:
      if (e->var >= static_cast<int>(x.size()))
        throw EvalError("point has too few coordinates", to_string(e));
      return x[e->var];
    case ExprKind::Add: {
      double acc = 0.0;
      for (const auto& k : e->kids) acc += evaluate(k, x);
      return acc;
    }
    case ExprKind::Mul: {
      double acc = 1.0;
      for (const auto& k : e->kids) acc *= evaluate(k, x);
      return acc;
    }
    case ExprKind::Div: {
      double num = evaluate(e->kids[0], x);
      double den = evaluate(e->kids[1], x);
      if (den == 0.0) throw EvalError("division by zero", to_string(e));
      return num / den;
    }
    case ExprKind::Pow: {
      double base = evaluate(e->kids[0], x);
      if (base == 0.0 && e->expo < 0) throw EvalError("division by zero", to_string(e));
      return eval_pow(base, e->expo);
    }
    case ExprKind::Fn: {
      double a = evaluate(e->kids[0], x);
      switch (e->fn) {
        case FnKind::Exp: return std::exp(a);
        case FnKind::Log:
          if (a <= 0.0) throw EvalError("log of a nonpositive argument", to_string(e));
          return std::log(a);
        case FnKind::Sin: return std::sin(a);
        case FnKind::Cos: return std::cos(a);
      }
    }
  }
  throw std::logic_error("unreachable expression kind");
}

Expr differentiate(const Expr& e, int axis) {
  if (axis < 0) throw std::invalid_argument("axis out of range");
  switch (e->kind) {
    case ExprKind::Constant:
      return constant(0);
    case ExprKind::Variable:
      return constant(e->var == axis ? 1 : 0);
    case ExprKind::Add: {
      std::vector<Expr> kids;
      kids.reserve(e->kids.size());
      for (const auto& k : e->kids) kids.push_back(differentiate(k, axis));
      return add(std::move(kids));
    }
    case ExprKind::Mul: {
      std::vector<Expr> terms;
      terms.reserve(e->kids.size());
      for (std::size_t i = 0; i < e->kids.size(); ++i) {
        std::vector<Expr> factors = e->kids;
        factors[i] = differentiate(e->kids[i], axis);
        terms.push_back(mul(std::move(factors)));
      }
      return add(std::move(terms));
    }
    case ExprKind::Div: {
      const Expr& a = e->kids[0];
      const Expr& b = e->kids[1];
      Expr num = sub(mul(differentiate(a, axis), b), mul(a, differentiate(b, axis)));
      return div(std::move(num), pow_int(b, 2));
    }
    case ExprKind::Pow: {
      const Expr& a = e->kids[0];
      return mul({constant(e->expo), pow_int(a, e->expo - 1), differentiate(a, axis)});
    }
    case ExprKind::Fn: {
      const Expr& a = e->kids[0];
      Expr da = differentiate(a, axis);
      switch (e->fn) {
        case FnKind::Exp: return mul(fn(FnKind::Exp, a), std::move(da));
        case FnKind::Log: return div(std::move(da), a);
        case FnKind::Sin: return mul(fn(FnKind::Cos, a), std::move(da));
        case FnKind::Cos: return neg(mul(fn(FnKind::Sin, a), std::move(da)));
      }
    }
  }
  throw std::logic_error("unreachable expression kind");
}

std::string to_string(const Expr& e) {
  std::string out;
  print(e, out);
  return out;
}

std::size_t node_count(const Expr& e) {
  std::size_t n = 1;
  for (const auto& k : e->kids) n += node_count(k);
  return n;
}

int max_variable(const Expr& e) {
  int m = e->kind == ExprKind::Variable ? e->var : -1;
  for (const auto& k : e->kids) m = std::max(m, max_variable(k));
  return m;
}

CompiledExpr::CompiledExpr(const Expr& e) {
  compile(e);
  slots_.resize(ops_.size());
}

int CompiledExpr::compile(const Expr& e) {
  auto emit = [&](Op op) {
    ops_.push_back(op);
    return static_cast<int>(ops_.size()) - 1;
  };
  switch (e->kind) {
    case ExprKind::Constant:
      return emit({ExprKind::Constant, FnKind::Exp, 0, 0, 0, e->value.to_double()});
    case ExprKind::Variable:
      return emit({ExprKind::Variable, FnKind::Exp, e->var, 0, 0, 0.0});
    case ExprKind::Add:
    case ExprKind::Mul: {
      int acc = compile(e->kids[0]);
      for (std::size_t i = 1; i < e->kids.size(); ++i) {
        int rhs = compile(e->kids[i]);
        acc = emit({e->kind, FnKind::Exp, acc, rhs, 0, 0.0});
      }
      return acc;
    }
    case ExprKind::Div: {
      int a = compile(e->kids[0]);
      int b = compile(e->kids[1]);
      return emit({ExprKind::Div, FnKind::Exp, a, b, 0, 0.0});
    }
    case ExprKind::Pow: {
      int a = compile(e->kids[0]);
      return emit({ExprKind::Pow, FnKind::Exp, a, 0, e->expo, 0.0});
    }
    case ExprKind::Fn: {
      int a = compile(e->kids[0]);
      return emit({ExprKind::Fn, e->fn, a, 0, 0, 0.0});
    }
  }
  throw std::logic_error("unreachable expression kind");
}

double CompiledExpr::eval(std::span<const double> x) const {
  double* s = slots_.data();
  for (std::size_t i = 0; i < ops_.size(); ++i) {
    const Op& op = ops_[i];
    switch (op.kind) {
      case ExprKind::Constant: s[i] = op.c; break;
      case ExprKind::Variable: s[i] = x[op.a]; break;
      case ExprKind::Add: s[i] = s[op.a] + s[op.b]; break;
      case ExprKind::Mul: s[i] = s[op.a] * s[op.b]; break;
      case ExprKind::Div: s[i] = s[op.a] / s[op.b]; break;
      case ExprKind::Pow: s[i] = eval_pow(s[op.a], op.expo); break;
      case ExprKind::Fn:
        switch (op.fn) {
          case FnKind::Exp: s[i] = std::exp(s[op.a]); break;
          case FnKind::Log: s[i] = std::log(s[op.a]); break;
          case FnKind::Sin: s[i] = std::sin(s[op.a]); break;
          case FnKind::Cos: s[i] = std::cos(s[op.a]); break;
        }
        break;
    }
  }
  return slots_.back();
}

}  // namespace hvf
