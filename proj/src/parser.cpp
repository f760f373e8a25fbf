#include "parser.hpp"

#include <cctype>
#include <map>
#include <optional>
#include <utility>

namespace hvf {

namespace {

enum class Tok { Ident, Num, Semi, Eq, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else if (c == '\n') {
        ++pos_;
        ++line_;
        col_ = 1;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
        ++col_;
      } else {
        break;
      }
    }
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= src_.size()) {
      tok_ = {Tok::End, "", line_, col_};
      return;
    }
    char c = src_[pos_];
    auto single = [&](Tok k) {
      tok_ = {k, std::string(1, c), line_, col_};
      ++pos_;
      ++col_;
    };
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        ++pos_;
      tok_ = {Tok::Ident, src_.substr(start, pos_ - start), line_, col_};
      col_ += static_cast<int>(pos_ - start);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      if (pos_ < src_.size() && src_[pos_] == '.') {
        ++pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      }
      tok_ = {Tok::Num, src_.substr(start, pos_ - start), line_, col_};
      col_ += static_cast<int>(pos_ - start);
    } else {
      switch (c) {
        case ';': single(Tok::Semi); break;
        case '=': single(Tok::Eq); break;
        case '+': single(Tok::Plus); break;
        case '-': single(Tok::Minus); break;
        case '*': single(Tok::Star); break;
        case '/': single(Tok::Slash); break;
        case '^': single(Tok::Caret); break;
        case '(': single(Tok::LParen); break;
        case ')': single(Tok::RParen); break;
        default:
          throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
      }
    }
  }

  const std::string& src_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
};

// A field expression is linear in the direction symbols D1..Dn:
// scalar part + sum of coefficient * D_i.
struct VfValue {
  Expr scalar = constant(0);
  std::map<int, Expr> dirs;  // key: 0-based axis

  bool pure_scalar() const { return dirs.empty(); }
};

std::optional<FnKind> fn_by_name(const std::string& s) {
  if (s == "exp") return FnKind::Exp;
  if (s == "log") return FnKind::Log;
  if (s == "sin") return FnKind::Sin;
  if (s == "cos") return FnKind::Cos;
  return std::nullopt;
}

class Parser {
 public:
  Parser(const std::string& src, int n) : lex_(src), n_(n) {}

  VectorFieldSystem parse_system_body() {
    VectorFieldSystem sys;
    expect_keyword("dim");
    Token dim = expect(Tok::Num, "dimension");
    sys.n = parse_int(dim);
    if (sys.n < 2) throw ParseError("dimension must be at least 2", dim.line, dim.col);
    n_ = sys.n;
    expect(Tok::Semi, "';'");
    while (true) {
      if (lex_.peek().kind == Tok::Ident && lex_.peek().text == "step") {
        lex_.take();
        Token st = expect(Tok::Num, "step value");
        int s0 = parse_int(st);
        if (s0 < 1) throw ParseError("step must be positive", st.line, st.col);
        sys.s0_hint = s0;
        break;
      }
      Token name = expect(Tok::Ident, "field name");
      expect(Tok::Eq, "'='");
      VfValue v = parse_sum();
      if (!is_zero_const(v.scalar)) {
        throw ParseError("field '" + name.text + "' has a term without a direction symbol",
                         name.line, name.col);
      }
      VectorField f(static_cast<std::size_t>(n_), constant(0));
      for (auto& [axis, coeff] : v.dirs) f[axis] = coeff;
      sys.fields.push_back(std::move(f));
      sys.names.push_back(name.text);
      if (lex_.peek().kind != Tok::Semi) break;
      lex_.take();
      if (lex_.peek().kind == Tok::End) break;  // trailing ';'
    }
    if (lex_.peek().kind != Tok::End)
      throw ParseError("unexpected trailing input", lex_.peek().line, lex_.peek().col);
    if (sys.fields.empty())
      throw ParseError("system declares no vector fields", 1, 1);
    sys.m = static_cast<int>(sys.fields.size());
    return sys;
  }

  Expr parse_scalar_body() {
    VfValue v = parse_sum();
    if (!v.pure_scalar())
      throw ParseError("direction symbol not allowed in a scalar expression", 1, 1);
    if (lex_.peek().kind != Tok::End)
      throw ParseError("unexpected trailing input", lex_.peek().line, lex_.peek().col);
    return v.scalar;
  }

 private:
  static bool is_zero_const(const Expr& e) {
    return e->kind == ExprKind::Constant && e->value.is_zero();
  }

  int parse_int(const Token& t) {
    Rational r = Rational::parse(t.text);
    if (!r.is_integer()) throw ParseError("expected an integer", t.line, t.col);
    return static_cast<int>(r.num());
  }

  Token expect(Tok kind, const std::string& what) {
    if (lex_.peek().kind != kind)
      throw ParseError("expected " + what, lex_.peek().line, lex_.peek().col);
    return lex_.take();
  }

  void expect_keyword(const std::string& kw) {
    Token t = expect(Tok::Ident, "'" + kw + "'");
    if (t.text != kw) throw ParseError("expected '" + kw + "'", t.line, t.col);
  }

  VfValue parse_sum() {
    VfValue acc = parse_term();
    while (lex_.peek().kind == Tok::Plus || lex_.peek().kind == Tok::Minus) {
      bool minus = lex_.take().kind == Tok::Minus;
      VfValue rhs = parse_term();
      if (minus) scale(rhs, constant(-1));
      acc.scalar = add(acc.scalar, rhs.scalar);
      for (auto& [axis, coeff] : rhs.dirs) {
        auto it = acc.dirs.find(axis);
        if (it == acc.dirs.end())
          acc.dirs.emplace(axis, coeff);
        else
          it->second = add(it->second, coeff);
      }
    }
    return acc;
  }

  VfValue parse_term() {
    Token at = lex_.peek();
    VfValue acc = parse_factor();
    while (lex_.peek().kind == Tok::Star || lex_.peek().kind == Tok::Slash) {
      bool star = lex_.take().kind == Tok::Star;
      Token rt = lex_.peek();
      VfValue rhs = parse_factor();
      if (star) {
        if (!acc.pure_scalar() && !rhs.pure_scalar())
          throw ParseError("product of two direction symbols", rt.line, rt.col);
        if (acc.pure_scalar()) {
          Expr s = acc.scalar;
          acc = std::move(rhs);
          scale(acc, s);
        } else {
          scale(acc, rhs.scalar);
        }
      } else {
        if (!rhs.pure_scalar())
          throw ParseError("division by a direction symbol", rt.line, rt.col);
        acc.scalar = div(acc.scalar, rhs.scalar);
        for (auto& [axis, coeff] : acc.dirs) coeff = div(coeff, rhs.scalar);
      }
    }
    (void)at;
    return acc;
  }

  void scale(VfValue& v, const Expr& s) {
    v.scalar = mul(s, v.scalar);
    for (auto& [axis, coeff] : v.dirs) coeff = mul(s, coeff);
  }

  VfValue parse_factor() {
    VfValue v = parse_primary();
    while (lex_.peek().kind == Tok::Caret) {
      Token caret = lex_.take();
      int sign = 1;
      if (lex_.peek().kind == Tok::Minus) {
        lex_.take();
        sign = -1;
      }
      Token num = expect(Tok::Num, "integer exponent");
      int k = sign * parse_int(num);
      if (!v.pure_scalar())
        throw ParseError("direction symbol cannot be raised to a power", caret.line, caret.col);
      v.scalar = pow_int(v.scalar, k);
    }
    return v;
  }

  VfValue parse_primary() {
    Token t = lex_.peek();
    switch (t.kind) {
      case Tok::Minus: {
        lex_.take();
        VfValue v = parse_factor();
        scale(v, constant(-1));
        return v;
      }
      case Tok::Num: {
        lex_.take();
        VfValue v;
        v.scalar = constant(Rational::parse(t.text));
        return v;
      }
      case Tok::LParen: {
        lex_.take();
        VfValue v = parse_sum();
        expect(Tok::RParen, "')'");
        return v;
      }
      case Tok::Ident: {
        lex_.take();
        if (auto f = fn_by_name(t.text)) {
          Token lp = expect(Tok::LParen, "'(' after function name");
          (void)lp;
          VfValue arg = parse_sum();
          expect(Tok::RParen, "')'");
          if (!arg.pure_scalar())
            throw ParseError("direction symbol inside a function argument", t.line, t.col);
          VfValue v;
          v.scalar = fn(*f, arg.scalar);
          return v;
        }
        if ((t.text[0] == 'x' || t.text[0] == 'D') && t.text.size() > 1 &&
            std::isdigit(static_cast<unsigned char>(t.text[1]))) {
          int idx = 0;
          for (std::size_t i = 1; i < t.text.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(t.text[i])))
              throw ParseError("malformed index in '" + t.text + "'", t.line, t.col);
            idx = idx * 10 + (t.text[i] - '0');
          }
          if (idx < 1 || idx > n_)
            throw ParseError((t.text[0] == 'x' ? "variable" : "direction") +
                                 std::string(" index out of range in '") + t.text + "'",
                             t.line, t.col);
          VfValue v;
          if (t.text[0] == 'x') {
            v.scalar = variable(idx - 1);
          } else {
            v.dirs.emplace(idx - 1, constant(1));
          }
          return v;
        }
        throw ParseError("unknown function name or symbol '" + t.text + "'", t.line, t.col);
      }
      default:
        throw ParseError("expected a number, variable, direction or '('", t.line, t.col);
    }
  }

  Lexer lex_;
  int n_;
};

}  // namespace

VectorFieldSystem parse_system(const std::string& source) {
  Parser p(source, 0);
  return p.parse_system_body();
}

Expr parse_expression(const std::string& source, int n) {
  Parser p(source, n);
  return p.parse_scalar_body();
}

}  // namespace hvf
