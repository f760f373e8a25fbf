#include "rational.hpp"

#include <cctype>
#include <cstdlib>
#include <numeric>

namespace hvf {

namespace {

std::int64_t checked_cast(__int128 v) {
  if (v > INT64_MAX || v < INT64_MIN) throw RationalOverflow();
  return static_cast<std::int64_t>(v);
}

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

Rational Rational::from128(__int128 n, __int128 d) {
  if (d == 0) throw std::domain_error("rational with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  __int128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  Rational r;
  r.num_ = checked_cast(n);
  r.den_ = checked_cast(d);
  return r;
}

Rational::Rational(std::int64_t n, std::int64_t d) {
  *this = from128(n, d);
}

Rational Rational::operator-() const { return from128(-static_cast<__int128>(num_), den_); }

Rational Rational::operator+(const Rational& o) const {
  return from128(static_cast<__int128>(num_) * o.den_ + static_cast<__int128>(o.num_) * den_,
                 static_cast<__int128>(den_) * o.den_);
}

Rational Rational::operator-(const Rational& o) const { return *this + (-o); }

Rational Rational::operator*(const Rational& o) const {
  return from128(static_cast<__int128>(num_) * o.num_, static_cast<__int128>(den_) * o.den_);
}

Rational Rational::operator/(const Rational& o) const {
  if (o.num_ == 0) throw std::domain_error("rational division by zero");
  return from128(static_cast<__int128>(num_) * o.den_, static_cast<__int128>(den_) * o.num_);
}

bool Rational::operator<(const Rational& o) const {
  return static_cast<__int128>(num_) * o.den_ < static_cast<__int128>(o.num_) * den_;
}

Rational Rational::pow(int e) const {
  if (e == 0) return Rational(1);
  Rational base = e > 0 ? *this : Rational(1) / *this;
  int k = e > 0 ? e : -e;
  Rational acc(1);
  for (int i = 0; i < k; ++i) acc = acc * base;
  return acc;
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(const std::string& text) {
  std::string s = text;
  bool neg = false;
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
    neg = s[i] == '-';
    ++i;
  }
  auto bad = [&]() { throw std::invalid_argument("not a rational literal: " + text); };
  if (i >= s.size()) bad();
  __int128 num = 0, den = 1;
  bool saw_digit = false;
  for (; i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])); ++i) {
    num = num * 10 + (s[i] - '0');
    if (num > INT64_MAX) throw RationalOverflow();
    saw_digit = true;
  }
  if (i < s.size() && s[i] == '.') {
    ++i;
    for (; i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])); ++i) {
      num = num * 10 + (s[i] - '0');
      den *= 10;
      if (num > INT64_MAX || den > INT64_MAX) throw RationalOverflow();
      saw_digit = true;
    }
  } else if (i < s.size() && s[i] == '/') {
    ++i;
    __int128 d = 0;
    bool saw_den = false;
    for (; i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])); ++i) {
      d = d * 10 + (s[i] - '0');
      if (d > INT64_MAX) throw RationalOverflow();
      saw_den = true;
    }
    if (!saw_den || d == 0) bad();
    den = d;
  }
  if (!saw_digit || i != s.size()) bad();
  if (neg) num = -num;
  return from128(num, den);
}

}  // namespace hvf
