#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hvf {

struct RationalOverflow : std::runtime_error {
  RationalOverflow() : std::runtime_error("rational overflow") {}
};

// Exact rational on int64 with normalized sign (den > 0) and gcd-reduced terms.
// Arithmetic goes through __int128 and throws RationalOverflow instead of wrapping.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(std::int64_t n) : num_(n), den_(1) {}
  Rational(std::int64_t n, std::int64_t d);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_one() const { return num_ == 1 && den_ == 1; }
  bool is_integer() const { return den_ == 1; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  Rational operator-() const;
  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;

  bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const Rational& o) const { return !(*this == o); }
  bool operator<(const Rational& o) const;
  bool operator<=(const Rational& o) const { return *this < o || *this == o; }
  bool operator>(const Rational& o) const { return o < *this; }
  bool operator>=(const Rational& o) const { return o <= *this; }

  Rational pow(int e) const;
  std::string str() const;

  // Parses "7", "-3/4" or "1.25" (decimal becomes an exact rational).
  static Rational parse(const std::string& text);

 private:
  static Rational from128(__int128 n, __int128 d);
  std::int64_t num_;
  std::int64_t den_;
};

}  // namespace hvf
