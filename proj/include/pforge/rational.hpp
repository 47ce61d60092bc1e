#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace pforge {

using i128 = __int128;

/// Exact rational with 128-bit numerator and denominator. Every operation
/// checks for overflow and throws DomainError instead of wrapping.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT(implicit)
  Rational(i128 n, i128 d);

  /// Exact value of a finite double (a dyadic rational).
  static Rational from_double(double x);
  /// Parses "p/q", an integer, or a decimal such as "-0.015625" or "1e-3".
  static Rational parse(std::string_view s);

  i128 num() const { return num_; }
  i128 den() const { return den_; }

  double to_double() const;
  i128 floor() const;
  i128 ceil() const;
  Rational frac() const;
  bool is_integer() const { return den_ == 1; }
  int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }

  std::string str() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational operator-() const { return Rational(-num_, den_); }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend int compare(const Rational& a, const Rational& b);
  friend bool operator<(const Rational& a, const Rational& b) { return compare(a, b) < 0; }
  friend bool operator<=(const Rational& a, const Rational& b) { return compare(a, b) <= 0; }
  friend bool operator>(const Rational& a, const Rational& b) { return compare(a, b) > 0; }
  friend bool operator>=(const Rational& a, const Rational& b) { return compare(a, b) >= 0; }

 private:
  i128 num_ = 0;
  i128 den_ = 1;
};

i128 floor_div(i128 a, i128 b);
i128 checked_mul(i128 a, i128 b);
i128 checked_add(i128 a, i128 b);
std::string to_string(i128 v);

}  // namespace pforge
