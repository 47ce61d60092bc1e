#include "pforge/rational.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "pforge/errors.hpp"

namespace pforge {

namespace {

i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    i128 r = a % b;
    a = b;
    b = r;
  }
  return a;
}

[[noreturn]] void overflow() { throw DomainError("rational arithmetic overflow"); }

// Sign of a/b - c/d for positive b, d without forming cross products.
int compare_fractions(i128 a, i128 b, i128 c, i128 d) {
  for (;;) {
    i128 qa = floor_div(a, b);
    i128 qc = floor_div(c, d);
    if (qa != qc) return qa < qc ? -1 : 1;
    i128 ra = a - qa * b;
    i128 rc = c - qc * d;
    if (ra == 0 || rc == 0) {
      if (ra == 0 && rc == 0) return 0;
      return ra == 0 ? -1 : 1;
    }
    // compare ra/b with rc/d  <=>  compare d/rc with b/ra, reversed
    i128 na = d, nb = rc, nc = b, nd = ra;
    a = na;
    b = nb;
    c = nc;
    d = nd;
  }
}

}  // namespace

i128 floor_div(i128 a, i128 b) {
  if (b == 0) throw DomainError("division by zero");
  i128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

i128 checked_mul(i128 a, i128 b) {
  i128 r;
  if (__builtin_mul_overflow(a, b, &r)) overflow();
  return r;
}

i128 checked_add(i128 a, i128 b) {
  i128 r;
  if (__builtin_add_overflow(a, b, &r)) overflow();
  return r;
}

std::string to_string(i128 v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  std::string s;
  while (v != 0) {
    int d = static_cast<int>(v % 10);
    s.push_back(static_cast<char>('0' + (d < 0 ? -d : d)));
    v /= 10;
  }
  if (neg) s.push_back('-');
  std::reverse(s.begin(), s.end());
  return s;
}

Rational::Rational(i128 n, i128 d) {
  if (d == 0) throw DomainError("rational with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  i128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  num_ = n;
  den_ = d;
}

Rational Rational::from_double(double x) {
  if (!std::isfinite(x)) throw DomainError("non-finite value has no exact rational form");
  if (x == 0.0) return Rational();
  int e = 0;
  double m = std::frexp(x, &e);
  auto mant = static_cast<std::int64_t>(std::ldexp(m, 53));
  e -= 53;
  while (e < 0 && (mant & 1) == 0) {
    mant >>= 1;
    ++e;
  }
  if (e >= 0) {
    if (e > 62) overflow();
    return Rational(checked_mul(mant, static_cast<i128>(1) << e), 1);
  }
  if (-e > 120) throw DomainError("double too small for an exact 128-bit rational");
  return Rational(mant, static_cast<i128>(1) << (-e));
}

Rational Rational::parse(std::string_view s) {
  auto trim = [](std::string_view v) {
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.front()))) v.remove_prefix(1);
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back()))) v.remove_suffix(1);
    return v;
  };
  s = trim(s);
  if (s.empty()) throw DomainError("empty rational literal");
  auto slash = s.find('/');
  if (slash != std::string_view::npos) {
    Rational p = parse(s.substr(0, slash));
    Rational q = parse(s.substr(slash + 1));
    return p / q;
  }
  bool neg = false;
  std::size_t i = 0;
  if (s[i] == '+' || s[i] == '-') {
    neg = s[i] == '-';
    ++i;
  }
  i128 num = 0;
  i128 den = 1;
  bool digits = false;
  bool point = false;
  for (; i < s.size(); ++i) {
    char ch = s[i];
    if (ch == '.' && !point) {
      point = true;
      continue;
    }
    if (ch == 'e' || ch == 'E') break;
    if (!std::isdigit(static_cast<unsigned char>(ch)))
      throw DomainError("malformed rational literal '" + std::string(s) + "'");
    digits = true;
    num = checked_add(checked_mul(num, 10), ch - '0');
    if (point) den = checked_mul(den, 10);
  }
  if (!digits) throw DomainError("malformed rational literal '" + std::string(s) + "'");
  if (i < s.size()) {
    std::string_view ex = s.substr(i + 1);
    if (ex.empty()) throw DomainError("malformed exponent in '" + std::string(s) + "'");
    bool eneg = false;
    std::size_t k = 0;
    if (ex[0] == '+' || ex[0] == '-') {
      eneg = ex[0] == '-';
      k = 1;
    }
    int ev = 0;
    if (k >= ex.size()) throw DomainError("malformed exponent in '" + std::string(s) + "'");
    for (; k < ex.size(); ++k) {
      if (!std::isdigit(static_cast<unsigned char>(ex[k])))
        throw DomainError("malformed exponent in '" + std::string(s) + "'");
      ev = ev * 10 + (ex[k] - '0');
      if (ev > 36) overflow();
    }
    for (int r = 0; r < ev; ++r) {
      if (eneg)
        den = checked_mul(den, 10);
      else
        num = checked_mul(num, 10);
    }
  }
  return Rational(neg ? -num : num, den);
}

double Rational::to_double() const {
  return static_cast<double>(static_cast<long double>(num_) / static_cast<long double>(den_));
}

i128 Rational::floor() const { return floor_div(num_, den_); }

i128 Rational::ceil() const { return -floor_div(-num_, den_); }

Rational Rational::frac() const { return Rational(num_ - floor() * den_, den_); }

std::string Rational::str() const {
  if (den_ == 1) return to_string(num_);
  return to_string(num_) + "/" + to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
  i128 g = gcd128(a.den_, b.den_);
  i128 bd = b.den_ / g;
  i128 n = checked_add(checked_mul(a.num_, bd), checked_mul(b.num_, a.den_ / g));
  return Rational(n, checked_mul(a.den_, bd));
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  i128 g1 = gcd128(a.num_, b.den_);
  i128 g2 = gcd128(b.num_, a.den_);
  if (g1 == 0) g1 = 1;
  if (g2 == 0) g2 = 1;
  return Rational(checked_mul(a.num_ / g1, b.num_ / g2), checked_mul(a.den_ / g2, b.den_ / g1));
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw DomainError("division by zero");
  return a * Rational(b.den_, b.num_);
}

int compare(const Rational& a, const Rational& b) {
  return compare_fractions(a.num_, a.den_, b.num_, b.den_);
}

}  // namespace pforge
