#include <doctest.h>

#include <cmath>

#include "../support.hpp"
#include "pforge/errors.hpp"
#include "pforge/rational.hpp"

using pforge::Rational;

TEST_CASE("rational normalizes and parses") {
  CHECK(Rational(6, -4) == Rational(-3, 2));
  CHECK(Rational::parse("1/3") == Rational(1, 3));
  CHECK(Rational::parse("-0.015625") == Rational(-1, 64));
  CHECK(Rational::parse("1e-3") == Rational(1, 1000));
  CHECK(Rational::parse("2.5e1") == Rational(25));
  CHECK_THROWS_AS(Rational::parse("1/0"), pforge::DomainError);
  CHECK_THROWS_AS(Rational::parse("abc"), pforge::DomainError);
}

TEST_CASE("rational floor, ceil and frac") {
  CHECK(Rational(-7, 2).floor() == -4);
  CHECK(Rational(-7, 2).ceil() == -3);
  CHECK(Rational(7, 2).frac() == Rational(1, 2));
  CHECK(Rational(-7, 2).frac() == Rational(1, 2));
  CHECK(Rational(4).frac() == Rational(0));
}

TEST_CASE("from_double is exact") {
  CHECK(Rational::from_double(0.75) == Rational(3, 4));
  CHECK(Rational::from_double(-2.0) == Rational(-2));
  Rational e = Rational::from_double(std::exp(1.0));
  CHECK(e.to_double() == std::exp(1.0));
  CHECK(e.den() == (pforge::i128{1} << 51));
}

TEST_CASE("comparison agrees with cross multiplication on small values") {
  testsupport::Gen g(7);
  for (int i = 0; i < 20000; ++i) {
    std::int64_t a = g.range(-1000, 1000), b = g.range(1, 1000), c = g.range(-1000, 1000), d = g.range(1, 1000);
    Rational x(a, b), y(c, d);
    int expect = (a * d > c * b) - (a * d < c * b);
    CHECK(compare(x, y) == expect);
  }
}

TEST_CASE("comparison near the 128-bit limit does not overflow") {
  pforge::i128 big = (pforge::i128{1} << 120) - 1;
  Rational x(big, big - 2), y(big - 1, big - 3);
  CHECK(x < y);
  CHECK(y > x);
}

TEST_CASE("arithmetic identities on random rationals") {
  testsupport::Gen g(11);
  for (int i = 0; i < 5000; ++i) {
    Rational x(g.range(-500, 500), g.range(1, 300)), y(g.range(-500, 500), g.range(1, 300));
    CHECK((x + y) - y == x);
    if (y.sign() != 0) CHECK((x * y) / y == x);
    CHECK(x.floor() + x.frac() == x);
  }
}

TEST_CASE("overflow is reported") {
  Rational big((pforge::i128{1} << 125), 1);
  CHECK_THROWS_AS(big * big, pforge::DomainError);
}
