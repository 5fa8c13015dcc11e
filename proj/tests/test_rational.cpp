#include <doctest.h>

#include <stdexcept>

#include "chronosat/rational.hpp"

using chronosat::Rational;

TEST_CASE("rational normalises sign and gcd") {
  Rational r(6, -8);
  CHECK(r.num() == -3);
  CHECK(r.den() == 4);
  CHECK(Rational(0, 5) == Rational(0));
}

TEST_CASE("rational parsing") {
  CHECK(Rational::parse("7") == Rational(7));
  CHECK(Rational::parse("-3/4") == Rational(-3, 4));
  CHECK(Rational::parse("0.125") == Rational(1, 8));
  CHECK(Rational::parse("-2.5") == Rational(-5, 2));
  CHECK_THROWS(Rational::parse("1e3"));
  CHECK_THROWS(Rational::parse("1/0"));
}

TEST_CASE("rational printing") {
  CHECK(Rational(12).decimal_str() == "12");
  CHECK(Rational(1, 8).decimal_str() == "0.125");
  CHECK(Rational(-1, 1000).decimal_str() == "-0.001");
  CHECK(Rational(1, 3).decimal_str() == "1/3");
  CHECK(Rational(7, 6).str() == "7/6");
}

TEST_CASE("rational arithmetic and order") {
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(1, 3) * Rational(3) == Rational(1));
  CHECK(Rational(1) / Rational(4) == Rational(1, 4));
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(-Rational(2) < Rational(0));
  CHECK(max(Rational(1), Rational(3, 2)) == Rational(3, 2));
}

TEST_CASE("rational overflow is detected") {
  Rational big(INT64_MAX);
  CHECK_THROWS_AS(big + Rational(1), std::overflow_error);
}
