#include <doctest.h>

#include <stdexcept>

#include "test_support.hpp"
#include "treepoly/rational.hpp"

using namespace treepoly;

TEST_CASE("rationals print in lowest terms") {
  CHECK(to_string(Rational(6, 8)) == "3/4");
  CHECK(to_string(Rational(-6, 8)) == "-3/4");
  CHECK(to_string(Rational(4, 2)) == "2");
  CHECK(to_string(Rational(0)) == "0");
}

TEST_CASE("parse_rational accepts integers, fractions and decimals") {
  CHECK(parse_rational("7") == 7);
  CHECK(parse_rational("-7") == -7);
  CHECK(parse_rational(" 2/6 ") == Rational(1, 3));
  CHECK(parse_rational("-3/9") == Rational(-1, 3));
  CHECK(parse_rational("0.125") == Rational(1, 8));
  CHECK(parse_rational("-1.5") == Rational(-3, 2));
  CHECK(parse_rational(".5") == Rational(1, 2));
}

TEST_CASE("parse_rational rejects malformed text") {
  for (const char* bad : {"", "1/0", "abc", "1/", "/2", "1.2.3", "1/-2", "--1", "1e3", "1."}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_rational(bad), std::invalid_argument);
  }
}

TEST_CASE("to_string and parse_rational round-trip") {
  gen::Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const Rational r = gen::rational(rng, 97);
    CHECK(parse_rational(to_string(r)) == r);
  }
}

TEST_CASE("to_decimal rounds half away from zero") {
  CHECK(to_decimal(Rational(1, 3), 4) == "0.3333");
  CHECK(to_decimal(Rational(2, 3), 4) == "0.6667");
  CHECK(to_decimal(Rational(1, 8), 2) == "0.13");
  CHECK(to_decimal(Rational(-1, 8), 2) == "-0.13");
  CHECK(to_decimal(Rational(5, 2), 0) == "3");
  CHECK(to_decimal(Rational(0), 3) == "0.000");
}

TEST_CASE("combinatorial helpers") {
  CHECK(binomial(10, 3) == 120);
  CHECK(binomial(5, 7) == 0);
  CHECK(binomial(60, 30) == BigInt("118264581564861424"));
  CHECK(factorial(10) == 3628800);
  CHECK(pow2(70) == BigInt("1180591620717411303424"));
  CHECK(pow(Rational(2, 3), 3) == Rational(8, 27));
  // (2n-3)!! for n = 2..7
  const int expected[] = {1, 3, 15, 105, 945, 10395};
  for (int n = 2; n <= 7; ++n) CHECK(double_factorial_odd(n) == expected[n - 2]);
}
