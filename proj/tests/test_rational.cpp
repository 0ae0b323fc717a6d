#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "densitylab/rational.hpp"

using namespace densitylab;

TEST_CASE("normalization and arithmetic") {
  CHECK(Rational(6, 4) == Rational(3, 2));
  CHECK(Rational(-6, 4) == Rational(-3, 2));
  CHECK(Rational(6, -4) == Rational(-3, 2));
  CHECK(Rational(0, 7) == Rational(0));
  CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
  CHECK(Rational(1, 2) * Rational(2, 3) == Rational(1, 3));
  CHECK(Rational(7, 2) - Rational(3) == Rational(1, 2));
  CHECK(Rational(1, 2) / Rational(1, 4) == Rational(2));
  CHECK_THROWS_AS(Rational(1, 0), Error);
  CHECK_THROWS_AS(Rational(1) / Rational(0), Error);
}

TEST_CASE("ordering uses exact cross products") {
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(-1, 2) < Rational(1, 1000000));
  // Values that overflow int64 if multiplied naively.
  const Rational a(3037000499LL, 3037000500LL);
  const Rational b(3037000498LL, 3037000499LL);
  CHECK(b < a);
}

TEST_CASE("floor and ceil") {
  CHECK(Rational(7, 2).floor() == 3);
  CHECK(Rational(7, 2).ceil() == 4);
  CHECK(Rational(-7, 2).floor() == -4);
  CHECK(Rational(-7, 2).ceil() == -3);
  CHECK(Rational(6).floor() == 6);
  CHECK(Rational(6).ceil() == 6);
}

TEST_CASE("parse_rational") {
  CHECK(parse_rational("3/2") == Rational(3, 2));
  CHECK(parse_rational("-7/14") == Rational(-1, 2));
  CHECK(parse_rational("42") == Rational(42));
  CHECK(parse_rational("1.25") == Rational(5, 4));
  CHECK(parse_rational("0.5") == Rational(1, 2));
  CHECK(parse_rational(" 2 / 3 ") == Rational(2, 3));
  CHECK_THROWS_AS(parse_rational("abc"), Error);
  CHECK_THROWS_AS(parse_rational(""), Error);
}

TEST_CASE("extended values") {
  const ExtRational inf = ExtRational::inf();
  CHECK(inf > ExtRational(Rational(1'000'000)));
  CHECK(ExtRational(Rational(0)).is_zero());
  CHECK((inf + ExtRational(Rational(1))).is_inf());
  CHECK((inf * ExtRational(Rational(0))).is_zero());
  CHECK((inf * ExtRational(Rational(2))).is_inf());
  CHECK(inf.str() == "inf");
}

TEST_CASE("field axioms on random samples") {
  std::mt19937_64 rng(11);
  auto rnd = [&] {
    return Rational(static_cast<std::int64_t>(rng() % 2001) - 1000,
                    static_cast<std::int64_t>(rng() % 999) + 1);
  };
  for (int i = 0; i < 2000; ++i) {
    const Rational a = rnd(), b = rnd(), c = rnd();
    CHECK(a + b == b + a);
    CHECK((a + b) + c == a + (b + c));
    CHECK(a * (b + c) == a * b + a * c);
    if (!b.is_zero()) CHECK(a / b * b == a);
  }
}
