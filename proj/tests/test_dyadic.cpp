#include <doctest.h>

#include "dtsr/bigint.hpp"
#include "dtsr/dyadic.hpp"
#include "dtsr/errors.hpp"
#include "dtsr/rng.hpp"

using namespace dtsr;

TEST_CASE("dyadic canonical form") {
  CHECK(Dyadic(4, 3) == Dyadic(1, 1));
  CHECK(Dyadic(6, 1) == Dyadic(3, 0));
  CHECK(Dyadic(0, 7).exponent() == 0);
  CHECK(Dyadic(0, 7).is_zero());
  CHECK(Dyadic(8, 3).is_one());
  CHECK_THROWS_AS(Dyadic(BigInt(-1), 0), DomainError);
}

TEST_CASE("dyadic arithmetic") {
  const Dyadic q(1, 2);  // 1/4
  CHECK(q + q == Dyadic(1, 1));
  CHECK(Dyadic::average(Dyadic(1, 1), q) == Dyadic(3, 3));
  CHECK(Dyadic(3, 2) * Dyadic(1, 1) == Dyadic(3, 3));
  CHECK(Dyadic(5, 3).complement() == Dyadic(3, 3));
  CHECK(Dyadic(7, 3) - Dyadic(1, 3) == Dyadic(3, 2));
  CHECK_THROWS_AS(Dyadic(1, 3) - Dyadic(1, 1), DomainError);
  CHECK_THROWS_AS(Dyadic(9, 3).complement(), DomainError);
}

TEST_CASE("dyadic comparisons against exact rationals") {
  const Dyadic seven_eighths(7, 3);
  CHECK(seven_eighths.compare(parse_rational("7/8")) == 0);
  CHECK(seven_eighths.compare(parse_rational("0.875")) == 0);
  CHECK(seven_eighths.compare(BigRational(111, 128)) > 0);
  CHECK(Dyadic(1, 4).compare(BigRational(1, 16)) == 0);
  CHECK(Dyadic(1, 4).compare(BigRational(3, 32)) < 0);
}

TEST_CASE("dyadic strings") {
  CHECK(Dyadic(3, 2).to_string() == "3/2^2");
  CHECK(Dyadic(3, 2).to_decimal_string() == "0.75");
  CHECK(Dyadic(7, 3).to_decimal_string() == "0.875");
  CHECK(Dyadic(1, 0).to_string() == "1");
  CHECK(Dyadic(1, 10).to_decimal_string() == "0.0009765625");
  CHECK(Dyadic::zero().to_decimal_string() == "0");
}

TEST_CASE("parse_rational forms and failures") {
  CHECK(parse_rational("7/8") == BigRational(7, 8));
  CHECK(parse_rational("0.875") == BigRational(7, 8));
  CHECK(parse_rational("1") == BigRational(1));
  CHECK(parse_rational(".5") == BigRational(1, 2));
  CHECK(format_rational(BigRational(45, 91)) == "45/91");
  CHECK_THROWS_AS(parse_rational("7/0"), ParseError);
  CHECK_THROWS_AS(parse_rational("abc"), ParseError);
  CHECK_THROWS_AS(parse_rational("1.2.3"), ParseError);
  CHECK_THROWS_AS(parse_rational("-1/2"), ParseError);
}

TEST_CASE("ceil_rational") {
  CHECK(ceil_rational(BigRational(7, 2)) == 4);
  CHECK(ceil_rational(BigRational(4, 2)) == 2);
  CHECK(ceil_rational(BigRational(1, 128)) == 1);
}

TEST_CASE("binomial") {
  CHECK(binomial(5, 2) == 10);
  CHECK(binomial(0, 0) == 1);
  CHECK(binomial(4, 7) == 0);
  CHECK(binomial(20, 10) == 184756);
}

TEST_CASE("dyadic operations agree with rational arithmetic") {
  SeededRng rng(41);
  for (int i = 0; i < 200; ++i) {
    const Dyadic a(BigInt(rng.below(1 << 12)), rng.below(12));
    const Dyadic b(BigInt(rng.below(1 << 12)), rng.below(12));
    CHECK((a + b).to_rational() == a.to_rational() + b.to_rational());
    CHECK((a * b).to_rational() == a.to_rational() * b.to_rational());
    CHECK(a.compare(b) == (a.to_rational() < b.to_rational()
                               ? -1
                               : (a.to_rational() == b.to_rational() ? 0 : 1)));
    CHECK(Dyadic::average(a, b).to_rational() ==
          (a.to_rational() + b.to_rational()) / 2);
  }
}
