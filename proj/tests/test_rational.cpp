#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <stdexcept>

#include "avmod/rational.hpp"

using namespace avmod;

TEST_CASE("construction and canonical form") {
    CHECK(Rational(6, 4) == Rational(3, 2));
    CHECK(Rational(-6, 4) == Rational(-3, 2));
    CHECK(Rational(6, -4) == Rational(-3, 2));  // sign moves to the numerator
    CHECK(Rational(0, 7) == Rational(0));
    CHECK(Rational(5).is_integer());
    CHECK(!Rational(1, 3).is_integer());
    CHECK(Rational(0).is_zero());
    CHECK(Rational(1).is_one());
    CHECK(Rational(2, 2).is_one());
    CHECK_THROWS_AS(Rational(1, 0), std::invalid_argument);
}

TEST_CASE("parse") {
    CHECK(Rational::parse("7") == Rational(7));
    CHECK(Rational::parse("-7") == Rational(-7));
    CHECK(Rational::parse("3/9") == Rational(1, 3));
    CHECK(Rational::parse("-10/4") == Rational(-5, 2));
    CHECK(Rational::parse("123456789012345678901234567890").den() == 1);
    CHECK_THROWS_AS(Rational::parse("x"), std::invalid_argument);
    CHECK_THROWS_AS(Rational::parse("1/0"), std::invalid_argument);
}

TEST_CASE("arithmetic") {
    Rational a(1, 2), b(1, 3);
    CHECK(a + b == Rational(5, 6));
    CHECK(a - b == Rational(1, 6));
    CHECK(a * b == Rational(1, 6));
    CHECK(a / b == Rational(3, 2));
    CHECK(-a == Rational(-1, 2));
    CHECK_THROWS_AS(a / Rational(0), std::invalid_argument);

    // Exactness on values where doubles would drift.
    Rational tenth(1, 10), sum(0);
    for (int i = 0; i < 10; ++i) sum += tenth;
    CHECK(sum.is_one());
}

TEST_CASE("ordering") {
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(-1, 2) < Rational(-1, 3));
    CHECK(Rational(2, 4) <= Rational(1, 2));
    CHECK(Rational(5, 3) > Rational(3, 2));
    CHECK(Rational(1, 2).sign() == 1);
    CHECK(Rational(-1, 2).sign() == -1);
    CHECK(Rational(0).sign() == 0);
}

TEST_CASE("integer access") {
    CHECK(Rational(42).to_long() == 42);
    CHECK(Rational(-8, 2).to_long() == -4);
    CHECK_THROWS_AS(Rational(1, 2).to_long(), std::invalid_argument);
    CHECK(Rational(1, 2).to_double() == doctest::Approx(0.5));
    CHECK(Rational(7).str() == "7");
    CHECK(Rational(-3, 4).str() == "-3/4");
}

TEST_CASE("powers") {
    CHECK(rat_pow(Rational(2), 10) == Rational(1024));
    CHECK(rat_pow(Rational(2), -3) == Rational(1, 8));
    CHECK(rat_pow(Rational(-2, 3), 2) == Rational(4, 9));
    CHECK(rat_pow(Rational(-2, 3), 3) == Rational(-8, 27));
    CHECK(rat_pow(Rational(0), 5) == Rational(0));
    CHECK(rat_pow(Rational(0), 0) == Rational(1));
    CHECK(rat_pow(Rational(7, 5), 0) == Rational(1));
    CHECK_THROWS_AS(rat_pow(Rational(0), -1), std::invalid_argument);
}

TEST_CASE("factorials and binomials") {
    CHECK(rat_factorial(0) == Rational(1));
    CHECK(rat_factorial(5) == Rational(120));
    CHECK(rat_factorial(20) == Rational::parse("2432902008176640000"));
    CHECK_THROWS_AS(rat_factorial(-1), std::invalid_argument);

    CHECK(rat_binomial(5, 2) == Rational(10));
    CHECK(rat_binomial(5, 0) == Rational(1));
    CHECK(rat_binomial(5, 5) == Rational(1));
    CHECK(rat_binomial(5, 6) == Rational(0));
    CHECK(rat_binomial(5, -1) == Rational(0));

    // Pascal rule over a grid.
    for (long n = 1; n <= 12; ++n)
        for (long k = 0; k <= n; ++k)
            CHECK(rat_binomial(n, k) == rat_binomial(n - 1, k - 1) + rat_binomial(n - 1, k));
}
