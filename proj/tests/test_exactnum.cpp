#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ising/exactnum.hpp"

using namespace ising;

namespace {
Scalar q(long p, long d) { return Scalar(Rational(p, d)); }
Scalar quad(long a, long ad, long b, long bd) { return Scalar(Rational(a, ad), Rational(b, bd)); }
} // namespace

TEST_CASE("field arithmetic in Q(sqrt7)") {
    const Scalar s = Scalar::sqrt7();
    CHECK(s * s == Scalar(7));
    CHECK((Scalar(1) + s) * (Scalar(1) - s) == Scalar(-6));
    const Scalar x = quad(3, 4, -2, 5);
    CHECK(x * x.inverse() == Scalar(1));
    CHECK(x / x == Scalar(1));
    CHECK(x.norm() == Rational(9, 16) - 7 * Rational(4, 25));
    CHECK(x.pow(0) == Scalar(1));
    CHECK(x.pow(3) == x * x * x);
    CHECK((x - x).is_zero());
    CHECK_THROWS_AS(x / Scalar(0), DivisionByZero);
}

TEST_CASE("rationals are kept in lowest terms") {
    CHECK(Scalar(Rational(5, 5)) == Scalar(1));
    CHECK(Scalar(Rational(6, 4), Rational(-2, 4)).str() == "3/2 + -1/2*sqrt7");
}

TEST_CASE("exact sign with cancelling parts") {
    // 8/3 > sqrt7 > 21/8
    CHECK(quad(8, 3, -1, 1).sign() > 0);
    CHECK(quad(21, 8, -1, 1).sign() < 0);
    CHECK(quad(-8, 3, 1, 1).sign() < 0);
    CHECK(Scalar(0).sign() == 0);
    CHECK(quad(1, 1, 1, 7) > Scalar(1));
    CHECK(quad(-55, 864, 25, 864) > Scalar(0));
    CHECK(quad(-55, 864, 25, 864) < q(13, 1000));
}

TEST_CASE("text grammar round-trips") {
    for (const char* text : {"0/1", "-3/7", "1/1 + 1/7*sqrt7", "-55/864 + 25/864*sqrt7", "3/5 + -2/9*sqrt7"}) {
        CAPTURE(text);
        CHECK(Scalar::parse(text).str() == text);
    }
    CHECK(Scalar::parse("2") == Scalar(2));
    CHECK(Scalar::parse(" 1/2 - 1/3*sqrt7 ") == quad(1, 2, -1, 3));
    CHECK(Scalar::parse("1*sqrt7") == Scalar::sqrt7());
    CHECK(Scalar::parse("-*sqrt7").sqrt7_part() == -1);
    CHECK_THROWS_AS(Scalar::parse(""), ParseError);
    CHECK_THROWS_AS(Scalar::parse("1/0"), ParseError);
    CHECK_THROWS_AS(Scalar::parse("abc"), ParseError);
    CHECK_THROWS_AS(parse_rational("1/-2"), ParseError);
}

TEST_CASE("intervals enclose the exact value") {
    const Scalar rho = quad(-55, 864, 25, 864);
    for (mpfr_prec_t bits : {24, 64, 256}) {
        BigInterval iv = rho.to_interval(bits);
        CHECK(mpfr_cmp(iv.lo(), iv.hi()) <= 0);
        CHECK(iv.mid_double() == doctest::Approx(0.012897896732193015).epsilon(1e-6));
        if (bits >= 64) {
            CHECK(mpfr_cmp_d(iv.lo(), 0.01289789673219) > 0);
            CHECK(mpfr_cmp_d(iv.hi(), 0.01289789673220) < 0);
        }
    }
    CHECK(rho.to_double() == doctest::Approx(0.0128978967321930));
    CHECK_THROWS(rho.to_interval(8));
}

TEST_CASE("simplest rational in an interval") {
    CHECK(simplest_between(Rational(3, 10), Rational(4, 10)) == Rational(1, 3));
    CHECK(simplest_between(Rational(-4, 10), Rational(-3, 10)) == Rational(-1, 3));
    CHECK(simplest_between(Rational(-1, 10), Rational(1, 10)) == 0);
    CHECK(simplest_between(Rational(7, 2), Rational(7, 2)) == Rational(7, 2));
    CHECK(simplest_between(Rational(314159, 100000), Rational(314160, 100000)) == Rational(355, 113));
    CHECK(simplest_between(Rational(314, 100), Rational(315, 100)) == Rational(22, 7));
    CHECK(simplest_between(Rational(5, 2), Rational(2, 1)) == 2);
}
