#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ising/series.hpp"

using namespace ising;

namespace {

TSeries from(std::initializer_list<long> cs, int order) {
    TSeries s(Scalar(1), order);
    int k = 0;
    for (long c : cs) s.set(k++, Scalar(c));
    return s;
}

} // namespace

TEST_CASE("truncated products and inverses") {
    const TSeries one_minus_t = from({1, -1}, 8);
    const TSeries geometric = one_minus_t.inverse();
    for (int k = 0; k <= 8; ++k) CHECK(geometric.coeff(k) == Scalar(1));
    CHECK((geometric * one_minus_t).coeffs().size() == 1);
    CHECK(from({1, 1}, 5).pow(5).coeff(2) == Scalar(10));
    CHECK_THROWS_AS(from({0, 1}, 4).inverse(), ValuationError);
}

TEST_CASE("shifts respect the valuation") {
    TSeries s = from({0, 0, 3, 4}, 6);
    CHECK(s.valuation() == 2);
    CHECK(s.shifted(-2).coeff(0) == Scalar(3));
    CHECK(s.shifted(2).coeff(4) == Scalar(3));
    CHECK_THROWS(s.shifted(-3));
    CHECK(TSeries(Scalar(1), 4).valuation() == 5);
}

TEST_CASE("sparse storage never keeps zeros") {
    TSeries s(Scalar(2), 5);
    s.add_to(3, Scalar(4));
    s.add_to(3, Scalar(-4));
    CHECK(s.is_zero());
    s.set(2, Scalar(0));
    CHECK(s.coeffs().empty());
}

TEST_CASE("series JSON round-trip keeps exact coefficients") {
    TSeries s(Scalar(Rational(1), Rational(1, 7)), 6);
    s.set(3, Scalar(Rational(-55, 864), Rational(25, 864)));
    s.set(6, Scalar(Rational(10416)));
    CHECK(TSeries::from_json(s.to_json()) == s);
}

TEST_CASE("two-variable series") {
    BivSeries a(Scalar(1), 4, 4, 4);
    a.set(1, 2, 0, Scalar(5));
    a.set(2, 0, 1, Scalar(7));
    CHECK(a.swapped_xy().coeff(1, 0, 2) == Scalar(5));
    CHECK(a.times_x().coeff(1, 3, 0) == Scalar(5));
    CHECK_THROWS(a.div_x(2));
    CHECK(a.window(1, 1).div_x(2).coeff(1, 0, 0) == Scalar(5));
    CHECK(a.slice_y(1).coeff(2, 0, 0) == Scalar(7));
    CHECK(a.coeff_xy(2, 0).coeff(1) == Scalar(5));
    CHECK_THROWS_AS(a.times_x(3), DegreeOverflow);
    BivSeries sq = a * a;
    CHECK(sq.coeff(2, 4, 0) == Scalar(25));
    CHECK(sq.coeff(3, 2, 1) == Scalar(70));
    CHECK((a - a).is_zero());
    CHECK(a.window(2, 2).term_count() == 1);
}

TEST_CASE("windowed fixed point reproduces the Catalan numbers") {
    const int N = 12;
    FixedPointSpec<TSeries> spec;
    spec.name = "catalan";
    spec.gain = 1;
    // C = 1 + t C^2
    spec.update = [](const TSeries& c, int lo, int hi) {
        TSeries t(c.nu(), c.order());
        t.set(1, Scalar(1));
        TSeries rhs = TSeries::mul_window(t, c * c, lo, hi);
        if (lo == 0) rhs.set(0, Scalar(1));
        return rhs;
    };
    TSeries c = solve_fixed_point(spec, TSeries(Scalar(1), N), N);
    const long catalan[] = {1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796, 58786, 208012};
    for (int k = 0; k <= N; ++k) CHECK(c.coeff(k) == Scalar(catalan[k]));

    spec.gain = 0;
    CHECK_THROWS_AS(solve_fixed_point(spec, TSeries(Scalar(1), N), N), NotContractive);
}
