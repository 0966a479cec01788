#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ising/partition.hpp"

using namespace ising;

TEST_CASE("Dobrushin seeds against the enumeration oracle") {
    for (const Scalar& nu : {Scalar(2), Scalar(Rational(1, 3)), Scalar(Rational(1), Rational(1, 7))}) {
        CAPTURE(nu.str());
        DobrushinTable t = solve_dobrushin(nu, 9);
        CHECK(first_difference(t.z1, oracle_series("+", nu, 9), 9) == -1);
        CHECK(first_difference(t.z2, oracle_series("++", nu, 9), 9) == -1);
        CHECK(first_difference(t.z_pm, oracle_series("+-", nu, 9), 9) == -1);
        CHECK(first_difference(t.word("++--"), oracle_series("++--", nu, 9), 9) == -1);
        CHECK(first_difference(t.word("-"), t.z1, 9) == -1);
    }
}

TEST_CASE("two-variable series is symmetric in x and y") {
    DobrushinTable t = solve_dobrushin(Scalar(Rational(5, 2)), 12);
    CHECK(t.zpm == t.zpm.swapped_xy());
}

TEST_CASE("words via root-edge deletion") {
    const Scalar nu(2);
    WordTable table(solve_dobrushin(nu, 9));
    for (const char* w : {"+++", "++-", "+-+-", "++-+", "+++++"}) {
        CAPTURE(w);
        CHECK(first_difference(table.series(w), oracle_series(w, nu, 9), 9) == -1);
    }
    CHECK(table.series("+-+") == table.series("-+-"));
    CHECK(table.memo_size() > 0);
}

TEST_CASE("sphere series") {
    const TSeries s = sphere_series(Scalar(2), 9);
    CHECK(s.coeff(0) == Scalar(0));
    CHECK(s.coeff(3) == Scalar(136));
    CHECK(s.coeff(6) == Scalar(10416));
    CHECK(first_difference(s, oracle_sphere(Scalar(2), 9), 9) == -1);
    CHECK_THROWS(sphere_series(solve_dobrushin(Scalar(2), 9), 9));
}

TEST_CASE("U reproduces t^3 through its defining relation") {
    for (const Scalar& nu : {Scalar(2), Scalar(Rational(2, 3))}) {
        TSeries U = solve_U(nu, 24);
        CHECK(U.coeff(3) == Scalar(4) * nu * nu);
        CHECK(first_difference(U_relation_rhs(U), TSeries::monomial(nu, 24, 3, Scalar(1)), 24) == -1);
    }
    TSeries U2 = solve_U(Scalar(2), 6);
    CHECK(U2.coeff(3) == Scalar(16));
    CHECK(U2.coeff(6) == Scalar(960));
}

TEST_CASE("monochromatic boundary recursion matches the two-variable system") {
    const Scalar nu(3);
    DobrushinTable t = solve_dobrushin(nu, 16);
    for (int p : {3, 4, 5}) {
        CAPTURE(p);
        CHECK(first_difference(zplus_recursion(p, nu, 12, t), t.zplus.coeff_xy(p, 0), 12) == -1);
    }
    CHECK_THROWS(zplus_recursion(2, nu, 8, t));
    CHECK_THROWS_AS(zplus_recursion(3, Scalar(1), 8, solve_dobrushin(Scalar(1), 12)), Degenerate);
}

TEST_CASE("catalytic equation residual") {
    for (const Scalar& nu : {Scalar(2), Scalar(Rational(1, 2))}) {
        CatalyticReport r = verify_catalytic(nu, 12, solve_dobrushin(nu, 12));
        CHECK(r.zero());
        CHECK(r.first_nonzero_order() == -1);
    }
    CatalyticReport verbatim = verify_catalytic(Scalar(2), 10, solve_dobrushin(Scalar(2), 10), PolTranscription::verbatim);
    CHECK_FALSE(verbatim.zero());
    CHECK(verbatim.first_nonzero_order() == 4);
    CatalyticReport one = verify_catalytic(Scalar(1), 10, solve_dobrushin(Scalar(1), 10));
    CHECK(one.degenerate);
    CHECK(one.zero());
}

TEST_CASE("Q identities") {
    QIdentityReport r = check_q_identities(Scalar(2), 9);
    CHECK(r.N == 9);
    for (const auto& c : r.checks) {
        CAPTURE(c.name);
        if (c.name == "Z+++ + 3 Z++- = Q3 - Q1 Q2") {
            CHECK_FALSE(c.holds);
            CHECK(c.first_failure == 3);
        } else {
            CHECK(c.holds);
        }
    }
    CHECK_FALSE(r.reference_hold());
    CHECK(r.corrected_hold());
    CHECK_FALSE(r.all_hold());

    QIdentityReport at_one = check_q_identities(Scalar(1), 6);
    CHECK(at_one.corrected_hold());
}
