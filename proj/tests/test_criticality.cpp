#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ising/criticality.hpp"
#include "ising/partition.hpp"

#include <cmath>

using namespace ising;

TEST_CASE("constants of the critical point") {
    const Scalar nu = nu_critical(), rho = rho_critical();
    CHECK(nu.str() == "1/1 + 1/7*sqrt7");
    CHECK(rho.str() == "-55/864 + 25/864*sqrt7");
    CHECK(P1(nu, rho).is_zero());
    CHECK(P2(nu, rho).is_zero());
    CHECK(y_critical().to_double() == doctest::Approx(0.6 * (1 + std::sqrt(7.0))));
}

TEST_CASE("root isolation") {
    const Rational width(1, 1000000000);
    // (x - 1/3)(x - 2) = x^2 - 7/3 x + 2/3
    auto roots = positive_roots({Scalar(Rational(2, 3)), Scalar(Rational(-7, 3)), Scalar(1)}, width);
    REQUIRE(roots.size() == 2);
    CHECK(roots[0].exact == Scalar(Rational(1, 3)));
    CHECK(roots[1].exact == Scalar(2));
    // x^2 - 7 has the quadratic root sqrt7
    roots = positive_roots({Scalar(-7), Scalar(0), Scalar(1)}, width);
    REQUIRE(roots.size() == 1);
    CHECK(roots[0].exact == Scalar::sqrt7());
    // x^2 - 2: irrational outside Q(sqrt7), interval only
    roots = positive_roots({Scalar(-2), Scalar(0), Scalar(1)}, width);
    REQUIRE(roots.size() == 1);
    CHECK_FALSE(roots[0].exact);
    CHECK(roots[0].hi - roots[0].lo <= width);
    CHECK(roots[0].approx() == doctest::Approx(std::sqrt(2.0)));
    CHECK(positive_roots({Scalar(1), Scalar(1)}, width).empty());
}

TEST_CASE("regimes and radii") {
    CriticalData high = critical_point(Scalar(3));
    CHECK(high.regime == Regime::supercritical);
    CHECK(high.polynomial == "P1");
    REQUIRE(high.rho.exact);
    CHECK(*high.rho.exact == Scalar(Rational(11, 6912)));

    CriticalData c = critical_point(nu_critical());
    CHECK(c.regime == Regime::critical);
    CHECK(c.polynomial == "P2");
    REQUIRE(c.rho.exact);
    CHECK(*c.rho.exact == rho_critical());
    CHECK(std::pow(c.t_double(), 3) == doctest::Approx(c.rho_double()));
    CHECK(c.alpha() == doctest::Approx(7.0 / 3.0));

    CriticalData one = critical_point(Scalar(1));
    CHECK(one.regime == Regime::subcritical);
    CHECK(one.alpha() == 2.5);
    CHECK(regime_name(Regime::critical) == "critical");
}

TEST_CASE("evaluation of a series") {
    TSeries geo(Scalar(1), 40);
    for (int k = 0; k <= 40; ++k) geo.set(k, Scalar(1));
    CHECK(eval_partial(geo, 0.5).mid == doctest::Approx(2.0).epsilon(1e-9));
    CriticalData c = critical_point(Scalar(2));
    CHECK_THROWS_AS(eval_at_tnu(TSeries(Scalar(2), 10), c, 2.5), InsufficientOrder);
}

TEST_CASE("asymptotic fit on a synthetic sequence") {
    const double rho = 0.02, alpha = 2.5;
    TSeries s(Scalar(1), 3 * 40);
    for (int n = 1; n <= 40; ++n) {
        // exact rationals close to rho^-n n^-alpha
        double v = std::pow(rho, -n) * std::pow(n, -alpha);
        s.set(3 * n, Scalar(Rational(mpq_class(v))));
    }
    AsymptoticFit fit = estimate_asymptotics(s, rho);
    CHECK(fit.alpha.mid == doctest::Approx(alpha).epsilon(1e-3));
    CHECK(fit.growth.mid == doctest::Approx(1 / rho).epsilon(1e-3));
    CHECK_THROWS_AS(estimate_asymptotics(TSeries(Scalar(1), 3), rho), InsufficientOrder);
}

TEST_CASE("spectral radius with certified bounds") {
    IntervalMatrix m = IntervalMatrix::from_doubles({{2, 1}, {1, 2}});
    SpectralResult r = spectral_radius(m);
    CHECK(r.lo <= 3.0);
    CHECK(r.hi >= 3.0);
    CHECK(r.hi - r.lo < 1e-9);
    IntervalMatrix neg = IntervalMatrix::from_doubles({{1, -1}, {0, 1}});
    CHECK_THROWS_AS(spectral_radius(neg), NegativeEntry);
}

TEST_CASE("mean matrix and hull value at the critical point") {
    CriticalData c = critical_point(nu_critical());
    ZValues z = evaluate_z(nu_critical(), 45, c);
    CHECK(z.z1.mid == doctest::Approx(0.26059).epsilon(1e-4));
    MeanMatrix mm = mean_matrix(c, z);
    for (const auto& e : mm.m.entries) CHECK(e.lo >= 0);
    SpectralResult r = spectral_radius(mm.m);
    CHECK(r.hi < 1);
    CHECK(r.lo > 0.98);
    HullCheck h = hull_constant(c, z);
    CHECK(h.closed_form == doctest::Approx(0.10507).epsilon(1e-4));
    CHECK(h.below_y_c);
}
