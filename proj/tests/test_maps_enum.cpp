#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ising/maps_enum.hpp"

#include <set>

using namespace ising;

TEST_CASE("words") {
    CHECK(parse_word("⊕⊖⊕") == "+-+");
    CHECK(flip_word("++-") == "--+");
    CHECK(canonical_word("-+") == canonical_word("+-"));
    CHECK(canonical_word("--+") == canonical_word("++-"));
    CHECK(min_degree(1) == 2);
    CHECK(min_degree(2) == 1);
    CHECK(min_degree(5) == 7);
    CHECK(in_support(3, 3));
    CHECK_FALSE(in_support(3, 4));
    CHECK_FALSE(in_support(4, 2));
    CHECK_THROWS(parse_word("+x"));
}

TEST_CASE("rooted sphere triangulations are counted once each") {
    // rooted triangulations with loops and multiple edges: 4, 32, 336
    const std::pair<int, size_t> known[] = {{3, 4}, {6, 32}, {9, 336}};
    for (auto [n, count] : known) {
        CAPTURE(n);
        auto maps = enumerate_maps(n, {MapKind::sphere, 0});
        CHECK(maps.size() == count);
        std::set<std::vector<int>> codes;
        for (auto& m : maps) {
            m.spins.assign(m.vertex_count(), 1);
            validate_map(m, {MapKind::sphere, 0});
            CHECK(m.vertex_count() - m.edges() + m.face_count() == 2);
            codes.insert(canonical_code(m));
        }
        CHECK(codes.size() == count);
    }
    CHECK(enumerate_maps(4, {MapKind::sphere, 0}).empty());
}

TEST_CASE("p-gon enumeration respects the support rule") {
    for (int p = 1; p <= 4; ++p)
        for (int n = 0; n <= 8; ++n) {
            CAPTURE(p);
            CAPTURE(n);
            const bool any = !enumerate_maps(n, {MapKind::pgon, p}).empty();
            CHECK(any == in_support(p, n));
        }
    CHECK(enumerate_maps(6, {MapKind::pgon, 3}).size() == 10);
}

TEST_CASE("cap is enforced") {
    CHECK_THROWS_AS(enumerate_maps(12, {MapKind::sphere, 0}), CapExceeded);
    CHECK_NOTHROW(enumerate_maps(3, {MapKind::sphere, 0}, 12));
}

TEST_CASE("map text format round-trips") {
    auto maps = enumerate_maps(6, {MapKind::sphere, 0});
    CombMap m = maps.at(3);
    m.spins.assign(m.vertex_count(), -1);
    m.spins[0] = 1;
    CombMap back = CombMap::parse(m.dump());
    CHECK(back.alpha == m.alpha);
    CHECK(back.sigma == m.sigma);
    CHECK(back.root == m.root);
    CHECK(back.spins == m.spins);
    CHECK_THROWS_AS(CombMap::parse("alpha=[1,0] nonsense"), ParseError);
}

TEST_CASE("validation rejects broken maps") {
    CombMap m = enumerate_maps(3, {MapKind::sphere, 0}).front();
    m.spins.assign(m.vertex_count(), 1);
    CombMap bad = m;
    std::swap(bad.alpha[0], bad.alpha[1]);
    CHECK_THROWS_AS(validate_map(bad, {MapKind::sphere, 0}), InvalidMap);
    bad = m;
    bad.spins.pop_back();
    CHECK_THROWS_AS(validate_map(bad, {MapKind::sphere, 0}), InvalidMap);
}

TEST_CASE("oracle series symmetries") {
    const Scalar nu(Rational(3, 2));
    for (const char* w : {"+", "++", "+-", "++-", "+-+-"}) {
        CAPTURE(w);
        const TSeries s = oracle_series(w, nu, 9);
        CHECK(s == oracle_series(flip_word(w), nu, 9));
        for (const auto& [k, c] : s.coeffs()) {
            CHECK(in_support(static_cast<int>(std::string(w).size()), k));
            CHECK(c.sign() > 0);
        }
    }
    // at nu = 1 the boundary spins are irrelevant
    CHECK(oracle_series("+-", Scalar(1), 9).coeffs() == oracle_series("++", Scalar(1), 9).coeffs());
    // every vertex of a sphere map carries a free spin: 2^V times the map count
    const TSeries sphere = oracle_sphere(Scalar(1), 9);
    CHECK(sphere.coeff(3) == Scalar(32));
    CHECK(sphere.coeff(6) == Scalar(512));
}

TEST_CASE("seed words at small order") {
    const Scalar nu(2);
    const TSeries z1 = oracle_series("+", nu, 7);
    // a loop enclosing one pendant vertex of either spin
    CHECK(z1.coeff(2) == nu * (nu + Scalar(1)));
    CHECK(oracle_series("+++", nu, 3).coeff(3) == nu.pow(3));
    CHECK(oracle_series("++", nu, 1).coeff(1) == nu);
    CHECK(oracle_series("+-", nu, 1).coeff(1) == Scalar(1));
}
