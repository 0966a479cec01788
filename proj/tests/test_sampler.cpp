#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ising/sampler.hpp"

#include <cmath>

using namespace ising;

namespace {

// law of the p-gon triangulations with boundary word omega, from plain enumeration
std::map<std::vector<int>, double> pgon_law(const SpinWord& omega, const Scalar& nu, int n_edges) {
    std::map<std::vector<int>, double> law;
    double total = 0;
    const double x = nu.to_double();
    const MapRequest req{MapKind::pgon, static_cast<int>(omega.size())};
    enumerate_maps(n_edges, req, [&](const CombMap& base) {
        CombMap m = base;
        const int V = m.vertex_count();
        for (long mask = 0; mask < (1L << V); ++mask) {
            m.spins.assign(V, 1);
            for (int v = 0; v < V; ++v)
                if ((mask >> v) & 1) m.spins[v] = -1;
            if (m.boundary_word() != omega) continue;
            const double w = std::pow(x, m.monochromatic_edges());
            law[canonical_code(m)] += w;
            total += w;
        }
    });
    for (auto& [k, p] : law) p /= total;
    return law;
}

} // namespace

TEST_CASE("generator streams are reproducible and distinct") {
    Rng a(42, 0), b(42, 0), c(42, 1);
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next();
        CHECK(x == b.next());
        CHECK(x != c.next());
    }
    Rng r(7);
    for (int i = 0; i < 1000; ++i) {
        double u = r.uniform();
        CHECK(u >= 0);
        CHECK(u < 1);
        CHECK(r.below(5) < 5);
    }
    CHECK(r.choose({0, 0, 1, 0}) == 2);
    CHECK(std::string(Rng::kAlgorithm) == "splitmix64");
}

TEST_CASE("exact sphere sampler matches the enumerated law") {
    for (const Scalar& nu : {Scalar(Rational(1, 2)), Scalar(3)}) {
        CAPTURE(nu.str());
        auto law = exact_law(nu, 6);
        ExactSampler s(nu, 2);
        Rng rng(11);
        std::map<std::vector<int>, long> obs;
        for (int i = 0; i < 8000; ++i) {
            CombMap m = s.sample_sphere(2, rng);
            validate_map(m, {MapKind::sphere, 0});
            ++obs[canonical_code(m)];
        }
        ChiSquare c = chi_square(obs, law);
        CHECK(c.unexpected == 0);
        CHECK(c.p_value > 0.001);
    }
}

TEST_CASE("exact boundary sampler matches the enumerated p-gon law") {
    const Scalar nu(2);
    for (auto [omega, n] : {std::pair<SpinWord, int>{"++-", 6}, std::pair<SpinWord, int>{"+-", 4}}) {
        CAPTURE(omega);
        auto law = pgon_law(omega, nu, n);
        ExactSampler s(nu, 4);
        Rng rng(5);
        std::map<std::vector<int>, long> obs;
        std::vector<PeelingEvent> events;
        for (int i = 0; i < 6000; ++i) {
            CombMap m = s.sample_word(omega, n, rng, i == 0 ? &events : nullptr);
            CHECK(m.boundary_word() == omega);
            ++obs[canonical_code(m)];
        }
        CHECK_FALSE(events.empty());
        ChiSquare c = chi_square(obs, law);
        CHECK(c.unexpected == 0);
        CHECK(c.p_value > 0.001);
    }
    ExactSampler s(nu, 2);
    Rng rng(1);
    CHECK_THROWS_AS(s.sample_word("++", 30, rng), CoefficientsMissing);
    CHECK_THROWS(s.sample_word("++", 2, rng));
}

TEST_CASE("flip chain keeps its bookkeeping and its law") {
    McmcOptions opt;
    opt.validate_every = 500;
    McmcResult r = mcmc_sample(Scalar(2), 12, 20000, 3, opt);
    CHECK(r.monochromatic_incremental == r.monochromatic_recomputed);
    CHECK(r.validations >= 40);
    validate_map(r.map, {MapKind::sphere, 0});
    CHECK(r.map.edges() == 36);

    auto law = exact_law(Scalar(Rational(1, 2)), 3);
    std::map<std::vector<int>, double> emp;
    long seen = 0;
    McmcOptions watch;
    watch.observer = [&](const CombMap& m, long) {
        emp[canonical_code(m)] += 1;
        ++seen;
    };
    mcmc_sample(Scalar(Rational(1, 2)), 1, 60000, 9, watch);
    for (auto& [k, v] : emp) v /= static_cast<double>(seen);
    CHECK(total_variation(emp, law) < 0.03);
}

TEST_CASE("chains are reproducible from seed and stream") {
    McmcOptions a, b;
    b.stream = 1;
    const CombMap m1 = mcmc_sample(Scalar(2), 6, 3000, 17, a).map;
    const CombMap m2 = mcmc_sample(Scalar(2), 6, 3000, 17, a).map;
    const CombMap m3 = mcmc_sample(Scalar(2), 6, 3000, 17, b).map;
    CHECK(canonical_code(m1) == canonical_code(m2));
    CHECK(m1.alpha == m2.alpha);
    CHECK_FALSE((m1.sigma == m3.sigma && m1.spins == m3.spins));
}

TEST_CASE("Boltzmann sampler below the radius") {
    BoltzmannResult r = boltzmann_sample("++-", Scalar(2), 0.05, 21);
    validate_map(r.map, {MapKind::pgon, 3});
    CHECK(r.map.boundary_word() == "++-");
    CHECK(r.max_discrepancy < 1e-3);
    CHECK_THROWS_AS(boltzmann_sample("+", Scalar(2), 1.0, 1), std::domain_error);
    CHECK_THROWS(boltzmann_sample("+", Scalar(2), -0.1, 1));
}

TEST_CASE("statistics") {
    auto maps = enumerate_maps(3, {MapKind::sphere, 0});
    std::vector<CombMap> with_spins;
    for (auto m : maps) {
        m.spins.assign(m.vertex_count(), 1);
        with_spins.push_back(m);
        CHECK(root_degree(m) >= 1);
        CHECK(ball_volume(m, 1) <= ball_volume(m, 2));
        CHECK(ball_volume(m, 5) == m.face_count());
        CHECK(hull_perimeter(m) >= 0);
    }
    SampleStats s = collect_stats(with_spins, 2);
    CHECK(s.count == 4);
    CHECK(s.mean_mono_fraction() == doctest::Approx(1.0));
    SampleStats t = s;
    t.merge(s);
    CHECK(t.count == 8);
    CHECK(t.to_json()["count"] == 8);
    SampleStats other;
    other.r_max = 3;
    CHECK_THROWS(t.merge(other));

    const CombMap back = map_from_json(map_to_json(with_spins[1]));
    CHECK(back.alpha == with_spins[1].alpha);
    CHECK(back.spins == with_spins[1].spins);
}

TEST_CASE("distribution distances") {
    std::map<std::vector<int>, double> p{{{1}, 0.5}, {{2}, 0.5}}, q{{{1}, 1.0}};
    CHECK(total_variation(p, q) == doctest::Approx(0.5));
    CHECK(total_variation(p, p) == 0);
    ChiSquare c = chi_square({{{3}, 10}}, q);
    CHECK(c.unexpected == 10);
    CHECK(c.p_value == 0);
    CHECK_THROWS(chi_square({}, q));
}
