#include "ising/acceptance.hpp"

#include "ising/criticality.hpp"
#include "ising/maps_enum.hpp"
#include "ising/partition.hpp"
#include "ising/sampler.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace ising {

namespace {

using nlohmann::json;

std::vector<SpinWord> all_words(int max_len) {
    std::vector<SpinWord> out;
    for (int len = 1; len <= max_len; ++len)
        for (int mask = 0; mask < (1 << len); ++mask) {
            SpinWord w;
            for (int i = 0; i < len; ++i) w += (mask >> i) & 1 ? '-' : '+';
            out.push_back(w);
        }
    return out;
}

std::string fmt(double x, int digits = 6) {
    std::ostringstream s;
    s << std::setprecision(digits) << x;
    return s.str();
}

CriterionResult critical_constants() {
    CriterionResult r;
    r.id = 1;
    r.title = "exact critical constants";
    const Scalar nu = nu_critical(), rho = rho_critical();
    const Scalar p1 = P1(nu, rho), p2 = P2(nu, rho);
    r.pass = p1.is_zero() && p2.is_zero();
    r.detail = {{"nu_c", nu.str()}, {"rho_c", rho.str()}, {"P1", p1.str()}, {"P2", p2.str()}};
    r.summary = "P1 = " + p1.str() + ", P2 = " + p2.str() + " at rho = " + rho.str();
    return r;
}

CriterionResult oracle_equivalence() {
    CriterionResult r;
    r.id = 2;
    r.title = "oracle equivalence";
    r.pass = true;
    int compared = 0, mismatches = 0;
    json runs = json::array();
    for (const Scalar& nu : {Scalar(Rational(1, 2)), Scalar(1), Scalar(2), nu_critical()}) {
        SuiteReport rep = oracle_suite(nu, 9);
        r.pass = r.pass && rep.pass;
        compared += rep.detail["series_compared"].get<int>();
        mismatches += static_cast<int>(rep.detail["mismatches"].size());
        runs.push_back(rep.detail);
    }
    r.detail = {{"runs", runs}};
    r.summary = std::to_string(compared) + " series to t^9 at nu in {1/2, 1, 2, nu_c}, " + std::to_string(mismatches) +
                " mismatches";
    return r;
}

CriterionResult catalytic_residual() {
    CriterionResult r;
    r.id = 3;
    r.title = "catalytic-equation residual";
    r.pass = true;
    json runs = json::array();
    std::string text;
    for (auto [nu, N] : {std::pair{Scalar(Rational(1, 2)), 15}, std::pair{Scalar(2), 15}, std::pair{nu_critical(), 12}}) {
        SuiteReport rep = catalytic_suite(nu, N);
        r.pass = r.pass && rep.pass;
        runs.push_back(rep.detail);
        text += (text.empty() ? "" : ", ") + std::string(rep.pass ? "0" : "nonzero") + " at nu=" + nu.str() +
                " (order " + std::to_string(N) + ")";
    }
    r.detail = {{"runs", runs}};
    r.summary = "residual " + text;
    return r;
}

CriterionResult q_identities() {
    CriterionResult r;
    r.id = 4;
    r.title = "Q-identities";
    r.pass = true;
    json runs = json::array();
    std::string failing;
    for (const Scalar& nu : {Scalar(2), Scalar(Rational(1, 2))}) {
        SuiteReport rep = q_suite(nu, 9);
        // gated on the verbatim reference set, corrections excluded
        r.pass = r.pass && rep.detail["reference_hold"].get<bool>();
        for (const auto& c : rep.detail["checks"])
            if (!c["holds"].get<bool>() && !c["supplementary"].get<bool>()) {
                const std::string name = c["name"];
                if (failing.find(name) == std::string::npos)
                    failing += (failing.empty() ? "" : "; ") + name + " (first differs at t^" +
                               std::to_string(c["first_failure"].get<int>()) + ")";
            }
        runs.push_back(rep.detail);
    }
    r.detail = {{"runs", runs}};
    r.summary = r.pass ? "all four identities hold to t^9 at nu in {2, 1/2}" : "fails: " + failing;
    return r;
}

CriterionResult u_consistency() {
    CriterionResult r;
    r.id = 5;
    r.title = "U consistency";
    r.pass = true;
    const int N = 30;
    json runs = json::array();
    for (const Scalar& nu : {Scalar(2), Scalar(Rational(1, 2)), Scalar(1), nu_critical()}) {
        TSeries U = solve_U(nu, N);
        TSeries t3 = TSeries::monomial(nu, N, 3, Scalar(1));
        int diff = first_difference(U_relation_rhs(U), t3, N);
        bool lead = U.coeff(3) == Scalar(4) * nu * nu && U.valuation() == 3;
        r.pass = r.pass && diff < 0 && lead;
        runs.push_back({{"nu", nu.str()}, {"order", N}, {"first_difference", diff}, {"t3_coeff", U.coeff(3).str()}, {"lead_ok", lead}});
    }
    r.detail = {{"runs", runs}};
    r.summary = std::string(r.pass ? "t^3 reproduced" : "mismatch") + " to order 30 at nu in {2, 1/2, 1, nu_c}; [t^3]U = 4 nu^2";
    return r;
}

struct CriticalEvaluation {
    CriticalData crit;
    ZValues z;
};

const CriticalEvaluation& critical_evaluation() {
    static const CriticalEvaluation ev = [] {
        CriticalEvaluation e;
        e.crit = critical_point(nu_critical());
        e.z = evaluate_z(nu_critical(), 45, e.crit);
        return e;
    }();
    return ev;
}

CriterionResult spectral_at_critical() {
    CriterionResult r;
    r.id = 6;
    r.title = "spectral radius at nu_c";
    const auto& ev = critical_evaluation();
    MeanMatrix mm = mean_matrix(ev.crit, ev.z);
    SpectralResult sr = spectral_radius(mm.m);
    const double target = 0.98985;
    bool near = sr.lo - 0.02 <= target && target <= sr.hi + 0.02;
    r.pass = near && sr.hi < 1;
    r.detail = {{"order", 45}, {"radius", sr.to_json()}, {"matrix", mm.to_json()}};
    r.summary = "radius in [" + fmt(sr.lo, 7) + ", " + fmt(sr.hi, 7) + "] (order 45, tail-corrected)";
    return r;
}

CriterionResult hull_at_critical() {
    CriterionResult r;
    r.id = 7;
    r.title = "hull constant";
    const auto& ev = critical_evaluation();
    HullCheck h = hull_constant(ev.crit, ev.z);
    bool near = std::abs(h.value.mid - 0.105) <= 0.01;
    r.pass = near && h.below_y_c;
    r.detail = h.to_json();
    r.detail["target"] = 0.105;
    r.summary = "min(Z++, Z+-)(t_nu)/t_nu = " + fmt(h.value.mid) + " [" + fmt(h.value.lo) + ", " + fmt(h.value.hi) +
                "], target 0.105 +- 0.01 (closed form " + fmt(h.closed_form, 5) + "); below y_c: " +
                (h.below_y_c ? "yes" : "no");
    return r;
}

struct AlphaRuns {
    AsymptoticFit at_one, at_critical;
    CriticalData crit_one;
};

const AlphaRuns& alpha_runs() {
    static const AlphaRuns runs = [] {
        AlphaRuns a;
        a.crit_one = critical_point(Scalar(1));
        a.at_one = estimate_asymptotics(sphere_series(Scalar(1), 60), a.crit_one);
        CriticalData c = critical_point(nu_critical());
        a.at_critical = estimate_asymptotics(sphere_series(nu_critical(), 45), c);
        return a;
    }();
    return runs;
}

CriterionResult exponent_transition() {
    CriterionResult r;
    r.id = 8;
    r.title = "exponent transition";
    const auto& a = alpha_runs();
    const double a1 = a.at_one.alpha.mid, ac = a.at_critical.alpha.mid;
    r.pass = std::abs(a1 - 2.5) <= 0.15 && std::abs(ac - 7.0 / 3.0) <= 0.15 && ac < a1 - 0.05;
    r.detail = {{"alpha_nu1", a.at_one.alpha.to_json()}, {"alpha_nuc", a.at_critical.alpha.to_json()}, {"order_nu1", 60}, {"order_nuc", 45}};
    r.summary = "alpha(1) = " + fmt(a1, 5) + ", alpha(nu_c) = " + fmt(ac, 5);
    return r;
}

CriterionResult growth_at_one() {
    CriterionResult r;
    r.id = 9;
    r.title = "growth rate at nu = 1";
    const auto& a = alpha_runs();
    const double target = 1 / a.crit_one.rho_double();
    const double rel = std::abs(a.at_one.growth.mid / target - 1);
    r.pass = rel <= 0.01;
    r.detail = {{"growth", a.at_one.growth.to_json()}, {"inverse_rho", target}, {"relative_error", rel}};
    r.summary = "growth " + fmt(a.at_one.growth.mid) + " vs 1/rho = " + fmt(target) + " (" + fmt(100 * rel, 3) + "%)";
    return r;
}

CriterionResult sampler_correctness(std::uint64_t seed) {
    CriterionResult r;
    r.id = 10;
    r.title = "sampler correctness";
    const Scalar nu(2);
    // chain at n = 1 observed after every step
    auto law1 = exact_law(nu, 3);
    std::map<std::vector<int>, double> emp;
    long seen = 0;
    McmcOptions opt;
    opt.observer = [&](const CombMap& m, long) {
        emp[canonical_code(m)] += 1;
        ++seen;
    };
    const long steps = 100000;
    mcmc_sample(nu, 1, steps, seed, opt);
    for (auto& [k, v] : emp) v /= static_cast<double>(seen);
    const double tv = total_variation(emp, law1);

    json chi = json::array();
    bool chi_ok = true;
    for (int n : {1, 2}) {
        auto law = exact_law(nu, 3 * n);
        ExactSampler sampler(nu, n);
        Rng rng(seed, static_cast<std::uint64_t>(n));
        std::map<std::vector<int>, long> obs;
        for (int k = 0; k < 20000; ++k) ++obs[canonical_code(sampler.sample_sphere(n, rng))];
        ChiSquare c = chi_square(obs, law);
        chi_ok = chi_ok && c.p_value > 0.01;
        chi.push_back({{"n", n}, {"samples", 20000}, {"statistic", c.statistic}, {"dof", c.dof}, {"p_value", c.p_value}});
    }

    McmcOptions plain;
    plain.validate_every = 10000;
    McmcResult big = mcmc_sample(nu, 10, steps, seed + 1, plain);
    const bool books = big.monochromatic_incremental == big.monochromatic_recomputed;

    r.pass = tv < 0.02 && chi_ok && books;
    r.detail = {{"mcmc_tv", tv},
                {"mcmc_steps", steps},
                {"chi_square", chi},
                {"bookkeeping", {{"incremental", big.monochromatic_incremental}, {"recomputed", big.monochromatic_recomputed}, {"validations", big.validations}}}};
    r.summary = "MCMC TV " + fmt(tv, 3) + "; chi2 p = " + fmt(chi[0]["p_value"].get<double>(), 3) + ", " +
                fmt(chi[1]["p_value"].get<double>(), 3) + "; bookkeeping " + (books ? "exact" : "drifted");
    return r;
}

CriterionResult structural_invariants(std::uint64_t seed) {
    CriterionResult r;
    r.id = 11;
    r.title = "structural invariants";
    Rng rng(seed, 11);
    int trials = 0, failures = 0;
    json bad = json::array();
    auto fail = [&](const std::string& what, const json& ctx) {
        ++failures;
        if (bad.size() < 20) bad.push_back({{"check", what}, {"context", ctx}});
    };
    for (int trial = 0; trial < 24; ++trial) {
        ++trials;
        Rational q(static_cast<long>(1 + rng.below(6)), static_cast<long>(1 + rng.below(6)));
        q.canonicalize();
        Scalar nu = trial % 6 == 5 ? nu_critical() : Scalar(q);
        const int N = 6 + static_cast<int>(rng.below(10));
        const int len = 1 + static_cast<int>(rng.below(5));
        SpinWord w;
        for (int i = 0; i < len; ++i) w += rng.bernoulli(0.5) ? '+' : '-';
        const json ctx = {{"nu", nu.str()}, {"word", w}, {"order", N}};

        DobrushinTable dob = solve_dobrushin(nu, N);
        WordTable table(dob);
        TSeries s = table.series(w);
        for (int n = 0; n <= N; ++n) {
            const Scalar c = s.coeff(n);
            if (!in_support(len, n) && !c.is_zero()) fail("support", ctx);
            if (c.sign() < 0) fail("nonnegativity", ctx);
            if (n == min_degree(len) && c.is_zero()) fail("minimal degree", ctx);
        }
        if (N <= 9) {
            // the oracle reads words literally, with no canonical form
            TSeries flipped = oracle_series(flip_word(w), nu, N);
            if (first_difference(s, flipped, N) >= 0) fail("spin-flip symmetry", ctx);
        }
        for (int k = 0; k <= N; ++k)
            for (const auto& [ij, v] : dob.zpm.at_order(k)) {
                if (!(dob.zpm.coeff(k, ij.second, ij.first) == v)) fail("x-y symmetry", ctx);
                if ((k + ij.first + ij.second) % 3 != 0) fail("two-variable parity", ctx);
                if (v.sign() < 0) fail("nonnegativity", ctx);
            }
    }
    r.pass = failures == 0;
    r.detail = {{"trials", trials}, {"failures", bad}, {"seed", seed}};
    r.summary = std::to_string(trials) + " randomized (nu, word, order) cases, " + std::to_string(failures) + " violations";
    return r;
}

} // namespace

SuiteReport catalytic_suite(const Scalar& nu, int order) {
    CatalyticReport rep = verify_catalytic(nu, order, solve_dobrushin(nu, order));
    json terms = json::array();
    for (int k = 0; k <= order; ++k)
        for (const auto& [ij, v] : rep.residual.at_order(k))
            terms.push_back({{"t", k}, {"x", ij.first}, {"y", ij.second}, {"coefficient", v.str()}});
    SuiteReport s;
    s.name = "catalytic";
    s.pass = rep.zero();
    s.detail = {{"nu", nu.str()},
                {"order", order},
                {"degenerate", rep.degenerate},
                {"zero", rep.zero()},
                {"first_nonzero", rep.first_nonzero_order()},
                {"residual_terms", terms}};
    return s;
}

SuiteReport q_suite(const Scalar& nu, int order) {
    QIdentityReport rep = check_q_identities(nu, order);
    json checks = json::array();
    for (const auto& c : rep.checks)
        checks.push_back({{"name", c.name},
                          {"holds", c.holds},
                          {"checked_to", c.checked_to},
                          {"first_failure", c.first_failure},
                          {"supplementary", c.supplementary},
                          {"replaces", c.replaces},
                          {"note", c.note}});
    SuiteReport s;
    s.name = "q";
    s.pass = rep.corrected_hold();
    s.detail = {{"nu", nu.str()},
                {"order", rep.N},
                {"reference_hold", rep.reference_hold()},
                {"corrected_hold", rep.corrected_hold()},
                {"checks", checks}};
    return s;
}

SuiteReport oracle_suite(const Scalar& nu, int order) {
    const int N = std::min(order, kDefaultOracleCap);
    std::vector<OracleTable> tables;
    for (int p = 1; p <= 4; ++p) tables.push_back(build_oracle_table({MapKind::pgon, p}, N));
    const OracleTable sphere = build_oracle_table({MapKind::sphere, 0}, N);
    DobrushinTable dob = solve_dobrushin(nu, N + 1);
    WordTable table(dob);
    int compared = 0;
    json bad = json::array();
    auto compare = [&](const std::string& what, const TSeries& engine, const TSeries& oracle) {
        ++compared;
        int k = first_difference(engine.truncated(N), oracle.truncated(N), N);
        if (k >= 0) bad.push_back({{"series", what}, {"order", k}});
    };
    for (const auto& w : all_words(4)) {
        const TSeries oracle = tables[w.size() - 1].series(w, nu);
        compare(w, table.series(w), oracle);
        // words of the form ⊕^p ⊖^q also come straight out of the two-variable system
        SpinWord v = w[0] == '+' ? w : flip_word(w);
        if (v.find("-+") == std::string::npos) compare(w + " (dobrushin)", dob.word(w), oracle);
    }
    compare("sphere", sphere_series(dob, N), sphere.total(nu));
    SuiteReport s;
    s.name = "oracle";
    s.pass = bad.empty();
    s.detail = {{"nu", nu.str()}, {"order", N}, {"series_compared", compared}, {"mismatches", bad}};
    return s;
}

CriterionResult run_criterion(int id, std::uint64_t seed) {
    const auto start = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
        switch (id) {
        case 1: r = critical_constants(); break;
        case 2: r = oracle_equivalence(); break;
        case 3: r = catalytic_residual(); break;
        case 4: r = q_identities(); break;
        case 5: r = u_consistency(); break;
        case 6: r = spectral_at_critical(); break;
        case 7: r = hull_at_critical(); break;
        case 8: r = exponent_transition(); break;
        case 9: r = growth_at_one(); break;
        case 10: r = sampler_correctness(seed); break;
        case 11: r = structural_invariants(seed); break;
        default: throw std::out_of_range("no criterion " + std::to_string(id));
        }
    } catch (const std::out_of_range&) {
        throw;
    } catch (const std::exception& e) {
        r.id = id;
        r.pass = false;
        r.summary = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

std::vector<CriterionResult> run_criteria(const std::vector<int>& ids, std::uint64_t seed) {
    std::vector<CriterionResult> out;
    for (int id : ids) out.push_back(run_criterion(id, seed));
    return out;
}

nlohmann::json criteria_json(const std::vector<CriterionResult>& results) {
    json arr = json::array();
    int passed = 0;
    for (const auto& r : results) {
        passed += r.pass;
        arr.push_back({{"id", r.id}, {"title", r.title}, {"pass", r.pass}, {"summary", r.summary}, {"seconds", r.seconds}, {"detail", r.detail}});
    }
    return {{"criteria", arr}, {"passed", passed}, {"total", results.size()}};
}

std::string criterion_line(const CriterionResult& r) {
    return std::string(r.pass ? "[PASS]" : "[FAIL]") + " criterion " + std::to_string(r.id) + " " + r.title + ": " + r.summary;
}

std::string criteria_table(const std::vector<CriterionResult>& results) {
    std::ostringstream s;
    int passed = 0;
    for (const auto& r : results) {
        s << criterion_line(r) << "  (" << fmt(r.seconds, 3) << " s)\n";
        passed += r.pass;
    }
    s << passed << "/" << results.size() << " criteria pass\n";
    return s.str();
}

} // namespace ising
