#include "ising/criticality.hpp"

#include "ising/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ising {

Scalar nu_critical() { return Scalar(Rational(1), Rational(1, 7)); }
Scalar rho_critical() { return Scalar(Rational(-55, 864), Rational(25, 864)); }
Scalar y_critical() { return Scalar(Rational(3, 5), Rational(3, 5)); }

std::vector<Scalar> P1_coeffs(const Scalar& nu) {
    const Scalar one(1);
    const Scalar nm1 = nu - one;
    return {
        nm1 * (Scalar(4) * nu * nu - Scalar(8) * nu - Scalar(23)),
        Scalar(-48) * nu.pow(3) * nm1 * nm1,
        Scalar(-192) * nu.pow(6) * (Scalar(3) * nu + Scalar(5)) * nm1 * (Scalar(3) * nu - Scalar(11)),
        Scalar(131072) * nu.pow(9),
    };
}

std::vector<Scalar> P2_coeffs(const Scalar& nu) {
    const Scalar nm2 = nu - Scalar(2);
    return {
        (Scalar(7) * nu * nu - Scalar(14) * nu - Scalar(9)) * nm2 * nm2,
        Scalar(864) * nu * (nu - Scalar(1)) * (nu * nu - Scalar(2) * nu - Scalar(1)),
        Scalar(27648) * nu.pow(4),
    };
}

namespace {

Scalar horner(const std::vector<Scalar>& c, const Scalar& x) {
    Scalar acc;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
}

int sign_at(const std::vector<Scalar>& c, const Rational& x) { return horner(c, Scalar(x)).sign(); }

std::vector<Scalar> derivative(const std::vector<Scalar>& c) {
    std::vector<Scalar> d;
    for (size_t i = 1; i < c.size(); ++i) d.push_back(c[i] * Scalar(static_cast<long>(i)));
    return d;
}

std::vector<Scalar> trimmed(std::vector<Scalar> c) {
    while (!c.empty() && c.back().is_zero()) c.pop_back();
    return c;
}

// Refine a sign change on [lo, hi] by bisection with exact signs.
RootInterval bisect(const std::vector<Scalar>& c, Rational lo, Rational hi, const Rational& width) {
    int slo = sign_at(c, lo);
    if (slo == 0) return {lo, lo, Scalar(lo)};
    if (sign_at(c, hi) == 0) return {hi, hi, Scalar(hi)};
    while (hi - lo > width) {
        Rational mid = (lo + hi) / 2;
        int s = sign_at(c, mid);
        if (s == 0) return {mid, mid, Scalar(mid)};
        (s == slo ? lo : hi) = mid;
    }
    return {lo, hi, std::nullopt};
}

// Real roots in the open interval (lo, hi): split at the critical points, then
// bisect every monotone piece that changes sign.
std::vector<RootInterval> real_roots(const std::vector<Scalar>& c, const Rational& lo, const Rational& hi,
                                     const Rational& width) {
    std::vector<RootInterval> out;
    if (c.size() < 2) return out;
    std::vector<Rational> cuts{lo};
    if (c.size() > 2) {
        Rational coarse = width * 1024;
        for (const auto& r : real_roots(trimmed(derivative(c)), lo, hi, coarse))
            cuts.push_back(r.exact ? r.lo : (r.lo + r.hi) / 2);
    }
    cuts.push_back(hi);
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        const Rational &a = cuts[i], &b = cuts[i + 1];
        if (a >= b) continue;
        int sa = sign_at(c, a), sb = sign_at(c, b);
        if (sa == 0 && i > 0) {
            if (out.empty() || out.back().hi < a) out.push_back({a, a, Scalar(a)});
            continue;
        }
        if (sa != 0 && sb != 0 && sa != sb) out.push_back(bisect(c, a, b, width));
    }
    if (sign_at(c, hi) == 0 && hi > lo) out.push_back({hi, hi, Scalar(hi)});
    return out;
}

Rational cauchy_bound(const std::vector<Scalar>& c) {
    double lead = std::abs(c.back().to_double()), m = 0;
    for (size_t i = 0; i + 1 < c.size(); ++i) m = std::max(m, std::abs(c[i].to_double()) / lead);
    return Rational(mpz_class(static_cast<unsigned long>(std::ceil(m)) + 2));
}

std::pair<Rational, Rational> sqrt7_bounds() {
    BigInterval s = Scalar::sqrt7().to_interval(256);
    mpq_class lo, hi;
    mpfr_get_q(lo.get_mpq_t(), s.lo());
    mpfr_get_q(hi.get_mpq_t(), s.hi());
    return {lo, hi};
}

// Try to recognise the root as a + b sqrt7 by pairing it with a real root of the
// conjugate polynomial.
std::optional<Scalar> recognise(const std::vector<Scalar>& c, const RootInterval& r,
                                const std::vector<RootInterval>& conj_roots) {
    const auto [s_lo, s_hi] = sqrt7_bounds();
    for (const auto& q : conj_roots) {
        Rational a = simplest_between((r.lo + q.lo) / 2, (r.hi + q.hi) / 2);
        Rational dlo = (r.lo - q.hi) / 2, dhi = (r.hi - q.lo) / 2;
        Rational cands[4] = {dlo / s_lo, dlo / s_hi, dhi / s_lo, dhi / s_hi};
        Rational blo = *std::min_element(cands, cands + 4), bhi = *std::max_element(cands, cands + 4);
        Scalar x(a, simplest_between(blo, bhi));
        if (horner(c, x).is_zero()) return x;
    }
    return std::nullopt;
}

double rational_double(const Rational& q) { return q.get_d(); }

Estimate interval(double lo, double hi) { return {lo, 0.5 * (lo + hi), hi}; }

Estimate mul(const Estimate& a, const Estimate& b) {
    double p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
    return {*std::min_element(p, p + 4), a.mid * b.mid, *std::max_element(p, p + 4)};
}
Estimate scale(double s, const Estimate& a) {
    return s >= 0 ? Estimate{s * a.lo, s * a.mid, s * a.hi} : Estimate{s * a.hi, s * a.mid, s * a.lo};
}
Estimate sub(const Estimate& a, const Estimate& b) { return {a.lo - b.hi, a.mid - b.mid, a.hi - b.lo}; }
Estimate recip(const Estimate& a) {
    if (a.lo <= 0) throw NegativeEntry("reciprocal of an interval containing 0");
    return {1 / a.hi, 1 / a.mid, 1 / a.lo};
}
Estimate constant(double v) { return {v, v, v}; }

// sum_{j >= 0} (a + j)^-s for a > 1, s > 1, by Euler-Maclaurin
double hurwitz_zeta(double s, double a) {
    const int M = 12;
    double sum = 0;
    for (int j = 0; j < M; ++j) sum += std::pow(a + j, -s);
    double x = a + M;
    sum += std::pow(x, 1 - s) / (s - 1) + 0.5 * std::pow(x, -s);
    // Bernoulli corrections B2/2!, B4/4!, B6/6!
    double term = s * std::pow(x, -s - 1);
    sum += term / 12.0;
    term *= (s + 1) * (s + 2) / (x * x);
    sum -= term / 720.0;
    term *= (s + 3) * (s + 4) / (x * x);
    sum += term / 30240.0;
    return sum;
}

struct NonzeroTerm {
    int k;
    double c;
};

std::vector<NonzeroTerm> nonzero_terms(const TSeries& s) {
    std::vector<NonzeroTerm> out;
    for (const auto& [k, v] : s.coeffs()) out.push_back({k, v.to_double()});
    return out;
}

} // namespace

double RootInterval::approx() const {
    if (exact) return exact->to_double();
    return rational_double((lo + hi) / 2);
}

Scalar P1(const Scalar& nu, const Scalar& rho) { return horner(P1_coeffs(nu), rho); }
Scalar P2(const Scalar& nu, const Scalar& rho) { return horner(P2_coeffs(nu), rho); }

std::vector<RootInterval> positive_roots(const std::vector<Scalar>& coeffs, const Rational& width) {
    auto c = trimmed(coeffs);
    if (c.size() < 2) return {};
    std::vector<Scalar> conj;
    for (const auto& x : c) conj.push_back(x.conjugate());
    const Rational B = std::max(cauchy_bound(c), cauchy_bound(conj));

    auto roots = real_roots(c, Rational(0), B, width);
    // the conjugate of a root a + b sqrt7 is a root of the conjugate polynomial, which
    // for rational coefficients is the polynomial itself
    const auto conj_roots = real_roots(conj, -B, B, width);

    std::vector<RootInterval> out;
    for (auto& r : roots) {
        if (r.hi <= 0) continue;
        if (!r.exact) {
            if (Rational q = simplest_between(r.lo, r.hi); horner(c, Scalar(q)).is_zero())
                r.exact = Scalar(q);
            else
                r.exact = recognise(c, r, conj_roots);
        }
        out.push_back(r);
    }
    return out;
}

std::string regime_name(Regime r) {
    switch (r) {
    case Regime::subcritical: return "subcritical";
    case Regime::critical: return "critical";
    case Regime::supercritical: return "supercritical";
    }
    return "?";
}

Estimate ratio_growth(const TSeries& series, int burn_in) {
    auto terms = nonzero_terms(series);
    std::vector<double> n, r;
    for (size_t i = 0; i + 1 < terms.size(); ++i) {
        double ni = terms[i].k / 3.0;
        if (ni < burn_in) continue;
        double step = (terms[i + 1].k - terms[i].k) / 3.0;
        n.push_back(ni);
        r.push_back(std::pow(terms[i + 1].c / terms[i].c, 1.0 / step));
    }
    if (r.size() < 4) throw InsufficientOrder("ratio growth needs at least 4 ratios past the burn-in");
    // r_n = G (1 + a/n + b/n^2 + ...): eliminate a, then b
    std::vector<double> r1, n1, r2;
    for (size_t i = 1; i < r.size(); ++i) {
        r1.push_back((n[i] * r[i] - n[i - 1] * r[i - 1]) / (n[i] - n[i - 1]));
        n1.push_back(n[i]);
    }
    for (size_t i = 1; i < r1.size(); ++i) {
        double a = n1[i] * n1[i], b = n1[i - 1] * n1[i - 1];
        r2.push_back((a * r1[i] - b * r1[i - 1]) / (a - b));
    }
    double last = r2.back(), prev = r2[r2.size() - 2];
    double band = std::abs(last - prev);
    return {last - band, last, last + band};
}

CriticalData critical_point(const Scalar& nu, const CriticalOptions& opt) {
    if (nu.sign() <= 0) throw std::domain_error("nu must be positive");
    CriticalData d;
    d.nu = nu;
    const Scalar nc = nu_critical();
    if (nu < nc) {
        d.regime = Regime::subcritical;
        d.polynomial = "P2";
    } else if (nu > nc) {
        d.regime = Regime::supercritical;
        d.polynomial = "P1";
    } else {
        d.regime = Regime::critical;
        d.polynomial = "P2";
    }
    auto coeffs = d.polynomial == "P1" ? P1_coeffs(nu) : P2_coeffs(nu);
    d.candidates = positive_roots(coeffs, opt.width);
    if (d.candidates.empty()) throw NoPositiveRoot(d.polynomial + " has no positive root at nu = " + nu.str());

    size_t pick = 0;
    if (d.candidates.size() > 1) {
        Estimate g = ratio_growth(sphere_series(nu, opt.ratio_order));
        d.ratio_rho = 1.0 / g.mid;
        double best = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < d.candidates.size(); ++i) {
            double gap = std::abs(std::log(d.candidates[i].approx() / *d.ratio_rho));
            if (gap < best) {
                best = gap;
                pick = i;
            }
        }
        d.match_margin = std::abs(d.candidates[pick].approx() / *d.ratio_rho - 1);
    }
    d.rho = d.candidates[pick];

    const mpfr_prec_t prec = 192;
    BigInterval t(prec);
    if (d.rho.exact) {
        BigInterval r = d.rho.exact->to_interval(prec);
        mpfr_cbrt(t.lo(), r.lo(), MPFR_RNDD);
        mpfr_cbrt(t.hi(), r.hi(), MPFR_RNDU);
    } else {
        mpfr_set_q(t.lo(), d.rho.lo.get_mpq_t(), MPFR_RNDD);
        mpfr_set_q(t.hi(), d.rho.hi.get_mpq_t(), MPFR_RNDU);
        mpfr_cbrt(t.lo(), t.lo(), MPFR_RNDD);
        mpfr_cbrt(t.hi(), t.hi(), MPFR_RNDU);
    }
    d.t_nu = t;
    return d;
}

Estimate eval_partial(const TSeries& series, double t) {
    double s = 0;
    for (const auto& term : nonzero_terms(series)) s += term.c * std::pow(t, term.k);
    return {s, s, s};
}

Estimate eval_at_tnu(const TSeries& series, const CriticalData& crit, double alpha_hint, int min_order) {
    if (series.order() < min_order)
        throw InsufficientOrder("evaluation at t_nu needs order >= " + std::to_string(min_order));
    auto terms = nonzero_terms(series);
    if (terms.empty()) return {};
    for (const auto& term : terms)
        if (term.c < 0) throw std::invalid_argument("evaluation at t_nu expects nonnegative coefficients");
    const double t = crit.t_double();

    std::vector<double> partial;
    double s = 0;
    for (const auto& term : terms) partial.push_back(s += term.c * std::pow(t, term.k));

    // tail after term i, with kappa fitted on that term
    auto with_tail = [&](size_t i) {
        double n = terms[i].k / 3.0;
        double kappa = terms[i].c * std::pow(t, terms[i].k) * std::pow(n, alpha_hint);
        return partial[i] + kappa * hurwitz_zeta(alpha_hint, n + 1);
    };
    const size_t last = terms.size() - 1;
    if (terms.size() < 2 || terms[last].k == 0) return {partial[last], partial[last], partial[last]};
    double e = with_tail(last), e_prev = with_tail(last - 1);
    double n = terms[last].k / 3.0, n_prev = terms[last - 1].k / 3.0;
    double rich = (n * e - n_prev * e_prev) / (n - n_prev);
    double band = std::max(std::abs(e - e_prev), std::abs(rich - e));
    return {std::max(partial[last], e - band), e, e + band};
}

AsymptoticFit estimate_asymptotics(const TSeries& series, double rho, int burn_in) {
    auto terms = nonzero_terms(series);
    if (terms.size() < 10) throw InsufficientOrder("asymptotic fit needs at least 10 nonzero coefficients");
    const int cls = ((terms.front().k % 3) + 3) % 3;
    for (const auto& term : terms)
        if (((term.k % 3) + 3) % 3 != cls) throw std::invalid_argument("series is not supported on one residue class mod 3");

    AsymptoticFit fit;
    std::vector<AsymptoticStep> steps;
    for (size_t i = 0; i + 1 < terms.size(); ++i) {
        double n = terms[i].k / 3.0;
        if (n < burn_in) continue;
        double step = (terms[i + 1].k - terms[i].k) / 3.0;
        AsymptoticStep st;
        st.n = n;
        st.ratio = std::pow(terms[i + 1].c / terms[i].c, 1.0 / step);
        st.alpha = -std::log(st.ratio * rho) / std::log((n + 1) / n);
        if (!steps.empty()) {
            const auto& p = steps.back();
            st.alpha_acc = (n * st.alpha - p.n * p.alpha) / (n - p.n);
        } else {
            st.alpha_acc = st.alpha;
        }
        steps.push_back(st);
    }
    if (steps.size() < 4) throw InsufficientOrder("asymptotic fit needs at least 4 ratios past the burn-in");

    fit.growth = ratio_growth(series, burn_in);
    const auto& a_last = steps.back();
    const auto& a_prev = steps[steps.size() - 2];
    double ab = std::abs(a_last.alpha_acc - a_prev.alpha_acc);
    fit.alpha = {a_last.alpha_acc - ab, a_last.alpha_acc, a_last.alpha_acc + ab};

    auto kappa_at = [&](size_t i) {
        double n = terms[i].k / 3.0;
        return terms[i].c * std::pow(rho, n) * std::pow(n, fit.alpha.mid);
    };
    double k1 = kappa_at(terms.size() - 1), k0 = kappa_at(terms.size() - 2);
    double kb = std::abs(k1 - k0);
    fit.kappa = {k1 - kb, k1, k1 + kb};
    fit.diagnostics = std::move(steps);
    return fit;
}

AsymptoticFit estimate_asymptotics(const TSeries& series, const CriticalData& crit, int burn_in) {
    return estimate_asymptotics(series, crit.rho_double(), burn_in);
}

IntervalMatrix IntervalMatrix::from_doubles(const std::vector<std::vector<double>>& rows) {
    IntervalMatrix m(static_cast<int>(rows.size()));
    for (int i = 0; i < m.n; ++i) {
        if (static_cast<int>(rows[i].size()) != m.n) throw std::invalid_argument("matrix must be square");
        for (int j = 0; j < m.n; ++j) m.at(i, j) = constant(rows[i][j]);
    }
    return m;
}

ZValues evaluate_z(const Scalar& nu, int N, const CriticalData& crit) {
    DobrushinTable table = solve_dobrushin(nu, N);
    const double a = crit.alpha();
    return {eval_at_tnu(table.z1, crit, a), eval_at_tnu(table.z2, crit, a), eval_at_tnu(table.z_pm, crit, a)};
}

MeanMatrix mean_matrix(const CriticalData& crit, const ZValues& z) {
    MeanMatrix mm;
    mm.inputs = z;
    const double nu = crit.nu.to_double();
    const Estimate t = interval(crit.t_nu.lo_double(), crit.t_nu.hi_double());
    mm.nu = nu;
    mm.t_nu = t.mid;
    const double lo_nu = std::min(1.0, nu), hi_nu = std::max(1.0, nu);

    const Estimate tz = mul(t, z.z1);
    const Estimate nutz = scale(nu, tz);
    // (1 ∧ ν)² ρ^{2/3} / (1 − 2 (1 ∧ ν) t Z_⊕), with ρ^{2/3} = t²
    const Estimate X = mul(scale(lo_nu * lo_nu, mul(t, t)), recip(sub(constant(1), scale(2 * lo_nu, tz))));
    const Estimate one = constant(1);

    IntervalMatrix& M = mm.m;
    M.at(0, 0) = scale(2, nutz);
    M.at(0, 1) = mul(scale(nu, t), mul(z.z2, recip(z.z1)));
    M.at(0, 3) = mul(scale(nu, t), mul(z.z_pm, recip(z.z1)));
    M.at(1, 0) = nutz;
    M.at(1, 1) = scale(2, nutz);
    M.at(1, 2) = sub(sub(one, scale(2, nutz)), mul(scale(nu, t), recip(z.z2)));
    M.at(2, 0) = nutz;
    M.at(2, 1) = mul(X, z.z2);
    M.at(2, 2) = sub(one, mul(X, z.z2));
    M.at(3, 0) = tz;
    M.at(3, 3) = scale(2, tz);
    M.at(3, 4) = sub(sub(one, scale(2, tz)), mul(t, recip(z.z_pm)));
    M.at(4, 0) = tz;
    M.at(4, 3) = mul(X, z.z_pm);
    M.at(4, 4) = sub(one, mul(X, z.z_pm));

    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
            if (M.at(i, j).lo < 0)
                throw NegativeEntry("mean matrix entry (" + std::to_string(i) + "," + std::to_string(j) +
                                    ") has lower end " + std::to_string(M.at(i, j).lo));
    for (int i : {2, 4}) {
        int j = i == 2 ? 1 : 3;
        if (M.at(i, j).hi > 1) throw NegativeEntry("probability above 1 in row " + std::to_string(i));
    }

    // offspring laws behind the means; children counted per type index
    auto kids = [](std::initializer_list<std::pair<int, int>> l) {
        std::vector<int> v(5, 0);
        for (auto [type, count] : l) v[type] += count;
        return v;
    };
    const double tm = t.mid, z1 = z.z1.mid;
    mm.offspring.resize(5);
    mm.offspring[0] = {{nu * tm * z1, kids({{0, 2}})},
                       {nu * tm * z.z2.mid / z1, kids({{1, 1}})},
                       {nu * tm * z.z_pm.mid / z1, kids({{3, 1}})}};
    for (auto [type, omega, zab, c] : {std::tuple{1, 2, z.z2.mid, nu}, std::tuple{3, 4, z.z_pm.mid, 1.0}}) {
        double none = c * tm / zab, one_k = c * tm * z1;
        mm.offspring[type] = {{none, kids({})},
                              {one_k, kids({{type, 1}})},
                              {one_k, kids({{0, 1}, {type, 1}})},
                              {1 - none - 2 * one_k, kids({{omega, 1}})}};
        double x = X.mid * zab, branch = hi_nu * tm * z1;
        mm.offspring[omega] = {{x, kids({{type, 1}})},
                               {branch, kids({{0, 1}, {omega, 1}})},
                               {1 - x - branch, kids({{omega, 1}})}};
    }
    return mm;
}

namespace {

// Collatz-Wielandt bounds from power iteration on a nonnegative matrix.
std::pair<double, double> perron_bounds(const std::vector<double>& A, int n, int max_iter, double tol, int& iters) {
    std::vector<double> v(n, 1.0), w(n);
    double lo = 0, hi = std::numeric_limits<double>::infinity();
    for (iters = 1; iters <= max_iter; ++iters) {
        for (int i = 0; i < n; ++i) {
            double s = 0;
            for (int j = 0; j < n; ++j) s += A[i * n + j] * v[j];
            w[i] = s;
        }
        double mn = std::numeric_limits<double>::infinity(), mx = 0, norm = 0;
        for (int i = 0; i < n; ++i) {
            if (v[i] <= 0) continue;
            double q = w[i] / v[i];
            mn = std::min(mn, q);
            mx = std::max(mx, q);
            norm = std::max(norm, w[i]);
        }
        lo = std::max(lo, mn);
        hi = std::min(hi, mx);
        if (hi - lo <= tol * std::max(1.0, hi) || norm == 0) break;
        // strictly positive iterate
        for (int i = 0; i < n; ++i) v[i] = std::max(w[i] / norm, 1e-300);
    }
    return {lo, hi};
}

} // namespace

SpectralResult spectral_radius(const IntervalMatrix& M, int max_iter, double tol) {
    const int n = M.n;
    std::vector<double> lo(n * n), mid(n * n), hi(n * n);
    for (int i = 0; i < n * n; ++i) {
        const auto& e = M.entries[i];
        if (!std::isfinite(e.lo) || !std::isfinite(e.hi)) throw std::invalid_argument("matrix entries must be finite");
        if (e.lo < 0) throw NegativeEntry("spectral bound needs a nonnegative matrix");
        lo[i] = e.lo;
        mid[i] = e.mid;
        hi[i] = e.hi;
    }
    SpectralResult r;
    int it_lo = 0, it_hi = 0, it_mid = 0;
    auto [l, l_up] = perron_bounds(lo, n, max_iter, tol, it_lo);
    auto [h_down, h] = perron_bounds(hi, n, max_iter, tol, it_hi);
    auto [m_lo, m_hi] = perron_bounds(mid, n, max_iter, tol, it_mid);
    (void)l_up;
    (void)h_down;
    const double slack = 1e-12;
    if (m_hi - m_lo > 1e-6 * std::max(1.0, m_hi))
        throw NonConvergence("power iteration did not converge in " + std::to_string(max_iter) + " steps");
    r.lo = l * (1 - slack);
    r.hi = h * (1 + slack);
    r.mid = 0.5 * (m_lo + m_hi);
    r.iterations = std::max({it_lo, it_hi, it_mid});
    return r;
}

HullCheck hull_constant(const CriticalData& crit, const ZValues& z) {
    HullCheck h;
    const double tlo = crit.t_nu.lo_double(), thi = crit.t_nu.hi_double();
    const Estimate& a = z.z2;
    const Estimate& b = z.z_pm;
    h.value = {std::min(a.lo, b.lo) / thi, std::min(a.mid, b.mid) / crit.t_double(), std::min(a.hi, b.hi) / tlo};
    const double s7 = std::sqrt(7.0);
    h.closed_form = 131.0 / 600.0 * (4 - s7) / std::cbrt(50 * s7 - 110);
    h.below_y_c = Scalar(Rational(h.value.hi)) < y_critical();
    return h;
}

nlohmann::json Estimate::to_json() const { return {{"lo", lo}, {"mid", mid}, {"hi", hi}}; }

nlohmann::json CriticalData::to_json() const {
    auto root_json = [](const RootInterval& r) {
        nlohmann::json j{{"lo", rational_str(r.lo)}, {"hi", rational_str(r.hi)}, {"approx", r.approx()}};
        j["exact"] = r.exact ? nlohmann::json(r.exact->str()) : nlohmann::json(nullptr);
        return j;
    };
    nlohmann::json j;
    j["nu"] = nu.str();
    j["regime"] = regime_name(regime);
    j["polynomial"] = polynomial;
    j["rho"] = root_json(rho);
    j["t_nu"] = {{"lo", t_nu.lo_str(40)}, {"hi", t_nu.hi_str(40)}, {"approx", t_double()}};
    j["candidates"] = nlohmann::json::array();
    for (const auto& c : candidates) j["candidates"].push_back(root_json(c));
    j["ratio_rho"] = ratio_rho ? nlohmann::json(*ratio_rho) : nlohmann::json(nullptr);
    j["match_margin"] = match_margin;
    return j;
}

nlohmann::json AsymptoticFit::to_json() const {
    nlohmann::json d = nlohmann::json::array();
    for (const auto& s : diagnostics)
        d.push_back({{"n", s.n}, {"ratio", s.ratio}, {"alpha", s.alpha}, {"alpha_acc", s.alpha_acc}});
    return {{"growth", growth.to_json()}, {"alpha", alpha.to_json()}, {"kappa", kappa.to_json()}, {"diagnostics", d}};
}

nlohmann::json MeanMatrix::to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < 5; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j < 5; ++j) row.push_back(m.at(i, j).to_json());
        rows.push_back(row);
    }
    nlohmann::json types = nlohmann::json::array();
    for (const char* s : kTypes) types.push_back(s);
    return {{"types", types},
            {"entries", rows},
            {"t_nu", t_nu},
            {"nu", nu},
            {"z1", inputs.z1.to_json()},
            {"z2", inputs.z2.to_json()},
            {"z_pm", inputs.z_pm.to_json()}};
}

nlohmann::json SpectralResult::to_json() const {
    return {{"lo", lo}, {"mid", mid}, {"hi", hi}, {"iterations", iterations}};
}

nlohmann::json HullCheck::to_json() const {
    return {{"value", value.to_json()}, {"closed_form", closed_form}, {"below_y_c", below_y_c}};
}

} // namespace ising
