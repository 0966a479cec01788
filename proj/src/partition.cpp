#include "ising/partition.hpp"

#include <algorithm>
#include <set>

namespace ising {

namespace {

// (W - x [x^1] W) / x, i.e. the x^i terms with i >= 2 moved down one degree
BivSeries drop_x1_div_x(const BivSeries& w) {
    BivSeries r(w.nu(), w.order(), w.dx(), w.dy());
    for (int k = 0; k <= w.order(); ++k)
        for (const auto& [ij, v] : w.at_order(k))
            if (ij.first >= 2) r.set(k, ij.first - 1, ij.second, v);
    return r;
}

BivSeries drop_y1_div_y(const BivSeries& w) {
    BivSeries r(w.nu(), w.order(), w.dx(), w.dy());
    for (int k = 0; k <= w.order(); ++k)
        for (const auto& [ij, v] : w.at_order(k))
            if (ij.second >= 2) r.set(k, ij.first, ij.second - 1, v);
    return r;
}

} // namespace

TSeries DobrushinTable::word(const SpinWord& w) const {
    if (!is_valid_word(w)) throw ParseError("bad spin word");
    SpinWord v = w[0] == '+' ? w : flip_word(w);
    int p = 0;
    while (p < static_cast<int>(v.size()) && v[p] == '+') ++p;
    int q = static_cast<int>(v.size()) - p;
    if (!std::all_of(v.begin() + p, v.end(), [](char c) { return c == '-'; }))
        throw SeedMissing("word " + w + " is not of Dobrushin form");
    if (q == 0) return zplus.coeff_xy(p, 0);
    return zpm.coeff_xy(p, q);
}

DobrushinTable solve_dobrushin(const Scalar& nu, int N, int degree_cap) {
    if (nu.sign() <= 0) throw std::domain_error("nu must be positive");
    if (N < 1) throw std::invalid_argument("order must be >= 1");
    const int D = degree_cap < 0 ? N + 1 : degree_cap;

    SeriesBundle zero;
    zero.parts.emplace("zplus", BivSeries(nu, N, D, 0));
    zero.parts.emplace("zpm", BivSeries(nu, N, D, D));

    FixedPointSpec<SeriesBundle> spec;
    spec.name = "dobrushin";
    spec.update = [&nu, N, D](const SeriesBundle& cur, int lo, int hi) {
        const BivSeries& Z = cur["zplus"];
        const BivSeries& W = cur["zpm"];
        SeriesBundle out;
        BivSeries zr(nu, N, D, 0), wr(nu, N, D, D);
        if (lo <= 1 && 1 <= hi) {
            zr.add_to(1, 2, 0, nu);      // ν t x^2
            wr.add_to(1, 1, 1, Scalar(1)); // t x y
        }
        const int mlo = lo - 1, mhi = hi - 1;
        if (mhi >= 0) {
            BivSeries Zw = Z.window(mlo, mhi), Ww = W.window(mlo, mhi);
            // Z+ = νtx² + (νt/x)(Z+)² + (νt/x)(Z+ − xZ+_1) + νt[y¹]W
            BivSeries zin = BivSeries::mul_window(Z, Z, mlo, mhi).div_x();
            zin += drop_x1_div_x(Zw);
            zin += Ww.slice_y(1).with_caps(D, 0);
            zr += zin.scaled(nu).shifted_t(1).with_caps(D, 0);

            // W = txy + (t/x)W Z+(x) + (t/y)W Z+(y) + (t/x)(W − x[x¹]W) + (t/y)(W − y[y¹]W)
            BivSeries Zy = Z.swapped_xy();
            BivSeries win = BivSeries::mul_window(W, Z, mlo, mhi).div_x();
            win += BivSeries::mul_window(W, Zy, mlo, mhi).div_y();
            win += drop_x1_div_x(Ww);
            win += drop_y1_div_y(Ww);
            wr += win.shifted_t(1).with_caps(D, D);
        }
        out.parts.emplace("zplus", std::move(zr));
        out.parts.emplace("zpm", std::move(wr));
        return out;
    };

    SeriesBundle sol = solve_fixed_point(spec, std::move(zero), N);
    DobrushinTable t;
    t.nu = nu;
    t.N = N;
    t.zplus = sol["zplus"];
    t.zpm = sol["zpm"];
    t.z1 = t.zplus.coeff_xy(1, 0);
    t.z2 = t.zplus.coeff_xy(2, 0);
    t.z_pm = t.zpm.coeff_xy(1, 1);
    return t;
}

WordTable::WordTable(const DobrushinTable& seeds)
    : WordTable(seeds.nu, seeds.N, {{"+", seeds.z1}, {"++", seeds.z2}, {"+-", seeds.z_pm}}) {}

WordTable::WordTable(Scalar nu, int N, std::map<SpinWord, TSeries> seeds) : nu_(std::move(nu)), N_(N) {
    for (auto& [w, s] : seeds) {
        if (w.size() > 2) throw std::invalid_argument("seeds are words of length 1 or 2");
        if (s.order() < N) throw SeedMissing("seed " + w + " has order " + std::to_string(s.order()));
        seeds_[canonical_word(w)] = std::move(s);
    }
}

Scalar WordTable::seed_coeff(const SpinWord& canon, int n) const {
    auto it = seeds_.find(canon);
    if (it == seeds_.end()) throw SeedMissing("no series for boundary word " + canon);
    return it->second.coeff(n);
}

Scalar WordTable::coeff(const SpinWord& w, int n) {
    if (!is_valid_word(w)) throw ParseError("bad spin word");
    if (n > N_) throw SeedMissing("coefficient t^" + std::to_string(n) + " beyond table order " + std::to_string(N_));
    const int p = static_cast<int>(w.size());
    if (n < 0 || !in_support(p, n)) return Scalar();
    SpinWord canon = canonical_word(w);
    if (p <= 2) return seed_coeff(canon, n);
    auto key = std::make_pair(canon, n);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    // Root edge joins the last letter to the first; deleting it either exposes a
    // new inner vertex or splits the face at one of the boundary vertices.
    Scalar sum;
    for (char a : {'+', '-'}) sum += coeff(std::string(1, a) + canon, n - 1);
    for (int i = 1; i <= p; ++i) {
        SpinWord left = canon.substr(0, i), right = canon.substr(i - 1);
        const int ml = min_degree(i), mr = min_degree(p - i + 1);
        for (int n1 = ml; n1 + mr <= n - 1; ++n1) {
            if (!in_support(i, n1) || !in_support(p - i + 1, n - 1 - n1)) continue;
            Scalar l = coeff(left, n1);
            if (l.is_zero()) continue;
            Scalar r = coeff(right, n - 1 - n1);
            if (!r.is_zero()) sum += l * r;
        }
    }
    if (canon.front() == canon.back()) sum *= nu_;
    memo_.emplace(key, sum);
    return sum;
}

TSeries WordTable::series(const SpinWord& w) {
    TSeries s(nu_, N_);
    for (int n = 0; n <= N_; ++n) s.set(n, coeff(w, n));
    return s;
}

TSeries solve_word(const SpinWord& omega, const Scalar& nu, int N, WordTable& table) {
    if (!(table.nu() == nu)) throw SeedMissing("word table built for nu = " + table.nu().str());
    if (table.order() < N) throw SeedMissing("word table order " + std::to_string(table.order()) + " < " + std::to_string(N));
    if (omega.size() < 3) throw std::invalid_argument("solve_word expects |omega| >= 3; shorter words are seeds");
    return table.series(omega).truncated(N);
}

TSeries sphere_series(const DobrushinTable& table, int N) {
    if (table.N < N + 1) throw SeedMissing("sphere series at order " + std::to_string(N) + " needs the table at order " + std::to_string(N + 1));
    const Scalar inv_nu = table.nu.inverse();
    TSeries s = table.z2.scaled(inv_nu) + table.z_pm + (table.z1 * table.z1).scaled(inv_nu);
    s = s.scaled(Scalar(2)).shifted(-1).truncated(N);
    s.set(0, Scalar()); // the edge-triangulation of the 2-gon closes up to no triangulation
    return s;
}

TSeries sphere_series(const Scalar& nu, int N) { return sphere_series(solve_dobrushin(nu, N + 1), N); }

namespace {

TSeries constant(const Scalar& nu, int N, const Scalar& c) { return TSeries::monomial(nu, N, 0, c); }

// U((1+ν)U − 2)(8ν(ν+1)²U³ − (11ν+13)(ν+1)U² + 2(ν+3)(2ν+1)U − 4ν)
TSeries U_numerator(const TSeries& U) {
    const Scalar& nu = U.nu();
    const int N = U.order();
    const Scalar one(1);
    TSeries U2 = U * U, U3 = U2 * U;
    TSeries first = U.scaled(one + nu) - constant(nu, N, Scalar(2));
    TSeries second = U3.scaled(Scalar(8) * nu * (nu + one) * (nu + one)) -
                     U2.scaled((Scalar(11) * nu + Scalar(13)) * (nu + one)) +
                     U.scaled(Scalar(2) * (nu + Scalar(3)) * (Scalar(2) * nu + one)) -
                     constant(nu, N, Scalar(4) * nu);
    return U * first * second;
}

} // namespace

TSeries solve_U(const Scalar& nu, int N) {
    if (nu.sign() <= 0) throw std::domain_error("nu must be positive");
    FixedPointSpec<TSeries> spec;
    spec.name = "U";
    spec.gain = 3;
    // 32ν³(1−2U)²t³ = P(U) with P(U) = 8νU + O(U²), so
    // U = 4ν²(1−2U)²t³ − (P(U) − 8νU)/(8ν)
    spec.update = [nu, N](const TSeries& U, int, int hi) {
        TSeries Uh = U.truncated(hi);
        const int M = Uh.order();
        TSeries one_minus = constant(nu, M, Scalar(1)) - Uh.scaled(Scalar(2));
        TSeries lead = (one_minus * one_minus).shifted(3).truncated(M).scaled(Scalar(4) * nu * nu);
        TSeries rest = U_numerator(Uh) - Uh.scaled(Scalar(8) * nu);
        TSeries r = lead - rest.scaled((Scalar(8) * nu).inverse());
        TSeries full(nu, N);
        for (const auto& [k, v] : r.coeffs()) full.set(k, v);
        return full;
    };
    return solve_fixed_point(spec, TSeries(nu, N), N);
}

TSeries U_relation_rhs(const TSeries& U) {
    const Scalar& nu = U.nu();
    const int N = U.order();
    TSeries one_minus = constant(nu, N, Scalar(1)) - U.scaled(Scalar(2));
    TSeries den = (one_minus * one_minus).scaled(Scalar(32) * nu.pow(3));
    return U_numerator(U) * den.inverse();
}

TSeries zplus_recursion(int p, const Scalar& nu, int N, const DobrushinTable& table) {
    if (p < 3) throw std::invalid_argument("recursion starts at p = 3");
    if (nu == Scalar(1)) throw Degenerate("the y^p recursion divides by 1 - nu");
    if (!(table.nu == nu)) throw SeedMissing("table built for nu = " + table.nu.str());
    if (table.N < N + p - 1)
        throw SeedMissing("recursion for p = " + std::to_string(p) + " to order " + std::to_string(N) +
                          " needs the table at order " + std::to_string(N + p - 1));
    const int M = N + p;
    const Scalar one(1);
    auto mono = [&](int k, const Scalar& c) { return TSeries::monomial(nu, M, k, c); };
    TSeries zero(nu, M);

    // S[q] = t^q Z_{⊕^q}, so that Z+(ty) = Σ S[q] y^q
    std::vector<TSeries> S(p + 1, zero);
    S[1] = table.z1.shifted(1).truncated(M);
    S[2] = table.z2.shifted(2).truncated(M);
    TSeries tZ1 = S[1];
    auto at = [&](int q) -> const TSeries& { return q >= 1 ? S[q] : zero; };
    auto conv2 = [&](int r) {
        TSeries acc = zero;
        for (int i = 1; i < r; ++i) acc += S[i] * S[r - i];
        return acc;
    };
    auto conv3 = [&](int r) {
        TSeries acc = zero;
        for (int i = 1; i < r; ++i)
            for (int j = 1; i + j < r; ++j) acc += S[i] * S[j] * S[r - i - j];
        return acc;
    };

    const Scalar nu2 = nu * nu;
    const Scalar lin = nu2 + nu - Scalar(2); // (ν+2)(ν−1)
    for (int q = 3; q <= p; ++q) {
        TSeries T = conv3(q).scaled(Scalar(2) * nu * (one - nu));
        T -= (mono(3, nu2) * (q >= 4 ? conv2(q - 2) : zero));
        T += conv2(q - 1).scaled(lin);
        T -= conv2(q).scaled(Scalar(4) * nu * (nu - one));
        T += (tZ1.scaled(Scalar(2) * nu * (nu - one)) + mono(0, lin)) * S[q - 1];
        T += (mono(0, one - nu) - mono(3, Scalar(2) * nu2)) * S[q - 2];
        T += mono(3, Scalar(3) * nu - Scalar(2) * nu2) * at(q - 3);
        if (q == 3) T += tZ1.shifted(3).truncated(M).scaled(Scalar(2) * nu2) - mono(3, nu * (nu - one));
        if (q == 4) T += mono(3, nu * (nu - one));
        if (q == 5) T -= mono(6, nu2);
        S[q] = T.scaled(-(Scalar(2) * nu * (one - nu)).inverse());
    }
    return S[p].shifted(-p).truncated(N);
}

int CatalyticReport::first_nonzero_order() const {
    for (int k = 0; k <= residual.order(); ++k)
        if (!residual.at_order(k).empty()) return k;
    return -1;
}

CatalyticReport verify_catalytic(const Scalar& nu, int N, const DobrushinTable& table, PolTranscription pol) {
    if (table.N < N) throw SeedMissing("catalytic check to order " + std::to_string(N) + " needs the table at that order");
    const int D = 3 * (N + 4);
    const Scalar one(1), two(2);
    auto mono = [&](int k, int j, const Scalar& c) {
        BivSeries b(nu, N, 0, D);
        b.set(k, 0, j, c);
        return b;
    };
    auto lift = [&](const TSeries& s) {
        return BivSeries::from_tseries(s.truncated(N), 0, 0, 0, D);
    };

    BivSeries Zy(nu, N, 0, D);
    for (int k = 0; k <= N; ++k)
        for (const auto& [ij, v] : table.zplus.at_order(k)) Zy.set(k, 0, ij.first, v);
    BivSeries a = Zy.div_y(1);
    BivSeries a1 = lift(table.z1), a2 = lift(table.z2);

    const Scalar nu2 = nu * nu;
    const Scalar c4 = pol == PolTranscription::corrected ? Scalar(4) * nu * (nu - one) : Scalar(4) * nu * (one - nu);
    const Scalar two_minus = two - nu * (one + nu);

    BivSeries P = mono(2, 1, nu * (nu - one)) + mono(1, 2, nu * (one - nu)) + mono(3, 3, nu2);
    P += mono(2, 0, two * nu * (one - nu)) * a2;
    P -= (mono(3, 1, two * nu2) + mono(1, 0, two_minus)) * a1;
    P += mono(2, 0, two * nu * (one - nu)) * a1 * a1;
    P += mono(2, 0, two * nu * (one - nu)) * a1 * a;
    P += (mono(1, 0, two_minus) + mono(0, 1, nu - one) + mono(3, 1, two * nu2) + mono(2, 2, nu * (two * nu - Scalar(3)))) * a;
    P += (mono(3, 2, nu2) + mono(1, 1, two_minus) + mono(2, 0, c4)) * a * a;
    P += mono(2, 1, two * nu * (nu - one)) * a * a * a;

    BivSeries yP = P.times_y(1);
    CatalyticReport rep;
    rep.nu = nu;
    rep.N = N;
    if (nu == one) {
        rep.degenerate = true;
        rep.residual = yP;
        return rep;
    }
    BivSeries lhs = mono(2, 0, two * nu * (one - nu)) * (a - a1);
    rep.residual = lhs - yP;
    return rep;
}

int first_difference(const TSeries& a, const TSeries& b, int n) {
    for (int k = 0; k <= n; ++k)
        if (!(a.coeff(k) == b.coeff(k))) return k;
    return -1;
}

bool QIdentityReport::all_hold() const {
    return std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.holds; });
}

bool QIdentityReport::reference_hold() const {
    return std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.supplementary || c.holds; });
}

bool QIdentityReport::corrected_hold() const {
    std::set<std::string> superseded;
    for (const auto& c : checks)
        if (!c.replaces.empty()) superseded.insert(c.replaces);
    return std::all_of(checks.begin(), checks.end(), [&](const IdentityCheck& c) {
        if (!c.replaces.empty()) return c.holds;
        return c.supplementary || superseded.count(c.name) || c.holds;
    });
}

QIdentityReport check_q_identities(const Scalar& nu, int N, int oracle_cap) {
    const int n = std::min(N, oracle_cap - 1);
    const int M = n + 1;
    QIdentityReport rep;
    rep.nu = nu;
    rep.N = n;

    TSeries Q[4];
    for (int p = 1; p <= 3; ++p) Q[p] = oracle_Q(p, nu, M, oracle_cap);
    DobrushinTable dob = solve_dobrushin(nu, M);
    WordTable words(dob);
    TSeries z3 = words.series("+++"), z21 = words.series("++-");
    const Scalar one(1);
    auto t = [&](int k) { return TSeries::monomial(nu, M, k, one); };

    auto record = [&](std::string name, const TSeries& lhs, const TSeries& rhs, bool supplementary, std::string note = "") {
        IdentityCheck c;
        c.name = std::move(name);
        c.checked_to = n;
        c.first_failure = first_difference(lhs, rhs, n);
        c.holds = c.first_failure < 0;
        c.supplementary = supplementary;
        c.note = std::move(note);
        rep.checks.push_back(std::move(c));
    };

    record("Q1 = nu t Q2", Q[1], (t(1) * Q[2]).scaled(nu), false);
    record("Z++ + Z+- = Q2 - Q1^2", dob.z2 + dob.z_pm, Q[2] - Q[1] * Q[1], false);
    record("Z+++ + 3 Z++- = Q3 - Q1 Q2", z3 + z21.scaled(Scalar(3)), Q[3] - Q[1] * Q[2], false);
    if (nu == one) {
        IdentityCheck c;
        c.name = "Z2+ formula in Q1, Q3";
        c.note = "skipped: requires nu != 1";
        c.holds = true;
        rep.checks.push_back(c);
    } else {
        const Scalar inv = (one - nu).inverse();
        TSeries rhs = t(1).scaled(Scalar(2) * nu * inv) + (t(1) * Q[3]).scaled(nu * inv) -
                      Q[1].shifted(-1).scaled(inv) - Q[1] * Q[1];
        record("Z2+ formula in Q1, Q3", dob.z2.truncated(n), rhs.truncated(n), false);
    }
    record("Q1 = Z+", Q[1], dob.z1, true);
    record("Z+++ + 3 Z++- = Q3 - 3 Q1 Q2 + 2 Q1^3", z3 + z21.scaled(Scalar(3)),
           Q[3] - (Q[1] * Q[2]).scaled(Scalar(3)) + (Q[1] * Q[1] * Q[1]).scaled(Scalar(2)), true,
           "a non-simple 3-gon boundary can be pinched at any of its three corners");
    rep.checks.back().replaces = "Z+++ + 3 Z++- = Q3 - Q1 Q2";
    return rep;
}

} // namespace ising
