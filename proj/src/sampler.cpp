#include "ising/sampler.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

namespace ising {

namespace {

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

} // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), state_(mix64(seed ^ mix64(stream + kGamma))) {}

std::uint64_t Rng::next() { return mix64(state_ += kGamma); }

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below(0)");
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do x = next();
    while (x >= limit);
    return x % n;
}

size_t Rng::choose(const std::vector<double>& weights) {
    double total = 0;
    for (double w : weights) {
        if (w < 0 || !std::isfinite(w)) throw std::invalid_argument("weights must be finite and nonnegative");
        total += w;
    }
    if (total <= 0) throw std::invalid_argument("weights sum to zero");
    double u = uniform() * total;
    size_t last = 0;
    for (size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] <= 0) continue;
        last = i;
        if (u < weights[i]) return i;
        u -= weights[i];
    }
    return last;
}

std::string peel_case_name(PeelCase c) {
    switch (c) {
    case PeelCase::edge_triangulation: return "edge_triangulation";
    case PeelCase::new_vertex: return "new_vertex";
    case PeelCase::boundary_reattach: return "boundary_reattach";
    case PeelCase::branch: return "branch";
    }
    return "?";
}

namespace {

// Darts under construction. A hole is a cyclic list of darts H_1..H_p whose face
// on the hole side is still unknown; H_k runs from v_k to v_{k+1} and H_p is the
// edge peeled next.
struct Builder {
    std::vector<int> tail, alpha, phi;
    std::vector<char> alive;
    std::vector<int> vspin;
    int root = -1;

    int vertex(int spin) {
        vspin.push_back(spin);
        return static_cast<int>(vspin.size()) - 1;
    }
    int dart(int from) {
        tail.push_back(from);
        alpha.push_back(-1);
        phi.push_back(-1);
        alive.push_back(1);
        return static_cast<int>(tail.size()) - 1;
    }
    void pair(int a, int b) {
        alpha[a] = b;
        alpha[b] = a;
    }

    SpinWord word(const std::vector<int>& hole) const {
        SpinWord w;
        for (int d : hole) w += vspin[tail[d]] > 0 ? '+' : '-';
        return w;
    }

    // The two sides of a 2-gon become one edge: alpha(H_1) takes the place of
    // H_2 and alpha(H_2) that of H_1.
    void close_edge(const std::vector<int>& hole) {
        int a = alpha[hole[0]], b = alpha[hole[1]];
        pair(a, b);
        alive[hole[0]] = alive[hole[1]] = 0;
        if (root == hole[0]) root = b;
        if (root == hole[1]) root = a;
    }

    // Reveal the triangle on the hole side of H_p with third vertex w. The darts
    // a′ (w → v_1) and b′ (v_p → w) become boundary darts of the children.
    std::pair<int, int> triangle(const std::vector<int>& hole, int w) {
        const int hp = hole.back();
        const int v1 = tail[hole.front()], vp = tail[hp];
        int a = dart(v1), b = dart(w), a2 = dart(w), b2 = dart(vp);
        phi[hp] = a;
        phi[a] = b;
        phi[b] = hp;
        pair(a, a2);
        pair(b, b2);
        return {a2, b2};
    }

    std::vector<int> new_vertex(const std::vector<int>& hole, int spin) {
        auto [a2, b2] = triangle(hole, vertex(spin));
        std::vector<int> child{a2};
        child.insert(child.end(), hole.begin(), hole.end() - 1);
        child.push_back(b2);
        return child;
    }

    // third vertex v_i (1-based); returns (ω_1..ω_i hole, ω_i..ω_p hole)
    std::pair<std::vector<int>, std::vector<int>> split(const std::vector<int>& hole, int i) {
        auto [a2, b2] = triangle(hole, tail[hole[i - 1]]);
        std::vector<int> left(hole.begin(), hole.begin() + (i - 1));
        left.push_back(a2);
        std::vector<int> right(hole.begin() + (i - 1), hole.end() - 1);
        right.push_back(b2);
        return {left, right};
    }

    CombMap finish() const {
        std::vector<int> id(tail.size(), -1);
        int D = 0;
        for (size_t d = 0; d < tail.size(); ++d)
            if (alive[d]) id[d] = D++;
        CombMap m;
        m.alpha.assign(D, -1);
        m.sigma.assign(D, -1);
        for (size_t d = 0; d < tail.size(); ++d) {
            if (!alive[d]) continue;
            if (phi[d] < 0 || alpha[d] < 0) throw std::logic_error("sampler left an open dart");
            m.alpha[id[d]] = id[alpha[d]];
            m.sigma[id[d]] = id[phi[alpha[d]]];
        }
        m.root = id.at(root);
        auto vid = m.vertex_of();
        m.spins.assign(m.vertex_count(), 0);
        for (size_t d = 0; d < tail.size(); ++d)
            if (alive[d]) m.spins[vid[id[d]]] = vspin[tail[d]];
        return m;
    }
};

// p-gon set up with the outer face as root face; the hole carries the reversed
// word so that the outer face reads omega from the root.
std::vector<int> open_polygon(Builder& b, const SpinWord& omega) {
    const int p = static_cast<int>(omega.size());
    std::vector<int> v(p);
    for (int k = 0; k < p; ++k) v[k] = b.vertex(omega[p - 1 - k] == '+' ? 1 : -1);
    std::vector<int> hole(p), outer(p);
    for (int k = 0; k < p; ++k) {
        hole[k] = b.dart(v[k]);
        outer[k] = b.dart(v[(k + 1) % p]);
        b.pair(hole[k], outer[k]);
    }
    for (int k = 0; k < p; ++k) b.phi[outer[k]] = outer[(k + p - 1) % p];
    b.root = outer[p - 1];
    return hole;
}

int delta(const SpinWord& w) { return w.front() == w.back() ? 1 : 0; }

} // namespace

ExactSampler::ExactSampler(Scalar nu, int max_vertices) : nu_(std::move(nu)), max_n_(max_vertices) {
    if (max_vertices < 1) throw std::invalid_argument("max_vertices must be >= 1");
    order_ = 3 * max_vertices + 1;
    table_ = std::make_unique<WordTable>(solve_dobrushin(nu_, order_));
}

double ExactSampler::coeff(const SpinWord& w, int n) {
    if (n < 0) return 0;
    if (n > order_) throw CoefficientsMissing("coefficient of order " + std::to_string(n) + " beyond " + std::to_string(order_));
    auto key = std::make_pair(canonical_word(w), n);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    double v = table_->coeff(w, n).to_double();
    cache_.emplace(key, v);
    return v;
}

namespace {

struct PendingHole {
    std::vector<int> darts;
    int size;
};

using CoeffFn = std::function<double(const SpinWord&, int)>;

// Empties the stack, drawing each peeling case with probability proportional
// to the coefficient of the remaining size.
void fill_exact(Builder& b, std::vector<PendingHole> stack, Rng& rng, const CoeffFn& coeff,
                std::vector<PeelingEvent>* events) {
    while (!stack.empty()) {
        PendingHole h = std::move(stack.back());
        stack.pop_back();
        const SpinWord w = b.word(h.darts);
        const int p = static_cast<int>(w.size());
        const int rest = h.size - 1;
        auto split_weights = [&](int i) {
            SpinWord l = w.substr(0, i), r = w.substr(i - 1);
            std::vector<double> sw(rest + 1);
            for (int n1 = 0; n1 <= rest; ++n1) sw[n1] = coeff(l, n1) * coeff(r, rest - n1);
            return sw;
        };

        std::vector<double> weights;
        weights.push_back(p == 2 && h.size == 1 ? 1.0 : 0.0);
        for (char a : {'+', '-'}) weights.push_back(coeff(std::string(1, a) + w, rest));
        for (int i = 1; i <= p; ++i) {
            auto sw = split_weights(i);
            weights.push_back(std::accumulate(sw.begin(), sw.end(), 0.0));
        }
        const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
        if (total <= 0) throw CoefficientsMissing("no continuation for boundary " + w);
        const size_t c = rng.choose(weights);
        PeelingEvent ev;
        ev.weight = weights[c] / total;
        if (c == 0) {
            ev.kind = PeelCase::edge_triangulation;
            b.close_edge(h.darts);
        } else if (c <= 2) {
            ev.kind = PeelCase::new_vertex;
            ev.spin = c == 1 ? 1 : -1;
            stack.push_back({b.new_vertex(h.darts, ev.spin), rest});
        } else {
            const int i = static_cast<int>(c) - 2;
            ev.kind = i == p ? PeelCase::branch : PeelCase::boundary_reattach;
            ev.index = i;
            const int n1 = static_cast<int>(rng.choose(split_weights(i)));
            auto [left, right] = b.split(h.darts, i);
            stack.push_back({std::move(left), n1});
            stack.push_back({std::move(right), rest - n1});
        }
        if (events) events->push_back(ev);
    }
}

} // namespace

CombMap ExactSampler::sample_word(const SpinWord& omega, int n_edges, Rng& rng, std::vector<PeelingEvent>* events) {
    if (!is_valid_word(omega)) throw ParseError("bad spin word");
    if (n_edges > order_) throw CoefficientsMissing("sampler built for at most " + std::to_string(order_) + " edges");
    if (coeff(omega, n_edges) == 0) throw std::invalid_argument("no triangulation with this boundary and size");
    Builder b;
    auto hole = open_polygon(b, omega);
    fill_exact(b, {{std::move(hole), n_edges}}, rng, [this](const SpinWord& w, int n) { return coeff(w, n); }, events);
    return b.finish();
}

CombMap ExactSampler::sample_sphere(int n, Rng& rng, std::vector<PeelingEvent>* events) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    if (n > max_n_) throw CoefficientsMissing("sampler built for at most " + std::to_string(max_n_) + " vertices");
    const int k = 3 * n;
    const double inv_nu = 1.0 / nu_.to_double();
    // root edge: non-loop with ⊕⊕ or ⊕⊖ ends, or a loop splitting the sphere into two 1-gons
    std::vector<double> weights{coeff("++", k + 1) * inv_nu, coeff("+-", k + 1), 0.0};
    std::vector<double> loop_w(k + 2, 0.0);
    for (int k1 = 1; k1 <= k; ++k1) loop_w[k1] = coeff("+", k1) * coeff("+", k + 1 - k1) * inv_nu;
    weights[2] = std::accumulate(loop_w.begin(), loop_w.end(), 0.0);
    const size_t c = rng.choose(weights);

    Builder b;
    const int v1 = b.vertex(1);
    int d = b.dart(v1);
    b.root = d;
    std::vector<PendingHole> stack;
    if (c < 2) {
        const int v2 = b.vertex(c == 0 ? 1 : -1);
        int d2 = b.dart(v2);
        b.pair(d, d2);
        stack.push_back({{d, d2}, k + 1});
    } else {
        int d2 = b.dart(v1);
        b.pair(d, d2);
        const int k1 = static_cast<int>(rng.choose(loop_w));
        stack.push_back({{d}, k1});
        stack.push_back({{d2}, k + 1 - k1});
    }
    fill_exact(b, std::move(stack), rng, [this](const SpinWord& w, int n) { return coeff(w, n); }, events);
    if (rng.bernoulli(0.5))
        for (int& s : b.vspin) s = -s;
    return b.finish();
}

CombMap exact_sample(const Scalar& nu, int n, std::uint64_t seed, std::uint64_t stream) {
    ExactSampler s(nu, n);
    Rng rng(seed, stream);
    return s.sample_sphere(n, rng);
}

std::map<std::vector<int>, double> exact_law(const Scalar& nu, int n_edges) {
    std::map<std::vector<int>, double> law;
    const double x = nu.to_double();
    double total = 0;
    enumerate_maps(n_edges, {MapKind::sphere, 0}, [&](const CombMap& base) {
        CombMap m = base;
        const int V = m.vertex_count();
        m.spins.assign(V, 1);
        for (unsigned long mask = 0; mask < (1ul << V); ++mask) {
            for (int v = 0; v < V; ++v) m.spins[v] = (mask >> v) & 1ul ? -1 : 1;
            double w = std::pow(x, m.monochromatic_edges());
            law[canonical_code(m)] += w;
            total += w;
        }
    });
    for (auto& [code, p] : law) p /= total;
    return law;
}

namespace {

class WordEvaluator {
public:
    WordEvaluator(const Scalar& nu, double t, const BoltzmannOptions& opt, const CriticalData& crit)
        : t_(t), opt_(opt), table_(solve_dobrushin(nu, opt.order)) {
        if (opt.at_critical) crit_ = crit;
    }

    double operator()(const SpinWord& w) {
        SpinWord key = canonical_word(w);
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
        TSeries s = table_.series(w);
        double v = opt_.at_critical ? eval_at_tnu(s, *crit_, crit_->alpha(), 0).mid : eval_partial(s, t_).mid;
        if (v <= 0)
            throw EvaluationTooCoarse("boundary of length " + std::to_string(w.size()) + " has no terms up to order " +
                                      std::to_string(opt_.order));
        cache_.emplace(key, v);
        return v;
    }

private:
    double t_;
    BoltzmannOptions opt_;
    WordTable table_;
    std::optional<CriticalData> crit_;
    std::map<SpinWord, double> cache_;
};

} // namespace

BoltzmannResult boltzmann_sample(const SpinWord& omega, const Scalar& nu, double t, std::uint64_t seed,
                                 const BoltzmannOptions& opt) {
    if (!is_valid_word(omega)) throw ParseError("bad spin word");
    if (!opt.at_critical && !(t > 0)) throw std::invalid_argument("t must be positive");
    const CriticalData crit = critical_point(nu);
    if (opt.at_critical)
        t = crit.t_double();
    else if (t > crit.t_nu.hi_double())
        throw std::domain_error("t exceeds t_nu");
    WordEvaluator Z(nu, t, opt, crit);
    const double x = nu.to_double();
    Rng rng(seed, opt.stream);
    BoltzmannResult res;
    Builder b;
    std::vector<std::vector<int>> stack{open_polygon(b, omega)};
    while (!stack.empty()) {
        if (++res.steps > opt.step_cap) throw StepCapExceeded("peeling exceeded " + std::to_string(opt.step_cap) + " steps");
        std::vector<int> h = std::move(stack.back());
        stack.pop_back();
        const SpinWord w = b.word(h);
        const int p = static_cast<int>(w.size());
        const double scale = (delta(w) ? x : 1.0) * t / Z(w);

        std::vector<double> prob;
        prob.push_back(p == 2 ? scale : 0.0);
        for (char a : {'+', '-'}) prob.push_back(scale * Z(std::string(1, a) + w));
        for (int i = 1; i <= p; ++i) prob.push_back(scale * Z(w.substr(0, i)) * Z(w.substr(i - 1)));
        const double total = std::accumulate(prob.begin(), prob.end(), 0.0);
        const double gap = std::abs(total - 1);
        res.max_discrepancy = std::max(res.max_discrepancy, gap);
        if (gap > opt.tolerance)
            throw EvaluationTooCoarse("case probabilities for boundary " + w + " sum to " + std::to_string(total));
        if (gap > 0) ++res.renormalised;

        size_t c = rng.choose(prob);
        PeelingEvent ev;
        ev.weight = prob[c] / total;
        if (c == 0) {
            ev.kind = PeelCase::edge_triangulation;
            b.close_edge(h);
        } else if (c <= 2) {
            ev.kind = PeelCase::new_vertex;
            ev.spin = c == 1 ? 1 : -1;
            stack.push_back(b.new_vertex(h, ev.spin));
        } else {
            const int i = static_cast<int>(c) - 2;
            ev.kind = i == p ? PeelCase::branch : PeelCase::boundary_reattach;
            ev.index = i;
            auto [left, right] = b.split(h, i);
            stack.push_back(std::move(left));
            stack.push_back(std::move(right));
        }
        res.events.push_back(ev);
    }
    res.map = b.finish();
    return res;
}

namespace {

// Mutable sphere triangulation with a fixed vertex set.
class FlipChain {
public:
    FlipChain(int n, double nu) : nu_(nu) {
        // two triangles glued along their boundary
        vspin_.assign(3, 1);
        tail_ = {0, 1, 2, 1, 0, 2};
        alpha_ = {3, 5, 4, 0, 2, 1};
        phi_ = {1, 2, 0, 4, 5, 3};
        rep_ = {0, 1, 2};
        for (int k = 1; k < n; ++k) insert_vertex(0);
        mono_ = count_mono();
    }

    int darts() const { return static_cast<int>(tail_.size()); }
    int vertices() const { return static_cast<int>(vspin_.size()); }
    long mono() const { return mono_; }
    long count_mono() const {
        long m = 0;
        for (int d = 0; d < darts(); ++d)
            if (d < alpha_[d] && vspin_[tail_[d]] == vspin_[tail_[alpha_[d]]]) ++m;
        return m;
    }

    void heat_bath(int v, Rng& rng) {
        int same_plus = 0, same_minus = 0;
        int e = rep_[v];
        do {
            int head = tail_[alpha_[e]];
            if (head != v) (vspin_[head] > 0 ? same_plus : same_minus)++;
            e = phi_[alpha_[e]];
        } while (e != rep_[v]);
        const double wp = std::pow(nu_, same_plus), wm = std::pow(nu_, same_minus);
        const int s = rng.uniform() * (wp + wm) < wp ? 1 : -1;
        if (s != vspin_[v]) {
            mono_ += s > 0 ? same_plus - same_minus : same_minus - same_plus;
            vspin_[v] = s;
        }
    }

    // 0 accepted, 1 rejected by the Metropolis test, 2 unflippable
    int flip(int d, bool ccw, Rng& rng) {
        const int d1 = phi_[d], d2 = phi_[d1];
        const int e = alpha_[d], e1 = phi_[e], e2 = phi_[e1];
        if (e == d1 || e == d2 || e == d) return 2;
        const int u = tail_[d], v = tail_[e];
        const int x = tail_[d2], y = tail_[e2];
        const int nt = ccw ? y : x, ne = ccw ? x : y;
        const int dm = (vspin_[nt] == vspin_[ne]) - (vspin_[u] == vspin_[v]);
        const double accept = std::pow(nu_, dm);
        if (accept < 1 && rng.uniform() >= accept) return 1;
        if (ccw) {
            set_face(d, d2, e1);
            set_face(e, e2, d1);
        } else {
            set_face(d, e2, d1);
            set_face(e, d2, e1);
        }
        tail_[d] = nt;
        tail_[e] = ne;
        // e1 still leaves u and d1 still leaves v
        if (tail_[rep_[u]] != u) rep_[u] = e1;
        if (tail_[rep_[v]] != v) rep_[v] = d1;
        mono_ += dm;
        return 0;
    }

    CombMap to_map(int root) const {
        CombMap m;
        m.alpha = alpha_;
        m.sigma.resize(darts());
        for (int d = 0; d < darts(); ++d) m.sigma[d] = phi_[alpha_[d]];
        m.root = root;
        auto vid = m.vertex_of();
        m.spins.assign(m.vertex_count(), 0);
        for (int d = 0; d < darts(); ++d) m.spins[vid[d]] = vspin_[tail_[d]];
        return m;
    }

private:
    void set_face(int a, int b, int c) {
        phi_[a] = b;
        phi_[b] = c;
        phi_[c] = a;
    }

    int dart(int from) {
        tail_.push_back(from);
        alpha_.push_back(-1);
        phi_.push_back(-1);
        return darts() - 1;
    }

    void insert_vertex(int d1) {
        const int d2 = phi_[d1], d3 = phi_[d2];
        const int x = tail_[d1], y = tail_[d2], z = tail_[d3];
        const int w = vertices();
        vspin_.push_back(1);
        int p1 = dart(y), q1 = dart(w), p2 = dart(z), q2 = dart(w), p3 = dart(x), q3 = dart(w);
        rep_.push_back(q1);
        alpha_[p1] = q2, alpha_[q2] = p1;
        alpha_[p2] = q3, alpha_[q3] = p2;
        alpha_[p3] = q1, alpha_[q1] = p3;
        set_face(d1, p1, q1);
        set_face(d2, p2, q2);
        set_face(d3, p3, q3);
    }

    double nu_;
    long mono_ = 0;
    std::vector<int> tail_, alpha_, phi_, rep_, vspin_;
};

} // namespace

McmcResult mcmc_sample(const Scalar& nu, int n, long steps, std::uint64_t seed, const McmcOptions& opt) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    if (steps < 0) throw std::invalid_argument("steps must be >= 0");
    const double x = nu.to_double();
    if (!(x > 0)) throw std::domain_error("nu must be positive");
    FlipChain chain(n, x);
    Rng rng(seed, opt.stream);
    McmcResult res;
    int root = 0;
    for (long s = 1; s <= steps; ++s) {
        chain.heat_bath(static_cast<int>(rng.below(chain.vertices())), rng);
        const int d = static_cast<int>(rng.below(chain.darts()));
        switch (chain.flip(d, rng.bernoulli(0.5), rng)) {
        case 0: ++res.flips_accepted; break;
        case 1: ++res.flips_rejected; break;
        default: ++res.flips_unflippable; break;
        }
        root = static_cast<int>(rng.below(chain.darts()));
        if (opt.validate_every > 0 && s % opt.validate_every == 0) {
            CombMap m = chain.to_map(root);
            validate_map(m, {MapKind::sphere, 0});
            if (m.monochromatic_edges() != chain.mono())
                throw std::logic_error("incremental monochromatic count drifted at step " + std::to_string(s));
            ++res.validations;
        }
        if (opt.observer && opt.observe_every > 0 && s % opt.observe_every == 0) opt.observer(chain.to_map(root), s);
    }
    res.map = chain.to_map(root);
    res.steps = steps;
    res.monochromatic_incremental = chain.mono();
    res.monochromatic_recomputed = res.map.monochromatic_edges();
    return res;
}

int root_degree(const CombMap& m) {
    auto vid = m.vertex_of();
    return static_cast<int>(std::count(vid.begin(), vid.end(), vid[m.root]));
}

namespace {

std::vector<int> vertex_distances(const CombMap& m, const std::vector<int>& vid) {
    const int V = m.vertex_count();
    std::vector<std::vector<int>> adj(V);
    for (int d = 0; d < m.darts(); ++d) adj[vid[d]].push_back(vid[m.alpha[d]]);
    std::vector<int> dist(V, -1);
    std::deque<int> q{vid[m.root]};
    dist[vid[m.root]] = 0;
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (int w : adj[v])
            if (dist[w] < 0) {
                dist[w] = dist[v] + 1;
                q.push_back(w);
            }
    }
    return dist;
}

std::vector<int> face_ids(const CombMap& m, int& count) {
    auto f = m.phi();
    std::vector<int> fid(m.darts(), -1);
    count = 0;
    for (int d = 0; d < m.darts(); ++d) {
        if (fid[d] >= 0) continue;
        for (int x = d; fid[x] < 0; x = f[x]) fid[x] = count;
        ++count;
    }
    return fid;
}

} // namespace

int ball_volume(const CombMap& m, int r) {
    auto vid = m.vertex_of();
    auto dist = vertex_distances(m, vid);
    int F = 0;
    auto fid = face_ids(m, F);
    std::vector<char> in(F, 0);
    for (int d = 0; d < m.darts(); ++d)
        if (dist[vid[d]] < r) in[fid[d]] = 1;
    return static_cast<int>(std::count(in.begin(), in.end(), 1));
}

int hull_perimeter(const CombMap& m) {
    auto vid = m.vertex_of();
    const int rv = vid[m.root];
    int F = 0;
    auto fid = face_ids(m, F);
    std::vector<char> ball(F, 0);
    for (int d = 0; d < m.darts(); ++d)
        if (vid[d] == rv) ball[fid[d]] = 1;
    // components of the complement, glued across edges
    std::vector<int> comp(F, -1);
    std::vector<int> sizes;
    std::vector<std::vector<int>> darts_of(F);
    for (int d = 0; d < m.darts(); ++d) darts_of[fid[d]].push_back(d);
    for (int f = 0; f < F; ++f) {
        if (ball[f] || comp[f] >= 0) continue;
        const int c = static_cast<int>(sizes.size());
        sizes.push_back(0);
        std::deque<int> q{f};
        comp[f] = c;
        while (!q.empty()) {
            int g = q.front();
            q.pop_front();
            ++sizes[c];
            for (int d : darts_of[g]) {
                int h = fid[m.alpha[d]];
                if (!ball[h] && comp[h] < 0) {
                    comp[h] = c;
                    q.push_back(h);
                }
            }
        }
    }
    if (sizes.empty()) return 0;
    const int outside = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
    int perim = 0;
    for (int d = 0; d < m.darts(); ++d) {
        int f = fid[d], g = fid[m.alpha[d]];
        if (comp[f] == outside && comp[g] != outside) ++perim;
    }
    return perim;
}

void SampleStats::add(const CombMap& m) {
    ++count;
    ++root_degree[ising::root_degree(m)];
    ++hull_perimeter[ising::hull_perimeter(m)];
    if (static_cast<int>(ball_volume.size()) < r_max) ball_volume.resize(r_max);
    for (int r = 1; r <= r_max; ++r) ++ball_volume[r - 1][ising::ball_volume(m, r)];
    mono_fraction.push_back(static_cast<double>(m.monochromatic_edges()) / m.edges());
}

void SampleStats::merge(const SampleStats& o) {
    if (o.r_max != r_max) throw std::invalid_argument("stats with different radius ranges");
    count += o.count;
    for (auto [k, v] : o.root_degree) root_degree[k] += v;
    for (auto [k, v] : o.hull_perimeter) hull_perimeter[k] += v;
    if (ball_volume.size() < o.ball_volume.size()) ball_volume.resize(o.ball_volume.size());
    for (size_t r = 0; r < o.ball_volume.size(); ++r)
        for (auto [k, v] : o.ball_volume[r]) ball_volume[r][k] += v;
    mono_fraction.insert(mono_fraction.end(), o.mono_fraction.begin(), o.mono_fraction.end());
}

double SampleStats::mean_mono_fraction() const {
    if (mono_fraction.empty()) return 0;
    return std::accumulate(mono_fraction.begin(), mono_fraction.end(), 0.0) / mono_fraction.size();
}

nlohmann::json SampleStats::to_json() const {
    auto hist = [](const std::map<int, long>& h) {
        nlohmann::json j = nlohmann::json::object();
        for (auto [k, v] : h) j[std::to_string(k)] = v;
        return j;
    };
    nlohmann::json balls = nlohmann::json::array();
    for (size_t r = 0; r < ball_volume.size(); ++r) {
        double mean = 0;
        for (auto [k, v] : ball_volume[r]) mean += static_cast<double>(k) * v;
        balls.push_back({{"radius", r + 1}, {"mean", count ? mean / count : 0.0}, {"histogram", hist(ball_volume[r])}});
    }
    return {{"count", count},
            {"r_max", r_max},
            {"root_degree", hist(root_degree)},
            {"hull_perimeter", hist(hull_perimeter)},
            {"ball_volumes", balls},
            {"mono_fraction_mean", mean_mono_fraction()},
            {"metadata", metadata}};
}

SampleStats collect_stats(const std::vector<CombMap>& samples, int r_max) {
    SampleStats s;
    s.r_max = r_max;
    s.ball_volume.resize(r_max);
    for (const auto& m : samples) s.add(m);
    return s;
}

nlohmann::json map_to_json(const CombMap& m) {
    return {{"alpha", m.alpha},
            {"sigma", m.sigma},
            {"root", m.root},
            {"spins", m.spins},
            {"edges", m.edges()},
            {"vertices", m.vertex_count()},
            {"monochromatic", m.monochromatic_edges()}};
}

CombMap map_from_json(const nlohmann::json& j) {
    CombMap m;
    m.alpha = j.at("alpha").get<std::vector<int>>();
    m.sigma = j.at("sigma").get<std::vector<int>>();
    m.root = j.at("root").get<int>();
    m.spins = j.at("spins").get<std::vector<int>>();
    return m;
}

double total_variation(const std::map<std::vector<int>, double>& p, const std::map<std::vector<int>, double>& q) {
    double s = 0;
    for (const auto& [k, v] : p) {
        auto it = q.find(k);
        s += std::abs(v - (it == q.end() ? 0.0 : it->second));
    }
    for (const auto& [k, v] : q)
        if (!p.count(k)) s += v;
    return s / 2;
}

ChiSquare chi_square(const std::map<std::vector<int>, long>& observed, const std::map<std::vector<int>, double>& law) {
    ChiSquare r;
    long n = 0;
    for (const auto& [k, c] : observed) {
        n += c;
        if (!law.count(k)) r.unexpected += c;
    }
    if (n == 0) throw std::invalid_argument("no observations");
    // cells with expected count below 5 are pooled
    double pooled_e = 0, pooled_o = 0;
    int cells = 0;
    for (const auto& [k, p] : law) {
        const double e = p * n;
        auto it = observed.find(k);
        const double o = it == observed.end() ? 0.0 : static_cast<double>(it->second);
        if (e < 5) {
            pooled_e += e;
            pooled_o += o;
            continue;
        }
        r.statistic += (o - e) * (o - e) / e;
        ++cells;
    }
    if (pooled_e > 0) {
        r.statistic += (pooled_o - pooled_e) * (pooled_o - pooled_e) / pooled_e;
        ++cells;
    }
    r.dof = std::max(cells - 1, 1);
    r.p_value = r.unexpected > 0 ? 0.0 : boost::math::gamma_q(r.dof / 2.0, r.statistic / 2.0);
    return r;
}

} // namespace ising
