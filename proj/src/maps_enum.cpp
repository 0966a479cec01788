#include "ising/maps_enum.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace ising {

SpinWord parse_word(std::string_view text) {
    static const std::string plus_glyph = "⊕", minus_glyph = "⊖";
    SpinWord w;
    for (size_t i = 0; i < text.size();) {
        if (text[i] == '+' || text[i] == 'p') {
            w += '+';
            ++i;
        } else if (text[i] == '-' || text[i] == 'm') {
            w += '-';
            ++i;
        } else if (text.substr(i, plus_glyph.size()) == plus_glyph) {
            w += '+';
            i += plus_glyph.size();
        } else if (text.substr(i, minus_glyph.size()) == minus_glyph) {
            w += '-';
            i += minus_glyph.size();
        } else {
            throw ParseError("bad spin word: '" + std::string(text) + "'");
        }
    }
    if (w.empty()) throw ParseError("empty spin word");
    return w;
}

SpinWord flip_word(const SpinWord& w) {
    SpinWord r = w;
    for (char& c : r) c = c == '+' ? '-' : '+';
    return r;
}

bool is_valid_word(const SpinWord& w) {
    return !w.empty() && std::all_of(w.begin(), w.end(), [](char c) { return c == '+' || c == '-'; });
}

SpinWord canonical_word(const SpinWord& w) {
    SpinWord best;
    for (const SpinWord& base : {w, flip_word(w)}) {
        for (int dir = 0; dir < 2; ++dir) {
            SpinWord s = base;
            if (dir) std::reverse(s.begin(), s.end());
            for (size_t r = 0; r < s.size(); ++r) {
                SpinWord rot = s.substr(r) + s.substr(0, r);
                if (best.empty() || rot < best) best = rot;
            }
        }
    }
    return best;
}

int min_degree(int p) {
    if (p == 1) return 2;
    if (p == 2) return 1;
    return 2 * p - 3;
}

bool in_support(int p, int n) { return n >= min_degree(p) && ((n + p) % 3 == 0); }

std::vector<int> CombMap::phi() const {
    std::vector<int> f(darts());
    for (int d = 0; d < darts(); ++d) f[d] = sigma[alpha[d]];
    return f;
}

std::vector<int> CombMap::vertex_of() const {
    std::vector<int> vid(darts(), -1);
    int v = 0;
    for (int d = 0; d < darts(); ++d) {
        if (vid[d] >= 0) continue;
        for (int x = d; vid[x] < 0; x = sigma[x]) vid[x] = v;
        ++v;
    }
    return vid;
}

int CombMap::vertex_count() const {
    auto vid = vertex_of();
    return vid.empty() ? 0 : *std::max_element(vid.begin(), vid.end()) + 1;
}

int CombMap::face_count() const {
    auto f = phi();
    std::vector<char> seen(darts(), 0);
    int n = 0;
    for (int d = 0; d < darts(); ++d) {
        if (seen[d]) continue;
        for (int x = d; !seen[x]; x = f[x]) seen[x] = 1;
        ++n;
    }
    return n;
}

int CombMap::monochromatic_edges() const {
    auto vid = vertex_of();
    int m = 0;
    for (int d = 0; d < darts(); ++d)
        if (d < alpha[d] && spins.at(vid[d]) == spins.at(vid[alpha[d]])) ++m;
    return m;
}

int CombMap::root_face_degree() const {
    auto f = phi();
    int k = 1;
    for (int x = f[root]; x != root; x = f[x]) ++k;
    return k;
}

SpinWord CombMap::boundary_word() const {
    auto f = phi();
    auto vid = vertex_of();
    SpinWord w;
    int x = root;
    do {
        x = f[x];
        w += spins.at(vid[x]) > 0 ? '+' : '-';
    } while (x != root);
    return w;
}

namespace {

std::string join(const std::vector<int>& v) {
    std::string s = "[";
    for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + "]";
}

std::vector<int> parse_list(const std::string& s) {
    std::vector<int> out;
    std::string body = s;
    if (body.size() < 2 || body.front() != '[' || body.back() != ']') throw ParseError("bad list: " + s);
    body = body.substr(1, body.size() - 2);
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(std::stoi(item));
    return out;
}

} // namespace

std::string CombMap::dump() const {
    return "alpha=" + join(alpha) + " sigma=" + join(sigma) + " root=" + std::to_string(root) + " spins=" + join(spins);
}

CombMap CombMap::parse(const std::string& line) {
    CombMap m;
    std::stringstream ss(line);
    std::string tok;
    bool have_root = false;
    while (ss >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) throw ParseError("bad map token: " + tok);
        std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        if (key == "alpha")
            m.alpha = parse_list(val);
        else if (key == "sigma")
            m.sigma = parse_list(val);
        else if (key == "root") {
            m.root = std::stoi(val);
            have_root = true;
        } else if (key == "spins")
            m.spins = parse_list(val);
        else
            throw ParseError("unknown map field: " + key);
    }
    if (m.alpha.size() != m.sigma.size() || !have_root) throw ParseError("incomplete map line");
    return m;
}

void validate_map(const CombMap& m, const MapRequest& req) {
    const int D = m.darts();
    if (D == 0 || D % 2) throw InvalidMap("dart count must be positive and even");
    if (static_cast<int>(m.sigma.size()) != D) throw InvalidMap("alpha/sigma size mismatch");
    if (m.root < 0 || m.root >= D) throw InvalidMap("root out of range");
    for (int d = 0; d < D; ++d) {
        int a = m.alpha[d];
        if (a < 0 || a >= D || a == d || m.alpha[a] != d) throw InvalidMap("alpha is not a fixed-point-free involution");
    }
    std::vector<int> inv(D, -1);
    for (int d = 0; d < D; ++d) {
        int s = m.sigma[d];
        if (s < 0 || s >= D || inv[s] >= 0) throw InvalidMap("sigma is not a permutation");
        inv[s] = d;
    }
    // connectivity under <alpha, sigma>
    std::vector<char> seen(D, 0);
    std::deque<int> q{m.root};
    seen[m.root] = 1;
    int reached = 1;
    while (!q.empty()) {
        int d = q.front();
        q.pop_front();
        for (int n : {m.alpha[d], m.sigma[d]})
            if (!seen[n]) {
                seen[n] = 1;
                ++reached;
                q.push_back(n);
            }
    }
    if (reached != D) throw InvalidMap("map is not connected");
    int V = m.vertex_count(), E = m.edges(), F = m.face_count();
    if (V - E + F != 2) throw InvalidMap("not planar: V - E + F = " + std::to_string(V - E + F));

    auto f = m.phi();
    std::vector<char> in_root(D, 0);
    int x = m.root;
    do {
        in_root[x] = 1;
        x = f[x];
    } while (x != m.root);
    std::fill(seen.begin(), seen.end(), 0);
    for (int d = 0; d < D; ++d) {
        if (seen[d]) continue;
        int len = 0;
        for (int y = d; !seen[y]; y = f[y]) {
            seen[y] = 1;
            ++len;
        }
        bool is_root_face = in_root[d];
        if (req.kind == MapKind::sphere || !is_root_face) {
            if (len != 3) throw InvalidMap("face of degree " + std::to_string(len));
        } else if (len != req.p) {
            throw InvalidMap("root face has degree " + std::to_string(len) + ", expected " + std::to_string(req.p));
        }
    }
    if (req.kind == MapKind::pgon) {
        auto vid = m.vertex_of();
        std::vector<int> bv;
        int y = m.root;
        do {
            bv.push_back(vid[y]);
            y = f[y];
        } while (y != m.root);
        std::sort(bv.begin(), bv.end());
        if (std::adjacent_find(bv.begin(), bv.end()) != bv.end()) throw InvalidMap("boundary is not simple");
    }
    if (!m.spins.empty() && static_cast<int>(m.spins.size()) != V) throw InvalidMap("spin count != vertex count");
    for (int s : m.spins)
        if (s != 1 && s != -1) throw InvalidMap("spins must be +1 or -1");
}

std::vector<int> canonical_code(const CombMap& m, bool with_spins) {
    const int D = m.darts();
    std::vector<int> label(D, -1), order;
    order.reserve(D);
    label[m.root] = 0;
    order.push_back(m.root);
    for (size_t i = 0; i < order.size(); ++i) {
        int d = order[i];
        for (int n : {m.alpha[d], m.sigma[d]})
            if (label[n] < 0) {
                label[n] = static_cast<int>(order.size());
                order.push_back(n);
            }
    }
    std::vector<int> code;
    code.reserve(2 * D + 8);
    code.push_back(D);
    for (int d : order) {
        code.push_back(label[m.alpha[d]]);
        code.push_back(label[m.sigma[d]]);
    }
    if (with_spins && !m.spins.empty()) {
        auto vid = m.vertex_of();
        std::vector<char> done(m.spins.size(), 0);
        for (int d : order)
            if (!done[vid[d]]) {
                done[vid[d]] = 1;
                code.push_back(m.spins[vid[d]]);
            }
    }
    return code;
}

namespace {

// Faces are laid out consecutively (root face first). The smallest unmatched dart
// among the opened faces is glued either to another unmatched dart of an opened
// face or to the first dart of the next unopened face; each rooted map arises once.
class Enumerator {
public:
    Enumerator(int n_edges, const MapRequest& req, const std::function<void(const CombMap&)>& visit)
        : E_(n_edges), req_(req), visit_(visit) {}

    void run() {
        const int D = 2 * E_;
        std::vector<int> degs;
        if (req_.kind == MapKind::sphere) {
            if (D % 3) return;
            degs.assign(D / 3, 3);
        } else {
            if (req_.p < 1 || D < req_.p || (D - req_.p) % 3) return;
            degs.push_back(req_.p);
            degs.insert(degs.end(), (D - req_.p) / 3, 3);
        }
        D_ = D;
        F_ = static_cast<int>(degs.size());
        int s = 0;
        for (int d : degs) {
            starts_.push_back(s);
            s += d;
        }
        starts_.push_back(D);
        phi_.assign(D, 0);
        for (int f = 0; f < F_; ++f)
            for (int j = 0; j < degs[f]; ++j) phi_[starts_[f] + j] = starts_[f] + (j + 1) % degs[f];
        alpha_.assign(D, -1);
        rec(1);
    }

private:
    void rec(int opened) {
        const int lim = starts_[opened];
        int d = -1;
        for (int x = 0; x < lim; ++x)
            if (alpha_[x] < 0) {
                d = x;
                break;
            }
        if (d < 0) {
            if (opened == F_) emit();
            return;
        }
        for (int e = d + 1; e < lim; ++e) {
            if (alpha_[e] >= 0) continue;
            alpha_[d] = e;
            alpha_[e] = d;
            rec(opened);
            alpha_[d] = alpha_[e] = -1;
        }
        if (opened < F_) {
            int e = starts_[opened];
            alpha_[d] = e;
            alpha_[e] = d;
            rec(opened + 1);
            alpha_[d] = alpha_[e] = -1;
        }
    }

    void emit() {
        CombMap m;
        m.alpha = alpha_;
        m.sigma.resize(D_);
        for (int x = 0; x < D_; ++x) m.sigma[x] = phi_[alpha_[x]];
        m.root = 0;
        if (m.vertex_count() - E_ + F_ != 2) return;
        if (req_.kind == MapKind::pgon) {
            auto vid = m.vertex_of();
            std::vector<int> bv(vid.begin(), vid.begin() + req_.p);
            std::sort(bv.begin(), bv.end());
            if (std::adjacent_find(bv.begin(), bv.end()) != bv.end()) return;
        }
        visit_(m);
    }

    int E_, D_ = 0, F_ = 0;
    MapRequest req_;
    const std::function<void(const CombMap&)>& visit_;
    std::vector<int> starts_, phi_, alpha_;
};

} // namespace

void enumerate_maps(int n_edges, const MapRequest& req, const std::function<void(const CombMap&)>& visit, int cap) {
    if (n_edges > cap) throw CapExceeded("requested " + std::to_string(n_edges) + " edges, cap is " + std::to_string(cap));
    if (n_edges < 1) return;
    Enumerator(n_edges, req, visit).run();
}

std::vector<CombMap> enumerate_maps(int n_edges, const MapRequest& req, int cap) {
    std::vector<CombMap> out;
    enumerate_maps(n_edges, req, [&](const CombMap& m) { out.push_back(m); }, cap);
    return out;
}

Scalar eval_histogram(const std::vector<mpz_class>& h, const Scalar& nu) {
    Scalar acc;
    for (size_t m = h.size(); m-- > 0;) {
        acc *= nu;
        if (h[m] != 0) acc += Scalar(Rational(h[m]));
    }
    return acc;
}

OracleTable build_oracle_table(const MapRequest& req, int max_edges, int cap) {
    if (max_edges > cap)
        throw CapExceeded("requested " + std::to_string(max_edges) + " edges, cap is " + std::to_string(cap));
    OracleTable table;
    table.request = req;
    table.max_edges = max_edges;
    table.counts.resize(max_edges + 1);
    for (int n = 1; n <= max_edges; ++n) {
        auto& bucket = table.counts[n];
        enumerate_maps(n, req, [&](const CombMap& m) {
            auto vid = m.vertex_of();
            const int V = m.vertex_count();
            const int p = req.kind == MapKind::sphere ? 0 : req.p;
            std::vector<int> ends;
            for (int d = 0; d < m.darts(); ++d)
                if (d < m.alpha[d]) {
                    ends.push_back(vid[d]);
                    ends.push_back(vid[m.alpha[d]]);
                }
            // boundary letter k is the tail of phi^k(root); root face darts are 0..p-1
            std::vector<int> bverts;
            for (int k = 1; k <= p; ++k) bverts.push_back(vid[k % p]);
            for (unsigned long mask = 0; mask < (1ul << V); ++mask) {
                int mono = 0;
                for (size_t e = 0; e < ends.size(); e += 2)
                    if (((mask >> ends[e]) & 1ul) == ((mask >> ends[e + 1]) & 1ul)) ++mono;
                SpinWord w;
                for (int v : bverts) w += ((mask >> v) & 1ul) ? '-' : '+';
                auto& h = bucket[w];
                if (static_cast<int>(h.size()) <= mono) h.resize(mono + 1);
                h[mono] += 1;
            }
        }, cap);
    }
    return table;
}

TSeries OracleTable::series(const SpinWord& w, const Scalar& nu) const {
    TSeries s(nu, max_edges);
    for (int n = 1; n <= max_edges; ++n) {
        auto it = counts[n].find(w);
        if (it != counts[n].end()) s.set(n, eval_histogram(it->second, nu));
    }
    return s;
}

TSeries OracleTable::total(const Scalar& nu) const {
    TSeries s(nu, max_edges);
    for (int n = 1; n <= max_edges; ++n)
        for (const auto& [w, h] : counts[n]) s.add_to(n, eval_histogram(h, nu));
    return s;
}

TSeries oracle_series(const SpinWord& omega, const Scalar& nu, int N, int cap) {
    if (!is_valid_word(omega)) throw ParseError("bad spin word");
    auto table = build_oracle_table({MapKind::pgon, static_cast<int>(omega.size())}, N, cap);
    return table.series(omega, nu);
}

TSeries oracle_sphere(const Scalar& nu, int N, int cap) {
    auto table = build_oracle_table({MapKind::sphere, 0}, N, cap);
    return table.total(nu);
}

TSeries oracle_Q(int p, const Scalar& nu, int N, int cap) {
    if (p < 1 || p > 3) throw std::invalid_argument("oracle_Q supports p in {1,2,3}");
    auto table = build_oracle_table({MapKind::nonsimple_boundary, p}, N, cap);
    return table.total(nu).scaled(Scalar(Rational(1, 2)));
}

} // namespace ising
