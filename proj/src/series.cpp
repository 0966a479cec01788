#include "ising/series.hpp"

#include <algorithm>

namespace ising {

namespace {

void require_same_nu(const Scalar& a, const Scalar& b) {
    if (!(a == b)) throw SeriesMismatch("series over different nu: " + a.str() + " vs " + b.str());
}

} // namespace

TSeries TSeries::monomial(const Scalar& nu, int order, int k, const Scalar& c) {
    TSeries s(nu, order);
    s.set(k, c);
    return s;
}

Scalar TSeries::coeff(int k) const {
    auto it = c_.find(k);
    return it == c_.end() ? Scalar() : it->second;
}

void TSeries::set(int k, Scalar v) {
    if (k > order_) return;
    if (v.is_zero())
        c_.erase(k);
    else
        c_[k] = std::move(v);
}

void TSeries::add_to(int k, const Scalar& v) {
    if (k > order_ || v.is_zero()) return;
    auto [it, fresh] = c_.try_emplace(k, v);
    if (!fresh) {
        it->second += v;
        if (it->second.is_zero()) c_.erase(it);
    }
}

TSeries TSeries::truncated(int order) const {
    TSeries r(nu_, std::min(order, order_));
    for (const auto& [k, v] : c_)
        if (k <= r.order_) r.c_.emplace(k, v);
    return r;
}

TSeries TSeries::scaled(const Scalar& s) const {
    TSeries r(nu_, order_);
    if (s.is_zero()) return r;
    for (const auto& [k, v] : c_) r.c_.emplace(k, v * s);
    return r;
}

TSeries TSeries::shifted(int s) const {
    if (s < 0 && valuation() < -s && !c_.empty())
        throw ValuationError("division by t^" + std::to_string(-s) + " of a series with valuation " +
                             std::to_string(valuation()));
    TSeries r(nu_, order_ + s);
    for (const auto& [k, v] : c_) r.c_.emplace(k + s, v);
    return r;
}

TSeries TSeries::inverse() const {
    Scalar c0 = coeff(0);
    if (c0.is_zero()) throw ValuationError("inverse of a series without constant term");
    Scalar inv0 = c0.inverse();
    TSeries r(nu_, order_);
    r.set(0, inv0);
    for (int n = 1; n <= order_; ++n) {
        Scalar acc;
        for (const auto& [k, v] : c_) {
            if (k == 0) continue;
            if (k > n) break;
            acc += v * r.coeff(n - k);
        }
        r.set(n, -(acc * inv0));
    }
    return r;
}

TSeries TSeries::pow(unsigned e) const {
    TSeries r = TSeries::monomial(nu_, order_, 0, Scalar(1));
    for (unsigned i = 0; i < e; ++i) r = r * *this;
    return r;
}

TSeries& TSeries::operator+=(const TSeries& o) {
    require_same_nu(nu_, o.nu_);
    order_ = std::min(order_, o.order_);
    while (!c_.empty() && c_.rbegin()->first > order_) c_.erase(std::prev(c_.end()));
    for (const auto& [k, v] : o.c_) add_to(k, v);
    return *this;
}

TSeries& TSeries::operator-=(const TSeries& o) { return *this += o.scaled(Scalar(-1)); }

TSeries operator*(const TSeries& a, const TSeries& b) {
    return TSeries::mul_window(a, b, 0, std::min(a.order(), b.order()));
}

TSeries TSeries::mul_window(const TSeries& a, const TSeries& b, int lo, int hi) {
    require_same_nu(a.nu_, b.nu_);
    TSeries r(a.nu_, std::min(a.order_, b.order_));
    hi = std::min(hi, r.order_);
    std::map<int, Scalar> acc;
    for (const auto& [ka, va] : a.c_) {
        if (ka > hi) break;
        for (const auto& [kb, vb] : b.c_) {
            int k = ka + kb;
            if (k > hi) break;
            if (k < lo) continue;
            acc[k] += va * vb;
        }
    }
    for (auto& [k, v] : acc)
        if (!v.is_zero()) r.c_.emplace(k, std::move(v));
    return r;
}

void TSeries::merge_orders(const TSeries& src, int lo, int hi) {
    for (int k = lo; k <= hi; ++k) c_.erase(k);
    for (const auto& [k, v] : src.c_)
        if (k >= lo && k <= hi && k <= order_) c_[k] = v;
}

bool TSeries::agrees_upto(const TSeries& o, int n) const {
    auto lim = [n](const std::map<int, Scalar>& m) {
        std::map<int, Scalar> r;
        for (const auto& [k, v] : m)
            if (k <= n) r.emplace(k, v);
        return r;
    };
    return lim(c_) == lim(o.c_);
}

double TSeries::evaluate(double t) const {
    double s = 0, tp = 1;
    int last = 0;
    for (const auto& [k, v] : c_) {
        for (; last < k; ++last) tp *= t;
        s += v.to_double() * tp;
    }
    return s;
}

std::vector<double> TSeries::float_coeffs() const {
    std::vector<double> out(order_ + 1, 0.0);
    for (const auto& [k, v] : c_)
        if (k >= 0) out[k] = v.to_double();
    return out;
}

nlohmann::json TSeries::to_json() const {
    nlohmann::json coeffs = nlohmann::json::object();
    for (const auto& [k, v] : c_) coeffs[std::to_string(k)] = v.str();
    return {{"nu", nu_.str()}, {"order", order_}, {"coeffs", coeffs}};
}

TSeries TSeries::from_json(const nlohmann::json& j) {
    TSeries s(Scalar::parse(j.at("nu").get<std::string>()), j.at("order").get<int>());
    for (const auto& [k, v] : j.at("coeffs").items()) s.set(std::stoi(k), Scalar::parse(v.get<std::string>()));
    return s;
}

BivSeries::BivSeries(Scalar nu, int order, int dx, int dy)
    : nu_(std::move(nu)), order_(order), dx_(dx), dy_(dy), terms_(std::max(order + 1, 0)) {}

Scalar BivSeries::coeff(int k, int i, int j) const {
    if (k < 0 || k > order_) return Scalar();
    auto it = terms_[k].find({i, j});
    return it == terms_[k].end() ? Scalar() : it->second;
}

void BivSeries::set(int k, int i, int j, Scalar v) {
    if (k < 0 || k > order_) return;
    if (v.is_zero()) {
        terms_[k].erase({i, j});
        return;
    }
    if (i < 0 || j < 0) throw ValuationError("negative catalytic exponent");
    if (i > dx_ || j > dy_)
        throw DegreeOverflow("term t^" + std::to_string(k) + " x^" + std::to_string(i) + " y^" +
                             std::to_string(j) + " exceeds caps (" + std::to_string(dx_) + ", " +
                             std::to_string(dy_) + ")");
    terms_[k][{i, j}] = std::move(v);
}

void BivSeries::add_to(int k, int i, int j, const Scalar& v) {
    if (k < 0 || k > order_ || v.is_zero()) return;
    if (i < 0 || j < 0) throw ValuationError("negative catalytic exponent");
    if (i > dx_ || j > dy_)
        throw DegreeOverflow("term t^" + std::to_string(k) + " x^" + std::to_string(i) + " y^" +
                             std::to_string(j) + " exceeds caps (" + std::to_string(dx_) + ", " +
                             std::to_string(dy_) + ")");
    auto [it, fresh] = terms_[k].try_emplace({i, j}, v);
    if (!fresh) {
        it->second += v;
        if (it->second.is_zero()) terms_[k].erase(it);
    }
}

bool BivSeries::is_zero() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const Slice& s) { return s.empty(); });
}

size_t BivSeries::term_count() const {
    size_t n = 0;
    for (const auto& s : terms_) n += s.size();
    return n;
}

void BivSeries::check_compatible(const BivSeries& o) const { require_same_nu(nu_, o.nu_); }

BivSeries& BivSeries::operator+=(const BivSeries& o) {
    check_compatible(o);
    if (o.order_ < order_) {
        order_ = o.order_;
        terms_.resize(order_ + 1);
    }
    for (int k = 0; k <= order_; ++k)
        for (const auto& [ij, v] : o.terms_[k]) add_to(k, ij.first, ij.second, v);
    return *this;
}

BivSeries& BivSeries::operator-=(const BivSeries& o) { return *this += o.scaled(Scalar(-1)); }

bool operator==(const BivSeries& a, const BivSeries& b) {
    return a.nu_ == b.nu_ && a.order_ == b.order_ && a.terms_ == b.terms_;
}

BivSeries BivSeries::mul_window(const BivSeries& a, const BivSeries& b, int lo, int hi) {
    a.check_compatible(b);
    BivSeries r(a.nu_, std::min(a.order_, b.order_), std::max(a.dx_, b.dx_), std::max(a.dy_, b.dy_));
    hi = std::min(hi, r.order_);
    lo = std::max(lo, 0);
    for (int k = lo; k <= hi; ++k) {
        std::map<Key, Scalar> acc;
        for (int ka = 0; ka <= k; ++ka) {
            const Slice& sa = a.terms_[ka];
            const Slice& sb = b.terms_[k - ka];
            if (sa.empty() || sb.empty()) continue;
            for (const auto& [ija, va] : sa)
                for (const auto& [ijb, vb] : sb)
                    acc[{ija.first + ijb.first, ija.second + ijb.second}] += va * vb;
        }
        for (auto& [ij, v] : acc)
            if (!v.is_zero()) r.set(k, ij.first, ij.second, std::move(v));
    }
    return r;
}

BivSeries BivSeries::scaled(const Scalar& s) const {
    BivSeries r(nu_, order_, dx_, dy_);
    if (s.is_zero()) return r;
    for (int k = 0; k <= order_; ++k)
        for (const auto& [ij, v] : terms_[k]) r.terms_[k].emplace(ij, v * s);
    return r;
}

BivSeries BivSeries::shifted_t(int s) const {
    BivSeries r(nu_, order_ + s, dx_, dy_);
    for (int k = 0; k <= order_; ++k) {
        if (terms_[k].empty()) continue;
        if (k + s < 0) throw ValuationError("division by t^" + std::to_string(-s) + " with insufficient valuation");
        if (k + s <= r.order_) r.terms_[k + s] = terms_[k];
    }
    return r;
}

BivSeries BivSeries::times_x(int e) const {
    BivSeries r(nu_, order_, dx_, dy_);
    for (int k = 0; k <= order_; ++k)
        for (const auto& [ij, v] : terms_[k]) r.set(k, ij.first + e, ij.second, v);
    return r;
}

BivSeries BivSeries::times_y(int e) const {
    BivSeries r(nu_, order_, dx_, dy_);
    for (int k = 0; k <= order_; ++k)
        for (const auto& [ij, v] : terms_[k]) r.set(k, ij.first, ij.second + e, v);
    return r;
}

BivSeries BivSeries::div_x(int e) const {
    BivSeries r(nu_, order_, dx_, dy_);
    for (int k = 0; k <= order_; ++k)
        for (const auto& [ij, v] : terms_[k]) {
            if (ij.first < e) throw ValuationError("division by x^" + std::to_string(e) + " with x-valuation " +
                                                   std::to_string(ij.first));
            r.terms_[k].emplace(Key{ij.first - e, ij.second}, v);
        }
    return r;
}

BivSeries BivSeries::div_y(int e) const {
    BivSeries r(nu_, order_, dx_, dy_);
    for (int k = 0; k <= order_; ++k)
        for (const auto& [ij, v] : terms_[k]) {
            if (ij.second < e) throw ValuationError("division by y^" + std::to_string(e) + " with y-valuation " +
                                                    std::to_string(ij.second));
            r.terms_[k].emplace(Key{ij.first, ij.second - e}, v);
        }
    return r;
}

BivSeries BivSeries::swapped_xy() const {
    BivSeries r(nu_, order_, dy_, dx_);
    for (int k = 0; k <= order_; ++k)
        for (const auto& [ij, v] : terms_[k]) r.terms_[k].emplace(Key{ij.second, ij.first}, v);
    return r;
}

BivSeries BivSeries::with_caps(int dx, int dy) const {
    BivSeries r(nu_, order_, dx, dy);
    for (int k = 0; k <= order_; ++k)
        for (const auto& [ij, v] : terms_[k]) r.set(k, ij.first, ij.second, v);
    return r;
}

BivSeries BivSeries::window(int lo, int hi) const {
    BivSeries r(nu_, order_, dx_, dy_);
    for (int k = std::max(lo, 0); k <= std::min(hi, order_); ++k) r.terms_[k] = terms_[k];
    return r;
}

BivSeries BivSeries::slice_x(int i) const {
    BivSeries r(nu_, order_, 0, dy_);
    for (int k = 0; k <= order_; ++k)
        for (const auto& [ij, v] : terms_[k])
            if (ij.first == i) r.terms_[k].emplace(Key{0, ij.second}, v);
    return r;
}

BivSeries BivSeries::slice_y(int j) const {
    BivSeries r(nu_, order_, dx_, 0);
    for (int k = 0; k <= order_; ++k)
        for (const auto& [ij, v] : terms_[k])
            if (ij.second == j) r.terms_[k].emplace(Key{ij.first, 0}, v);
    return r;
}

TSeries BivSeries::coeff_xy(int i, int j) const {
    TSeries r(nu_, order_);
    for (int k = 0; k <= order_; ++k) {
        auto it = terms_[k].find({i, j});
        if (it != terms_[k].end()) r.set(k, it->second);
    }
    return r;
}

BivSeries BivSeries::from_tseries(const TSeries& s, int i, int j, int dx, int dy) {
    BivSeries r(s.nu(), s.order(), dx, dy);
    for (const auto& [k, v] : s.coeffs())
        if (k >= 0) r.set(k, i, j, v);
    return r;
}

void BivSeries::merge_orders(const BivSeries& src, int lo, int hi) {
    for (int k = std::max(lo, 0); k <= std::min(hi, order_); ++k) {
        terms_[k].clear();
        if (k <= src.order_)
            for (const auto& [ij, v] : src.terms_[k]) set(k, ij.first, ij.second, v);
    }
}

bool BivSeries::agrees_upto(const BivSeries& o, int n) const {
    for (int k = 0; k <= n; ++k) {
        static const Slice empty;
        const Slice& a = k <= order_ ? terms_[k] : empty;
        const Slice& b = k <= o.order_ ? o.terms_[k] : empty;
        if (a != b) return false;
    }
    return true;
}

nlohmann::json BivSeries::to_json() const {
    nlohmann::json terms = nlohmann::json::array();
    for (int k = 0; k <= order_; ++k)
        for (const auto& [ij, v] : terms_[k]) terms.push_back({{"t", k}, {"x", ij.first}, {"y", ij.second}, {"c", v.str()}});
    return {{"nu", nu_.str()}, {"order", order_}, {"terms", terms}};
}

void SeriesBundle::merge_orders(const SeriesBundle& src, int lo, int hi) {
    for (auto& [name, s] : parts) s.merge_orders(src[name], lo, hi);
}

bool SeriesBundle::agrees_upto(const SeriesBundle& o, int n) const {
    for (const auto& [name, s] : parts)
        if (!s.agrees_upto(o[name], n)) return false;
    return true;
}

} // namespace ising
