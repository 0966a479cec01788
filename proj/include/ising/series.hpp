#pragma once

#include "ising/exactnum.hpp"

#include <nlohmann/json.hpp>

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ising {

struct DegreeOverflow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ValuationError : std::domain_error {
    using std::domain_error::domain_error;
};

struct NotContractive : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SeriesMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Truncated power series in t: sum_{k <= order} c_k t^k, zero coefficients never stored.
class TSeries {
public:
    TSeries() = default;
    TSeries(Scalar nu, int order) : nu_(std::move(nu)), order_(order) {}

    static TSeries monomial(const Scalar& nu, int order, int k, const Scalar& c);

    const Scalar& nu() const { return nu_; }
    int order() const { return order_; }
    const std::map<int, Scalar>& coeffs() const { return c_; }

    Scalar coeff(int k) const;
    void set(int k, Scalar v);
    void add_to(int k, const Scalar& v);
    bool is_zero() const { return c_.empty(); }
    int valuation() const { return c_.empty() ? order_ + 1 : c_.begin()->first; }

    TSeries truncated(int order) const;
    TSeries scaled(const Scalar& s) const;
    // multiply by t^s; negative s needs valuation >= -s
    TSeries shifted(int s) const;
    TSeries inverse() const;
    TSeries pow(unsigned e) const;

    TSeries& operator+=(const TSeries& o);
    TSeries& operator-=(const TSeries& o);
    friend TSeries operator+(TSeries a, const TSeries& b) { return a += b; }
    friend TSeries operator-(TSeries a, const TSeries& b) { return a -= b; }
    friend TSeries operator*(const TSeries& a, const TSeries& b);
    TSeries operator-() const { return scaled(Scalar(-1)); }

    // Product restricted to t-orders lo..hi.
    static TSeries mul_window(const TSeries& a, const TSeries& b, int lo, int hi);

    // copy coefficients with orders lo..hi from src
    void merge_orders(const TSeries& src, int lo, int hi);
    bool agrees_upto(const TSeries& o, int n) const;

    friend bool operator==(const TSeries& a, const TSeries& b) {
        return a.order_ == b.order_ && a.c_ == b.c_ && a.nu_ == b.nu_;
    }

    double evaluate(double t) const;
    std::vector<double> float_coeffs() const;

    nlohmann::json to_json() const;
    static TSeries from_json(const nlohmann::json& j);

private:
    Scalar nu_{1};
    int order_ = 0;
    std::map<int, Scalar> c_;
};

// Truncated series in t with catalytic variables x, y: terms t^k x^i y^j with
// 0 <= k <= order, 0 <= i <= dx, 0 <= j <= dy.
class BivSeries {
public:
    using Key = std::pair<int, int>;
    using Slice = std::map<Key, Scalar>;

    BivSeries() = default;
    BivSeries(Scalar nu, int order, int dx, int dy);

    const Scalar& nu() const { return nu_; }
    int order() const { return order_; }
    int dx() const { return dx_; }
    int dy() const { return dy_; }

    // terms of t-order k, keyed by (i, j)
    const Slice& at_order(int k) const { return terms_.at(k); }

    Scalar coeff(int k, int i, int j) const;
    void set(int k, int i, int j, Scalar v);
    // adds v to the (k,i,j) coefficient; throws DegreeOverflow past the caps when v != 0
    void add_to(int k, int i, int j, const Scalar& v);
    bool is_zero() const;
    size_t term_count() const;

    BivSeries& operator+=(const BivSeries& o);
    BivSeries& operator-=(const BivSeries& o);
    friend BivSeries operator+(BivSeries a, const BivSeries& b) { return a += b; }
    friend BivSeries operator-(BivSeries a, const BivSeries& b) { return a -= b; }
    friend BivSeries operator*(const BivSeries& a, const BivSeries& b) {
        return mul_window(a, b, 0, std::min(a.order_, b.order_));
    }
    friend bool operator==(const BivSeries& a, const BivSeries& b);

    static BivSeries mul_window(const BivSeries& a, const BivSeries& b, int lo, int hi);

    BivSeries scaled(const Scalar& s) const;
    BivSeries shifted_t(int s) const;
    BivSeries times_x(int e = 1) const;
    BivSeries times_y(int e = 1) const;
    BivSeries div_x(int e = 1) const;
    BivSeries div_y(int e = 1) const;
    BivSeries swapped_xy() const;
    BivSeries with_caps(int dx, int dy) const;
    // only the terms with t-order in lo..hi
    BivSeries window(int lo, int hi) const;

    // [x^i]: keeps the y-dependence (result has x-degree 0)
    BivSeries slice_x(int i) const;
    // [y^j]: keeps the x-dependence (result has y-degree 0)
    BivSeries slice_y(int j) const;
    TSeries coeff_xy(int i, int j) const;
    // embed a TSeries as the x^i y^j coefficient
    static BivSeries from_tseries(const TSeries& s, int i, int j, int dx, int dy);

    void merge_orders(const BivSeries& src, int lo, int hi);
    bool agrees_upto(const BivSeries& o, int n) const;

    nlohmann::json to_json() const;

private:
    void check_compatible(const BivSeries& o) const;

    Scalar nu_{1};
    int order_ = 0, dx_ = 0, dy_ = 0;
    std::vector<Slice> terms_;
};

// Named unknowns for a coupled system.
struct SeriesBundle {
    std::map<std::string, BivSeries> parts;

    BivSeries& operator[](const std::string& name) { return parts.at(name); }
    const BivSeries& operator[](const std::string& name) const { return parts.at(name); }

    void merge_orders(const SeriesBundle& src, int lo, int hi);
    bool agrees_upto(const SeriesBundle& o, int n) const;
};

// An update rule evaluated on a window of t-orders: given the current iterate,
// return the right-hand side restricted to orders lo..hi. Every occurrence of an
// unknown on the right must carry at least `gain` factors of t.
template <class State>
struct FixedPointSpec {
    std::string name;
    std::function<State(const State& current, int lo, int hi)> update;
    int gain = 1;
};

// Iterates from `zero`. Sweeping windows [k, k] for k = 0..N is the same as N+1
// full applications restricted to the orders each one finalizes; a final full
// application must reproduce the iterate to order N.
template <class State>
State solve_fixed_point(const FixedPointSpec<State>& spec, State zero, int N) {
    if (spec.gain < 1) throw NotContractive(spec.name + ": update rule gains no power of t");
    State cur = std::move(zero);
    for (int k = 0; k <= N; ++k) {
        State rhs = spec.update(cur, k, k);
        cur.merge_orders(rhs, k, k);
    }
    State check = spec.update(cur, 0, N);
    if (!check.agrees_upto(cur, N))
        throw NotContractive(spec.name + ": iterate does not stabilize to order " + std::to_string(N));
    return cur;
}

} // namespace ising
