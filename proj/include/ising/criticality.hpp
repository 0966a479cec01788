#pragma once

#include "ising/exactnum.hpp"
#include "ising/series.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ising {

struct NoPositiveRoot : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InsufficientOrder : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NegativeEntry : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Scalar nu_critical();  // 1 + sqrt7/7
Scalar rho_critical(); // (25 sqrt7 - 55)/864
Scalar y_critical();   // 3/5 + 3/5 sqrt7

// Polynomials in rho whose positive roots carry the radius of convergence in t^3.
Scalar P1(const Scalar& nu, const Scalar& rho);
Scalar P2(const Scalar& nu, const Scalar& rho);
// coefficients in increasing powers of rho
std::vector<Scalar> P1_coeffs(const Scalar& nu);
std::vector<Scalar> P2_coeffs(const Scalar& nu);

// A numeric value with a heuristic error band, lo <= mid <= hi.
struct Estimate {
    double lo = 0, mid = 0, hi = 0;
    double width() const { return hi - lo; }
    bool contains(double x) const { return lo <= x && x <= hi; }
    nlohmann::json to_json() const;
};

// Rational isolating interval [lo, hi] for a real root, optionally with its exact value.
struct RootInterval {
    Rational lo, hi;
    std::optional<Scalar> exact;
    double approx() const;
};

// All positive roots of a polynomial with coefficients in Q(sqrt7), isolated by
// exact sign evaluation and refined to width <= width.
std::vector<RootInterval> positive_roots(const std::vector<Scalar>& coeffs, const Rational& width);

enum class Regime { subcritical, critical, supercritical };
std::string regime_name(Regime r);

struct CriticalData {
    Scalar nu;
    Regime regime = Regime::critical;
    std::string polynomial; // "P1" or "P2"
    RootInterval rho;
    BigInterval t_nu{128};
    std::vector<RootInterval> candidates;
    std::optional<double> ratio_rho; // radius estimate used to pick among several roots
    double match_margin = 0;         // relative gap between the chosen root and ratio_rho

    double rho_double() const { return rho.approx(); }
    double t_double() const { return t_nu.mid_double(); }
    // exponent of the coefficient asymptotics: 7/3 at the critical point, 5/2 otherwise
    double alpha() const { return regime == Regime::critical ? 7.0 / 3.0 : 2.5; }
    nlohmann::json to_json() const;
};

struct CriticalOptions {
    Rational width{mpz_class(1), mpz_class("1000000000000000000000000000000")}; // 1e-30
    int ratio_order = 30; // order of the sphere series used to disambiguate roots
};

CriticalData critical_point(const Scalar& nu, const CriticalOptions& opt = {});

// Sum of the series at t_nu: exact partial sum plus a Hurwitz-zeta tail for
// c_k t^k ~ kappa (k/3)^-alpha fitted on the last coefficient.
Estimate eval_at_tnu(const TSeries& series, const CriticalData& crit, double alpha_hint, int min_order = 30);
// Same, at an arbitrary positive t and without any tail.
Estimate eval_partial(const TSeries& series, double t);

struct AsymptoticStep {
    double n = 0;        // coefficient index in units of t^3
    double ratio = 0;    // c_{n+1}/c_n
    double alpha = 0;    // raw exponent estimate
    double alpha_acc = 0; // after one Richardson step
};

struct AsymptoticFit {
    Estimate growth, alpha, kappa;
    std::vector<AsymptoticStep> diagnostics;
    nlohmann::json to_json() const;
};

AsymptoticFit estimate_asymptotics(const TSeries& series, double rho, int burn_in = 3);
AsymptoticFit estimate_asymptotics(const TSeries& series, const CriticalData& crit, int burn_in = 3);
// growth rate in t^3 from the ratio sequence with two Richardson steps in 1/n
Estimate ratio_growth(const TSeries& series, int burn_in = 3);

struct IntervalMatrix {
    int n = 0;
    std::vector<Estimate> entries; // row major

    explicit IntervalMatrix(int size = 0) : n(size), entries(static_cast<size_t>(size) * size) {}
    Estimate& at(int i, int j) { return entries[static_cast<size_t>(i) * n + j]; }
    const Estimate& at(int i, int j) const { return entries[static_cast<size_t>(i) * n + j]; }
    static IntervalMatrix from_doubles(const std::vector<std::vector<double>>& rows);
};

struct ZValues {
    Estimate z1, z2, z_pm; // Z_⊕, Z_⊕⊕, Z_⊖⊕ at t_nu
};

struct Offspring {
    double probability = 0;
    std::vector<int> children; // counts per type
};

struct MeanMatrix {
    static constexpr const char* kTypes[5] = {"+", "++", "W++", "-+", "W-+"};
    IntervalMatrix m{5};
    ZValues inputs;
    double t_nu = 0, nu = 0;
    std::vector<std::vector<Offspring>> offspring; // per type, midpoint probabilities
    nlohmann::json to_json() const;
};

ZValues evaluate_z(const Scalar& nu, int N, const CriticalData& crit);
MeanMatrix mean_matrix(const CriticalData& crit, const ZValues& z);

struct SpectralResult {
    double lo = 0, hi = 0, mid = 0;
    int iterations = 0;
    nlohmann::json to_json() const;
};

SpectralResult spectral_radius(const IntervalMatrix& M, int max_iter = 100000, double tol = 1e-12);

struct HullCheck {
    Estimate value;            // min(Z_⊕⊕, Z_⊕⊖)(t_nu) / t_nu
    double closed_form = 0;    // (131/600)(4 - sqrt7)/(50 sqrt7 - 110)^(1/3)
    bool below_y_c = false;    // upper end compared exactly with y_c
    nlohmann::json to_json() const;
};

HullCheck hull_constant(const CriticalData& crit, const ZValues& z);

} // namespace ising
