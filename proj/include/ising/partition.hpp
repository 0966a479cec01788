#pragma once

#include "ising/maps_enum.hpp"
#include "ising/series.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ising {

struct SeedMissing : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Degenerate : std::domain_error {
    using std::domain_error::domain_error;
};

// Partition functions with Dobrushin boundary ⊕^p ⊖^q.
struct DobrushinTable {
    Scalar nu;
    int N = 0;
    BivSeries zpm;   // sum over p,q >= 1 of Z_{⊕^p ⊖^q} x^p y^q
    BivSeries zplus; // sum over p >= 1 of Z_{⊕^p} x^p (y-degree 0)
    TSeries z1;      // Z_⊕
    TSeries z2;      // Z_{⊕⊕}
    TSeries z_pm;    // Z_{⊕⊖}

    TSeries word(const SpinWord& w) const; // any word of the form ⊕^p ⊖^q or its flip
};

// Default catalytic cap: the x-degree at t-order k never exceeds k + 1.
DobrushinTable solve_dobrushin(const Scalar& nu, int N, int degree_cap = -1);

// Z_ω for arbitrary boundary words via the root-edge deletion identity, evaluated
// coefficient by coefficient on demand. Words of length 1 and 2 are seeded.
class WordTable {
public:
    WordTable() = default;
    explicit WordTable(const DobrushinTable& seeds);
    WordTable(Scalar nu, int N, std::map<SpinWord, TSeries> seeds);

    const Scalar& nu() const { return nu_; }
    int order() const { return N_; }

    Scalar coeff(const SpinWord& w, int n);
    TSeries series(const SpinWord& w);
    size_t memo_size() const { return memo_.size(); }

private:
    Scalar seed_coeff(const SpinWord& canon, int n) const;

    Scalar nu_{1};
    int N_ = 0;
    std::map<SpinWord, TSeries> seeds_; // keyed by canonical word
    std::map<std::pair<SpinWord, int>, Scalar> memo_;
};

TSeries solve_word(const SpinWord& omega, const Scalar& nu, int N, WordTable& table);

// Sphere series from the root-edge opening relation; the table must reach order N + 1.
TSeries sphere_series(const DobrushinTable& table, int N);
TSeries sphere_series(const Scalar& nu, int N);

TSeries solve_U(const Scalar& nu, int N);
// t^3 reconstructed from U through the defining rational relation
TSeries U_relation_rhs(const TSeries& U);

// Z_{⊕^p} from the y^p-coefficient recursion; needs table.N >= N + p - 1.
TSeries zplus_recursion(int p, const Scalar& nu, int N, const DobrushinTable& table);

enum class PolTranscription { corrected, verbatim };

struct CatalyticReport {
    Scalar nu;
    int N = 0;
    bool degenerate = false; // nu == 1: only y*Pol is checked
    BivSeries residual;      // in (t, y), x-degree 0
    bool zero() const { return residual.is_zero(); }
    int first_nonzero_order() const;
};

CatalyticReport verify_catalytic(const Scalar& nu, int N, const DobrushinTable& table,
                                 PolTranscription pol = PolTranscription::corrected);

struct IdentityCheck {
    std::string name;
    bool holds = false;
    int checked_to = 0;
    int first_failure = -1;
    std::string note;
    bool supplementary = false; // derived cross-check outside the reference set
    std::string replaces;       // name of the reference check this one corrects
};

struct QIdentityReport {
    Scalar nu;
    int N = 0;
    std::vector<IdentityCheck> checks;
    bool all_hold() const;         // every check, supplementary included
    bool reference_hold() const;   // the reference set only
    // the reference set with each superseded check swapped for its correction
    bool corrected_hold() const;
};

QIdentityReport check_q_identities(const Scalar& nu, int N, int oracle_cap = kDefaultOracleCap + 1);

// equality to order n, with the first failing order (or -1)
int first_difference(const TSeries& a, const TSeries& b, int n);

} // namespace ising
