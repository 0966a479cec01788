#pragma once

#include "ising/series.hpp"

#include <gmpxx.h>

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace ising {

// Spin words use '+' for ⊕ and '-' for ⊖.
using SpinWord = std::string;

SpinWord parse_word(std::string_view text); // accepts +/- and the ⊕/⊖ glyphs
SpinWord flip_word(const SpinWord& w);
bool is_valid_word(const SpinWord& w);
// Representative of the word under rotation, reversal and global spin flip.
SpinWord canonical_word(const SpinWord& w);
int min_degree(int p);
bool in_support(int p, int n);

struct CapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidMap : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Rooted combinatorial map. alpha pairs darts into edges, sigma rotates
// counterclockwise around vertices, phi = sigma∘alpha walks faces with the face
// on the right. Vertices are the sigma-cycles numbered by first dart.
struct CombMap {
    std::vector<int> alpha;
    std::vector<int> sigma;
    int root = 0;
    std::vector<int> spins; // +1 / -1 per vertex

    int darts() const { return static_cast<int>(alpha.size()); }
    int edges() const { return darts() / 2; }
    std::vector<int> phi() const;
    std::vector<int> vertex_of() const;
    int vertex_count() const;
    int face_count() const;

    int monochromatic_edges() const;
    // spins of tail(phi^k(root)), k = 1..deg(root face)
    SpinWord boundary_word() const;
    int root_face_degree() const;

    std::string dump() const;
    static CombMap parse(const std::string& line);
};

enum class MapKind { sphere, pgon, nonsimple_boundary };

struct MapRequest {
    MapKind kind = MapKind::sphere;
    int p = 0; // root face degree (ignored for sphere)
};

// Throws InvalidMap with the failing check.
void validate_map(const CombMap& m, const MapRequest& req);

// Lexicographically minimal breadth-first relabeling from the root; equal codes
// iff the spin-decorated rooted maps are isomorphic.
std::vector<int> canonical_code(const CombMap& m, bool with_spins = true);

constexpr int kDefaultOracleCap = 9;

// Every rooted map of the kind with n_edges edges, exactly once, root dart 0,
// spins left empty.
void enumerate_maps(int n_edges, const MapRequest& req, const std::function<void(const CombMap&)>& visit,
                    int cap = kDefaultOracleCap);
std::vector<CombMap> enumerate_maps(int n_edges, const MapRequest& req, int cap = kDefaultOracleCap);

// Per edge count n and boundary word, the number of spin-decorated maps with
// m monochromatic edges. Words are read with boundary spins fixed; interior
// spins are summed over.
struct OracleTable {
    MapRequest request;
    int max_edges = 0;
    // counts[n][word][m]
    std::vector<std::map<SpinWord, std::vector<mpz_class>>> counts;

    TSeries series(const SpinWord& w, const Scalar& nu) const;
    // sums every spin assignment of every map (words ignored)
    TSeries total(const Scalar& nu) const;
};

OracleTable build_oracle_table(const MapRequest& req, int max_edges, int cap = kDefaultOracleCap);

TSeries oracle_series(const SpinWord& omega, const Scalar& nu, int N, int cap = kDefaultOracleCap);
TSeries oracle_sphere(const Scalar& nu, int N, int cap = kDefaultOracleCap);
// maps whose root face has degree p, boundary not necessarily simple, with the global factor 1/2
TSeries oracle_Q(int p, const Scalar& nu, int N, int cap = kDefaultOracleCap);

// polynomial in nu with integer coefficients, evaluated exactly
Scalar eval_histogram(const std::vector<mpz_class>& h, const Scalar& nu);

} // namespace ising
