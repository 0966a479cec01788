#pragma once

#include "ising/criticality.hpp"
#include "ising/maps_enum.hpp"
#include "ising/partition.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ising {

struct CoefficientsMissing : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StepCapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EvaluationTooCoarse : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// SplitMix64 over a (seed, stream) pair; streams give independent replicas.
class Rng {
public:
    static constexpr const char* kAlgorithm = "splitmix64";

    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);
    std::uint64_t next();
    double uniform(); // [0, 1)
    std::uint64_t below(std::uint64_t n);
    bool bernoulli(double p) { return uniform() < p; }
    // index drawn proportionally to nonnegative weights
    size_t choose(const std::vector<double>& weights);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

private:
    std::uint64_t seed_, stream_, state_;
};

enum class PeelCase { edge_triangulation, new_vertex, boundary_reattach, branch };
std::string peel_case_name(PeelCase c);

struct PeelingEvent {
    PeelCase kind = PeelCase::new_vertex;
    int spin = 0;  // new_vertex: spin of the revealed vertex
    int index = 0; // boundary_reattach / branch: boundary position of the third vertex
    double weight = 0; // probability of the case that was drawn
};

// Exact sampler for the law proportional to nu^m over rooted spin-decorated
// triangulations of fixed size, driven by exact word-table coefficients.
class ExactSampler {
public:
    ExactSampler(Scalar nu, int max_vertices);

    const Scalar& nu() const { return nu_; }
    int max_vertices() const { return max_n_; }

    // sphere triangulation with 3n edges
    CombMap sample_sphere(int n, Rng& rng, std::vector<PeelingEvent>* events = nullptr);
    // triangulation of the p-gon with the given boundary word and n_edges edges
    CombMap sample_word(const SpinWord& omega, int n_edges, Rng& rng, std::vector<PeelingEvent>* events = nullptr);

private:
    double coeff(const SpinWord& w, int n);

    Scalar nu_;
    int max_n_;
    int order_;
    std::unique_ptr<WordTable> table_;
    std::map<std::pair<SpinWord, int>, double> cache_;
};

CombMap exact_sample(const Scalar& nu, int n, std::uint64_t seed, std::uint64_t stream = 0);

// Probability of every rooted spin-decorated sphere triangulation with n_edges
// edges, keyed by canonical code.
std::map<std::vector<int>, double> exact_law(const Scalar& nu, int n_edges);

struct BoltzmannOptions {
    int order = 30;             // series order behind every Z_ω(t)
    long step_cap = 100000;
    double tolerance = 1e-3;    // largest accepted renormalisation discrepancy
    bool at_critical = false;   // t = t_nu, with tail-corrected evaluations
    std::uint64_t stream = 0;
};

struct BoltzmannResult {
    CombMap map;
    std::vector<PeelingEvent> events;
    long steps = 0;
    double max_discrepancy = 0;
    int renormalised = 0; // steps whose case probabilities were rescaled
};

BoltzmannResult boltzmann_sample(const SpinWord& omega, const Scalar& nu, double t, std::uint64_t seed,
                                 const BoltzmannOptions& opt = {});

struct McmcOptions {
    long validate_every = 10000;
    long observe_every = 1; // 0 disables the observer
    std::uint64_t stream = 0;
    std::function<void(const CombMap&, long step)> observer;
};

struct McmcResult {
    CombMap map;
    long steps = 0;
    long flips_accepted = 0, flips_rejected = 0, flips_unflippable = 0;
    long monochromatic_incremental = 0;
    long monochromatic_recomputed = 0;
    int validations = 0;
};

// Flip/heat-bath chain on sphere triangulations with 3n edges, started from a
// fan with every spin ⊕.
McmcResult mcmc_sample(const Scalar& nu, int n, long steps, std::uint64_t seed, const McmcOptions& opt = {});

struct SampleStats {
    long count = 0;
    int r_max = 0;
    std::map<int, long> root_degree;
    std::map<int, long> hull_perimeter;
    std::vector<std::map<int, long>> ball_volume; // index R-1 for R = 1..r_max
    std::vector<double> mono_fraction;
    nlohmann::json metadata = nlohmann::json::object();

    void add(const CombMap& m);
    void merge(const SampleStats& o);
    double mean_mono_fraction() const;
    nlohmann::json to_json() const;
};

SampleStats collect_stats(const std::vector<CombMap>& samples, int r_max);

int root_degree(const CombMap& m);
// faces with at least one vertex at graph distance < r from the root vertex
int ball_volume(const CombMap& m, int r);
// boundary length of the radius-1 hull, the outside being the largest component
int hull_perimeter(const CombMap& m);

nlohmann::json map_to_json(const CombMap& m);
CombMap map_from_json(const nlohmann::json& j);

double total_variation(const std::map<std::vector<int>, double>& p, const std::map<std::vector<int>, double>& q);

struct ChiSquare {
    double statistic = 0;
    int dof = 0;
    double p_value = 0;
    long unexpected = 0; // observations outside the support of the law
};

ChiSquare chi_square(const std::map<std::vector<int>, long>& observed, const std::map<std::vector<int>, double>& law);

} // namespace ising
