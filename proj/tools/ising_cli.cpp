#include "run_manifest.hpp"

#include "ising/acceptance.hpp"
#include "ising/criticality.hpp"
#include "ising/maps_enum.hpp"
#include "ising/partition.hpp"
#include "ising/sampler.hpp"
#include "ising/version.hpp"

#include <CLI11.hpp>
#include <boost/core/demangle.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using nlohmann::json;

namespace ising::cli {
namespace {

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Raised when a suite or check ran to completion and found a failure.
struct VerificationFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Scalar parse_scalar_arg(const std::string& text, const std::string& flag) {
    if (text == "nu_c") return nu_critical();
    if (text == "y_c") return y_critical();
    if (text == "t_nu") throw UsageError(flag + ": t_nu is irrational over Q(sqrt7); it is accepted only by --t");
    try {
        return Scalar::parse(text);
    } catch (const ParseError& e) {
        throw UsageError(flag + ": " + e.what());
    }
}

// "p/q" or a decimal such as 1e-30 or 0.001, read exactly
Rational parse_width(const std::string& text) {
    static const std::regex decimal(R"(^(\d+)(?:\.(\d+))?(?:[eE]([+-]?\d+))?$)");
    std::smatch m;
    if (!std::regex_match(text, m, decimal)) {
        try {
            return parse_rational(text);
        } catch (const ParseError& e) {
            throw UsageError(std::string("--width: ") + e.what());
        }
    }
    const std::string frac = m[2].str();
    mpz_class num(m[1].str() + frac), den = 1;
    long exp = m[3].matched ? std::stol(m[3].str()) : 0;
    exp -= static_cast<long>(frac.size());
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exp)));
    if (exp >= 0) num *= scale;
    else den = scale;
    Rational q(num, den);
    q.canonicalize();
    if (q <= 0) throw UsageError("--width must be positive");
    return q;
}

double parse_t(const std::string& text) {
    static const std::regex decimal(R"(^\d*\.?\d+(?:[eE][+-]?\d+)?$)");
    if (std::regex_match(text, decimal)) return std::stod(text);
    return parse_scalar_arg(text, "--t").to_double();
}

struct Target {
    std::string kind; // sphere, word, U, zplus
    SpinWord word;
    int p = 0;
    std::string text;
};

Target parse_target(const std::string& text) {
    Target t;
    t.text = text;
    if (text == "sphere" || text == "U") {
        t.kind = text;
        return t;
    }
    if (text.rfind("word:", 0) == 0) {
        t.kind = "word";
        try {
            t.word = parse_word(text.substr(5));
        } catch (const std::exception& e) {
            throw UsageError(std::string("--target: ") + e.what());
        }
        if (t.word.empty()) throw UsageError("--target: empty word");
        return t;
    }
    if (text.rfind("zplus:", 0) == 0) {
        t.kind = "zplus";
        try {
            t.p = std::stoi(text.substr(6));
        } catch (const std::exception&) {
            throw UsageError("--target: zplus needs an integer length");
        }
        if (t.p < 1) throw UsageError("--target: zplus length must be >= 1");
        return t;
    }
    throw UsageError("--target must be sphere, word:<w>, U or zplus:<p>");
}

TSeries compute_target(const Target& t, const Scalar& nu, int N) {
    if (t.kind == "sphere") return sphere_series(nu, N);
    if (t.kind == "U") return solve_U(nu, N);
    if (t.kind == "zplus") return zplus_recursion(t.p, nu, N, solve_dobrushin(nu, N + t.p - 1));
    WordTable table(solve_dobrushin(nu, N));
    return table.series(t.word);
}

json series_rows(const TSeries& s) {
    json rows = json::array();
    for (const auto& [k, c] : s.coeffs()) rows.push_back({{"n", k}, {"exact", c.str()}, {"approx", c.to_double()}});
    return rows;
}

std::string series_csv(const TSeries& s) {
    std::ostringstream out;
    out << std::setprecision(17) << "exponent,coefficient,approx\n";
    for (const auto& [k, c] : s.coeffs()) out << k << ",\"" << c.str() << "\"," << c.to_double() << "\n";
    return out.str();
}

std::string write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
    return text;
}

json read_json_file(const fs::path& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read " + path.string());
    return json::parse(f);
}

// Shared plumbing for every subcommand: the manifest, where output goes.
struct Session {
    std::vector<std::string> argv;
    std::string output_path;   // empty: stdout
    std::string manifest_path; // empty: embedded in JSON, stderr for CSV

    // JSON document with its manifest under the "manifest" key; the hash covers
    // the document without that key.
    void emit_json(RunManifest& manifest, json doc) const {
        const std::string body = doc.dump(2);
        manifest.record_output(output_path.empty() ? "stdout" : output_path, body);
        doc["manifest"] = manifest.to_json();
        emit(doc.dump(2) + "\n");
        if (!manifest_path.empty()) write_text(manifest_path, manifest.to_json().dump(2) + "\n");
    }

    void emit_csv(RunManifest& manifest, const std::string& csv) const {
        manifest.record_output(output_path.empty() ? "stdout" : output_path, csv);
        emit(csv);
        const std::string m = manifest.to_json().dump(2) + "\n";
        if (manifest_path.empty()) std::cerr << m;
        else write_text(manifest_path, m);
    }

    void emit(const std::string& text) const {
        if (output_path.empty()) std::cout << text << std::flush;
        else write_text(output_path, text);
    }
};

// ---------------------------------------------------------------- coeffs

struct CoeffsArgs {
    std::string nu = "2", target = "sphere", out = "json";
    int order = 15;
};

void run_coeffs(const Session& s, const CoeffsArgs& a) {
    const Scalar nu = parse_scalar_arg(a.nu, "--nu");
    const Target target = parse_target(a.target);
    RunManifest manifest("coeffs", s.argv);
    manifest.set_parameters({{"nu", nu.str()}, {"target", a.target}, {"order", a.order}, {"out", a.out}});
    const TSeries series = compute_target(target, nu, a.order);
    if (a.out == "csv") {
        s.emit_csv(manifest, series_csv(series));
        return;
    }
    s.emit_json(manifest, {{"kind", "coefficients"},
                           {"target", a.target},
                           {"nu", nu.str()},
                           {"order", a.order},
                           {"coefficients", series_rows(series)}});
}

// ---------------------------------------------------------------- oracle

struct OracleArgs {
    std::string kind = "sphere", nu, dump;
    int p = 1, order = 6, cap = kDefaultOracleCap;
};

void run_oracle(const Session& s, const OracleArgs& a) {
    if (a.order > a.cap) throw UsageError("--order exceeds --cap");
    MapRequest req{a.kind == "sphere" ? MapKind::sphere : MapKind::pgon, a.kind == "sphere" ? 0 : a.p};
    RunManifest manifest("oracle", s.argv);
    json params = {{"kind", a.kind}, {"order", a.order}, {"cap", a.cap}};
    if (req.kind == MapKind::pgon) params["p"] = a.p;
    if (!a.nu.empty()) params["nu"] = a.nu;
    manifest.set_parameters(params);

    const OracleTable table = build_oracle_table(req, a.order, a.cap);
    json sizes = json::array();
    std::vector<SpinWord> words;
    for (int n = 0; n <= a.order; ++n) {
        json per_word = json::object();
        for (const auto& [w, hist] : table.counts[n]) {
            json h = json::array();
            for (const auto& c : hist) h.push_back(c.get_str());
            per_word[w.empty() ? "*" : w] = h;
            if (std::find(words.begin(), words.end(), w) == words.end()) words.push_back(w);
        }
        sizes.push_back({{"n", n}, {"monochromatic_histograms", per_word}});
    }
    json doc = {{"kind", "oracle"}, {"map_kind", a.kind}, {"order", a.order}, {"sizes", sizes}};
    if (req.kind == MapKind::pgon) doc["p"] = a.p;
    if (!a.nu.empty()) {
        const Scalar nu = parse_scalar_arg(a.nu, "--nu");
        json series = json::object();
        if (req.kind == MapKind::sphere) series["total"] = series_rows(table.total(nu));
        else
            for (const auto& w : words) series[w] = series_rows(table.series(w, nu));
        doc["series"] = series;
    }
    if (!a.dump.empty()) {
        std::ostringstream lines;
        for (int n = 0; n <= a.order; ++n)
            enumerate_maps(n, req, [&](const CombMap& m) {
                CombMap d = m;
                const int v = m.vertex_count();
                for (long mask = 0; mask < (1L << v); ++mask) {
                    d.spins.assign(v, 1);
                    for (int i = 0; i < v; ++i)
                        if ((mask >> i) & 1) d.spins[i] = -1;
                    lines << d.dump() << "\n";
                }
            }, a.cap);
        manifest.record_output(a.dump, write_text(a.dump, lines.str()));
    }
    s.emit_json(manifest, doc);
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
    std::string nu = "2", suites = "catalytic,q,oracle";
    int order = 15;
};

void run_verify(const Session& s, const VerifyArgs& a) {
    const Scalar nu = parse_scalar_arg(a.nu, "--nu");
    std::vector<std::string> names;
    std::stringstream ss(a.suites);
    for (std::string item; std::getline(ss, item, ',');) {
        if (item != "catalytic" && item != "q" && item != "oracle")
            throw UsageError("--suite: unknown suite '" + item + "' (catalytic, q, oracle)");
        names.push_back(item);
    }
    if (names.empty()) throw UsageError("--suite: no suite selected");
    RunManifest manifest("verify", s.argv);
    manifest.set_parameters({{"nu", nu.str()}, {"order", a.order}, {"suites", names}});

    json suites = json::object();
    std::vector<std::string> failed;
    for (const auto& name : names) {
        SuiteReport r = name == "catalytic" ? catalytic_suite(nu, a.order)
                        : name == "q"       ? q_suite(nu, a.order)
                                            : oracle_suite(nu, a.order);
        suites[name] = {{"pass", r.pass}, {"detail", r.detail}};
        if (!r.pass) failed.push_back(name);
    }
    s.emit_json(manifest, {{"kind", "verification"}, {"nu", nu.str()}, {"order", a.order}, {"pass", failed.empty()}, {"suites", suites}});
    if (!failed.empty()) {
        std::string list;
        for (const auto& f : failed) list += (list.empty() ? "" : ", ") + f;
        throw VerificationFailed("suites failed: " + list);
    }
}

// ---------------------------------------------------------------- critical, spectral, asymp

struct CriticalArgs {
    std::string nu = "nu_c", width = "1e-30", target = "sphere";
    int order = 45;
};

CriticalData critical_for(const CriticalArgs& a, const Scalar& nu) {
    CriticalOptions opt;
    opt.width = parse_width(a.width);
    return critical_point(nu, opt);
}

void run_critical(const Session& s, const CriticalArgs& a) {
    const Scalar nu = parse_scalar_arg(a.nu, "--nu");
    RunManifest manifest("critical", s.argv);
    manifest.set_parameters({{"nu", nu.str()}, {"width", a.width}});
    json doc = critical_for(a, nu).to_json();
    doc["kind"] = "critical";
    s.emit_json(manifest, doc);
}

void run_spectral(const Session& s, const CriticalArgs& a) {
    const Scalar nu = parse_scalar_arg(a.nu, "--nu");
    RunManifest manifest("spectral", s.argv);
    manifest.set_parameters({{"nu", nu.str()}, {"order", a.order}, {"width", a.width}});
    const CriticalData crit = critical_for(a, nu);
    const ZValues z = evaluate_z(nu, a.order, crit);
    const MeanMatrix mm = mean_matrix(crit, z);
    const SpectralResult sr = spectral_radius(mm.m);
    s.emit_json(manifest, {{"kind", "spectral"},
                           {"nu", nu.str()},
                           {"order", a.order},
                           {"critical", crit.to_json()},
                           {"matrix", mm.to_json()},
                           {"radius", sr.to_json()},
                           {"hull", hull_constant(crit, z).to_json()}});
}

void run_asymp(const Session& s, const CriticalArgs& a) {
    const Scalar nu = parse_scalar_arg(a.nu, "--nu");
    const Target target = parse_target(a.target);
    RunManifest manifest("asymp", s.argv);
    manifest.set_parameters({{"nu", nu.str()}, {"target", a.target}, {"order", a.order}, {"width", a.width}});
    const CriticalData crit = critical_for(a, nu);
    const TSeries series = compute_target(target, nu, a.order);
    s.emit_json(manifest, {{"kind", "asymptotics"},
                           {"nu", nu.str()},
                           {"target", a.target},
                           {"order", a.order},
                           {"critical", crit.to_json()},
                           {"fit", estimate_asymptotics(series, crit).to_json()}});
}

// ---------------------------------------------------------------- sample, stats

struct SampleArgs {
    std::string method, nu = "2", t = "t_nu", word = "+", out;
    int n = 10, reps = 1, jobs = 1, r_max = 3, order = 30;
    long steps = 100000;
    std::uint64_t seed = 1;
    double tolerance = 1e-3;
};

json one_sample(const SampleArgs& a, const Scalar& nu, double t, bool at_critical, std::uint64_t rep,
                std::unique_ptr<ExactSampler>& exact) {
    json doc = {{"kind", "sample"},
                {"method", a.method},
                {"nu", nu.str()},
                {"rep", rep},
                {"seed", a.seed},
                {"stream", rep},
                {"prng", Rng::kAlgorithm}};
    if (a.method == "exact") {
        if (!exact) exact = std::make_unique<ExactSampler>(nu, a.n);
        Rng rng(a.seed, rep);
        doc["n"] = a.n;
        doc["map"] = map_to_json(exact->sample_sphere(a.n, rng));
    } else if (a.method == "mcmc") {
        McmcOptions opt;
        opt.stream = rep;
        McmcResult r = mcmc_sample(nu, a.n, a.steps, a.seed, opt);
        doc["n"] = a.n;
        doc["steps"] = r.steps;
        doc["chain"] = {{"flips_accepted", r.flips_accepted},
                        {"flips_rejected", r.flips_rejected},
                        {"flips_unflippable", r.flips_unflippable},
                        {"monochromatic_incremental", r.monochromatic_incremental},
                        {"monochromatic_recomputed", r.monochromatic_recomputed},
                        {"validations", r.validations}};
        doc["map"] = map_to_json(r.map);
    } else {
        BoltzmannOptions opt;
        opt.order = a.order;
        opt.step_cap = a.steps;
        opt.tolerance = a.tolerance;
        opt.at_critical = at_critical;
        opt.stream = rep;
        BoltzmannResult r = boltzmann_sample(a.word, nu, t, a.seed, opt);
        doc["word"] = a.word;
        doc["t"] = t;
        doc["steps"] = r.steps;
        doc["max_discrepancy"] = r.max_discrepancy;
        doc["renormalised"] = r.renormalised;
        doc["map"] = map_to_json(r.map);
    }
    return doc;
}

std::string sample_name(int rep) {
    std::ostringstream s;
    s << "sample_" << std::setw(5) << std::setfill('0') << rep << ".json";
    return s.str();
}

void run_sample(const Session& s, SampleArgs a) {
    const Scalar nu = parse_scalar_arg(a.nu, "--nu");
    if (a.reps < 1) throw UsageError("--reps must be >= 1");
    if (a.jobs < 1) throw UsageError("--jobs must be >= 1");
    double t = 0;
    bool at_critical = false;
    if (a.method == "boltzmann") {
        if (a.t == "t_nu") at_critical = true;
        else t = parse_t(a.t);
        try {
            a.word = parse_word(a.word);
        } catch (const std::exception& e) {
            throw UsageError(std::string("--word: ") + e.what());
        }
    }
    RunManifest manifest("sample", s.argv);
    json params = {{"method", a.method}, {"nu", nu.str()}, {"reps", a.reps}, {"seed", a.seed}, {"out", a.out}, {"r_max", a.r_max}};
    if (a.method == "boltzmann")
        params.update({{"t", a.t}, {"word", a.word}, {"order", a.order}, {"step_cap", a.steps}, {"tolerance", a.tolerance}});
    else params["n"] = a.n;
    if (a.method == "mcmc") params["steps"] = a.steps;
    manifest.set_parameters(params);

    fs::create_directories(a.out);
    std::vector<json> docs(a.reps);
    std::vector<std::exception_ptr> errors(a.jobs);
    auto worker = [&](int w) {
        std::unique_ptr<ExactSampler> exact;
        try {
            for (int rep = w; rep < a.reps; rep += a.jobs)
                docs[rep] = one_sample(a, nu, t, at_critical, static_cast<std::uint64_t>(rep), exact);
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < std::min(a.jobs, a.reps); ++w) pool.emplace_back(worker, w);
    worker(0);
    for (auto& th : pool) th.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    SampleStats stats;
    stats.r_max = a.r_max;
    for (int rep = 0; rep < a.reps; ++rep) {
        const std::string name = sample_name(rep);
        manifest.add_seed(a.seed, static_cast<std::uint64_t>(rep));
        manifest.record_output(name, write_text((fs::path(a.out) / name).string(), docs[rep].dump(2) + "\n"));
        stats.add(map_from_json(docs[rep]["map"]));
    }
    stats.metadata = {{"method", a.method}, {"nu", nu.str()}, {"samples", a.reps}};
    json stats_doc = stats.to_json();
    stats_doc["kind"] = "stats";
    manifest.record_output("stats.json", write_text((fs::path(a.out) / "stats.json").string(), stats_doc.dump(2) + "\n"));
    const json m = manifest.to_json();
    write_text((fs::path(a.out) / "manifest.json").string(), m.dump(2) + "\n");
    s.emit(json{{"kind", "sample_run"}, {"out", a.out}, {"samples", a.reps}, {"stats", stats_doc}, {"manifest", m}}.dump(2) + "\n");
}

struct StatsArgs {
    std::string in;
    int r_max = 3;
};

void run_stats(const Session& s, const StatsArgs& a) {
    if (!fs::is_directory(a.in)) throw UsageError("--in: not a directory: " + a.in);
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(a.in)) {
        const std::string name = e.path().filename().string();
        if (name.rfind("sample_", 0) == 0 && e.path().extension() == ".json") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw std::runtime_error("no sample_*.json files in " + a.in);
    RunManifest manifest("stats", s.argv);
    manifest.set_parameters({{"in", a.in}, {"r_max", a.r_max}});
    SampleStats stats;
    stats.r_max = a.r_max;
    json methods = json::array();
    for (const auto& f : files) {
        json doc = read_json_file(f);
        CombMap m = map_from_json(doc.at("map"));
        validate_map(m, {doc.contains("word") ? MapKind::pgon : MapKind::sphere,
                         doc.contains("word") ? static_cast<int>(doc["word"].get<std::string>().size()) : 0});
        stats.add(m);
        if (doc.contains("method") && std::find(methods.begin(), methods.end(), doc["method"]) == methods.end())
            methods.push_back(doc["method"]);
    }
    stats.metadata = {{"source", a.in}, {"samples", files.size()}, {"methods", methods}};
    json doc = stats.to_json();
    doc["kind"] = "stats";
    s.emit_json(manifest, doc);
}

// ---------------------------------------------------------------- report

struct ReportArgs {
    std::vector<int> criteria;
    std::string format = "text", json_path;
    std::uint64_t seed = 20240601;
};

void run_report(const Session& s, ReportArgs a) {
    if (a.criteria.empty())
        for (int i = 1; i <= kCriterionCount; ++i) a.criteria.push_back(i);
    for (int id : a.criteria)
        if (id < 1 || id > kCriterionCount) throw UsageError("--criteria: no criterion " + std::to_string(id));
    RunManifest manifest("report", s.argv);
    manifest.set_parameters({{"criteria", a.criteria}, {"seed", a.seed}, {"format", a.format}});
    manifest.add_seed(a.seed, 0);
    const auto results = run_criteria(a.criteria, a.seed);
    json doc = criteria_json(results);
    doc["kind"] = "report";
    if (!a.json_path.empty()) {
        json file_doc = doc;
        manifest.record_output(a.json_path, file_doc.dump(2));
        file_doc["manifest"] = manifest.to_json();
        write_text(a.json_path, file_doc.dump(2) + "\n");
    }
    if (a.format == "json") s.emit_json(manifest, doc);
    else s.emit(criteria_table(results));
}

int error_exit(const std::string& type, const std::string& message) {
    std::cerr << json{{"error", {{"type", type}, {"message", message}}}}.dump() << "\n";
    return 1;
}

} // namespace

int dispatch(int argc, char** argv) {
    CLI::App app{"Exact series, criticality and sampling for Ising-decorated random triangulations", "ising"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    Session session;
    session.argv.assign(argv + 1, argv + argc);
    session.argv.insert(session.argv.begin(), "ising");

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("-o,--output", session.output_path, "write the main output here instead of stdout");
        sub->add_option("--manifest", session.manifest_path, "also write the run manifest to this file");
    };

    CoeffsArgs coeffs;
    auto* c = app.add_subcommand("coeffs", "series coefficients of a partition function");
    c->add_option("--nu", coeffs.nu, "spin coupling: p/q, a/b+c/d*sqrt7, nu_c or y_c");
    c->add_option("--target", coeffs.target, "sphere | word:<+-...> | U | zplus:<p>");
    c->add_option("--order", coeffs.order, "highest power of t")->check(CLI::Range(0, 400));
    c->add_option("--out", coeffs.out, "json | csv")->check(CLI::IsMember({"json", "csv"}));
    add_common(c);

    OracleArgs oracle;
    auto* o = app.add_subcommand("oracle", "brute-force enumeration tables");
    o->add_option("--kind", oracle.kind, "sphere | pgon")->check(CLI::IsMember({"sphere", "pgon"}));
    o->add_option("--p", oracle.p, "boundary length for pgon")->check(CLI::Range(1, 12));
    o->add_option("--order", oracle.order, "largest number of edges")->check(CLI::Range(0, 14));
    o->add_option("--cap", oracle.cap, "enumeration size limit")->check(CLI::Range(1, 14));
    o->add_option("--nu", oracle.nu, "also evaluate the series at this coupling");
    o->add_option("--dump", oracle.dump, "write every spin-decorated map, one per line");
    add_common(o);

    VerifyArgs verify;
    auto* v = app.add_subcommand("verify", "run the identity suites; exit 1 on any failure");
    v->add_option("--nu", verify.nu, "spin coupling");
    v->add_option("--order", verify.order, "series order")->check(CLI::Range(1, 60));
    v->add_option("--suite", verify.suites, "comma-separated subset of catalytic,q,oracle");
    add_common(v);

    CriticalArgs critical;
    auto* cr = app.add_subcommand("critical", "radius of convergence and regime");
    cr->add_option("--nu", critical.nu, "spin coupling");
    cr->add_option("--width", critical.width, "root isolation width (decimal or p/q)");
    add_common(cr);

    CriticalArgs spectral;
    spectral.order = 45;
    auto* sp = app.add_subcommand("spectral", "mean offspring matrix and its spectral radius");
    sp->add_option("--nu", spectral.nu, "spin coupling");
    sp->add_option("--order", spectral.order, "series order behind the evaluations")->check(CLI::Range(30, 200));
    sp->add_option("--width", spectral.width, "root isolation width");
    add_common(sp);

    CriticalArgs asymp;
    asymp.order = 45;
    auto* as = app.add_subcommand("asymp", "coefficient asymptotics fit");
    as->add_option("--nu", asymp.nu, "spin coupling");
    as->add_option("--target", asymp.target, "sphere | word:<w> | U | zplus:<p>");
    as->add_option("--order", asymp.order, "series order")->check(CLI::Range(12, 200));
    as->add_option("--width", asymp.width, "root isolation width");
    add_common(as);

    SampleArgs sample;
    auto* sa = app.add_subcommand("sample", "draw random triangulations into a directory");
    sa->add_option("method", sample.method, "exact | mcmc | boltzmann")
        ->required()
        ->check(CLI::IsMember({"exact", "mcmc", "boltzmann"}));
    sa->add_option("--nu", sample.nu, "spin coupling");
    sa->add_option("--n", sample.n, "size: sphere triangulations with 3n edges (exact, mcmc)")->check(CLI::Range(1, 100000));
    sa->add_option("--t", sample.t, "Boltzmann parameter, or t_nu");
    sa->add_option("--word", sample.word, "boundary word for boltzmann");
    sa->add_option("--steps", sample.steps, "chain steps (mcmc) or step cap (boltzmann)")->check(CLI::NonNegativeNumber);
    sa->add_option("--order", sample.order, "series order behind Boltzmann evaluations")->check(CLI::Range(6, 200));
    sa->add_option("--tolerance", sample.tolerance, "largest renormalisation discrepancy")->check(CLI::PositiveNumber);
    sa->add_option("--seed", sample.seed, "64-bit seed");
    sa->add_option("--reps", sample.reps, "number of independent samples");
    sa->add_option("--out", sample.out, "output directory")->required();
    sa->add_option("--jobs", sample.jobs, "worker threads");
    sa->add_option("--r-max", sample.r_max, "largest ball radius in the statistics")->check(CLI::Range(1, 50));

    StatsArgs stats;
    auto* st = app.add_subcommand("stats", "recompute statistics from stored samples");
    st->add_option("--in", stats.in, "directory written by sample")->required();
    st->add_option("--r-max", stats.r_max, "largest ball radius")->check(CLI::Range(1, 50));
    add_common(st);

    ReportArgs report;
    auto* re = app.add_subcommand("report", "acceptance criteria summary");
    re->add_option("--criteria", report.criteria, "criterion ids (default: all)")->delimiter(',');
    re->add_option("--format", report.format, "text | json")->check(CLI::IsMember({"text", "json"}));
    re->add_option("--json", report.json_path, "also write the JSON table here");
    re->add_option("--seed", report.seed, "seed for the statistical criteria");
    add_common(re);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (c->parsed()) run_coeffs(session, coeffs);
        else if (o->parsed()) run_oracle(session, oracle);
        else if (v->parsed()) run_verify(session, verify);
        else if (cr->parsed()) run_critical(session, critical);
        else if (sp->parsed()) run_spectral(session, spectral);
        else if (as->parsed()) run_asymp(session, asymp);
        else if (sa->parsed()) run_sample(session, sample);
        else if (st->parsed()) run_stats(session, stats);
        else if (re->parsed()) run_report(session, report);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\nRun with --help for more information.\n";
        return 2;
    } catch (const std::exception& e) {
        return error_exit(boost::core::demangle(typeid(e).name()), e.what());
    }
    return 0;
}

} // namespace ising::cli

int main(int argc, char** argv) { return ising::cli::dispatch(argc, argv); }
