#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace ising {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string summary;
    nlohmann::json detail = nlohmann::json::object();
    double seconds = 0;
};

constexpr int kCriterionCount = 11;

class Scalar;

// One identity suite at a single nu; shared by the acceptance criteria and `verify`.
struct SuiteReport {
    std::string name;
    bool pass = false;
    nlohmann::json detail = nlohmann::json::object();
};

SuiteReport catalytic_suite(const Scalar& nu, int order);
// Gated on the corrected identity set; the verbatim verdict is kept in the detail.
SuiteReport q_suite(const Scalar& nu, int order);
// every word up to length 4 and the sphere, against the enumeration oracle
SuiteReport oracle_suite(const Scalar& nu, int order);

// Runs one acceptance criterion; failures of the underlying computation are
// reported as a failing result rather than thrown.
CriterionResult run_criterion(int id, std::uint64_t seed = 20240601);

std::vector<CriterionResult> run_criteria(const std::vector<int>& ids, std::uint64_t seed = 20240601);

nlohmann::json criteria_json(const std::vector<CriterionResult>& results);
std::string criteria_table(const std::vector<CriterionResult>& results);
// "[PASS] 3 title: summary"
std::string criterion_line(const CriterionResult& r);

} // namespace ising
