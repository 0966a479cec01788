// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include "ising/acceptance.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    std::vector<int> ids;
    std::string json_path;
    std::uint64_t seed = 20240601;
    app.add_option("--criterion", ids, "criterion id, repeatable (default: all)")
        ->check(CLI::Range(1, ising::kCriterionCount));
    app.add_option("--json", json_path, "write the detailed results here");
    app.add_option("--seed", seed, "seed for the statistical criteria");
    CLI11_PARSE(app, argc, argv);

    if (ids.empty())
        for (int i = 1; i <= ising::kCriterionCount; ++i) ids.push_back(i);

    std::vector<ising::CriterionResult> results;
    bool all = true;
    for (int id : ids) {
        results.push_back(ising::run_criterion(id, seed));
        std::cout << ising::criterion_line(results.back()) << std::endl;
        all = all && results.back().pass;
    }
    if (!json_path.empty()) std::ofstream(json_path) << ising::criteria_json(results).dump(2) << "\n";
    return all ? 0 : 1;
}
