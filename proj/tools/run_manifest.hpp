#pragma once

#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

namespace ising::cli {

std::string sha256_hex(const std::string& bytes);

// Provenance record written next to every output. Rerunning `argv` reproduces
// every hashed output byte for byte.
class RunManifest {
public:
    RunManifest(std::string subcommand, std::vector<std::string> argv);

    void set_parameters(nlohmann::json params) { params_ = std::move(params); }
    void add_seed(std::uint64_t seed, std::uint64_t stream);
    // records the hash of `bytes` under `name` and returns the bytes unchanged
    const std::string& record_output(const std::string& name, const std::string& bytes);

    nlohmann::json to_json() const;

private:
    std::string subcommand_;
    std::vector<std::string> argv_;
    nlohmann::json params_ = nlohmann::json::object();
    nlohmann::json seeds_ = nlohmann::json::array();
    nlohmann::json outputs_ = nlohmann::json::array();
    std::string started_at_;
    std::chrono::steady_clock::time_point start_;
};

} // namespace ising::cli
