#include "run_manifest.hpp"

#include "ising/sampler.hpp"
#include "ising/version.hpp"

#include <openssl/evp.h>

#include <ctime>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace ising::cli {

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr))
        throw std::runtime_error("sha256 failed");
    std::ostringstream s;
    for (unsigned int i = 0; i < len; ++i) s << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
    return s.str();
}

RunManifest::RunManifest(std::string subcommand, std::vector<std::string> argv)
    : subcommand_(std::move(subcommand)), argv_(std::move(argv)), start_(std::chrono::steady_clock::now()) {
    std::time_t now = std::time(nullptr);
    std::tm utc{};
    gmtime_r(&now, &utc);
    std::ostringstream s;
    s << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ");
    started_at_ = s.str();
}

void RunManifest::add_seed(std::uint64_t seed, std::uint64_t stream) {
    seeds_.push_back({{"seed", seed}, {"stream", stream}});
}

const std::string& RunManifest::record_output(const std::string& name, const std::string& bytes) {
    outputs_.push_back({{"name", name}, {"sha256", sha256_hex(bytes)}, {"bytes", bytes.size()}});
    return bytes;
}

nlohmann::json RunManifest::to_json() const {
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    return {{"subcommand", subcommand_},
            {"argv", argv_},
            {"parameters", params_},
            {"library_version", kVersion},
            {"prng", Rng::kAlgorithm},
            {"seeds", seeds_},
            {"started_at", started_at_},
            {"wall_clock_seconds", elapsed},
            {"outputs", outputs_}};
}

} // namespace ising::cli
