#pragma once

// Experiment runner behind the lorcap CLI: one entry point per command, each
// writing its artifact plus a `<artifact>.meta.json` sidecar that records the
// config hash, seed, tolerance policy and the invariants checked on the way.

#include "lorcap/io.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace lorcap {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitInvariantViolation = 2;

struct Budgets {
    int max_iterations = 20000;  // capacity solver iterations
    long long max_items = 0;     // 0: LORCAP_BUDGET or the built-in cap
    int scan_limit = 2000;       // pipeline j scan
};

struct ExperimentConfig {
    std::string command;  // norm | cantor | testfn | hausdorff | capacity | pipeline
    json params = json::object();
    std::string output;  // empty: print only
    std::uint64_t seed = 0;
    Budgets budgets;

    Budget budget() const;
};

ExperimentConfig config_from_json(const json& j);
json to_json(const ExperimentConfig& config);

/// FNV-1a (64 bit, hex) over the canonical JSON of seed, budgets and tolerance policy.
std::string config_hash(const ExperimentConfig& config);

struct RunOutcome {
    int exit_code = kExitOk;
    std::string printed;  // what the CLI writes to stdout
    std::vector<std::filesystem::path> artifacts;
    json invariants = json::object();
};

/// Input errors surface as InputError / std::invalid_argument / ResourceError;
/// invariant violations are reported through exit_code.
RunOutcome run(const ExperimentConfig& config);

struct ReportOutcome {
    int exit_code = kExitOk;
    json summary;
};

/// Consolidates artifacts by reading their sidecars. Missing artifacts or
/// disagreeing config hashes give exit code 1.
ReportOutcome report(const std::vector<std::filesystem::path>& artifacts);

/// Fixed reproduction suite written into out_dir, followed by summary.json.
std::vector<ExperimentConfig> suite_configs(std::uint64_t seed, const std::filesystem::path& out_dir);
RunOutcome run_suite(std::uint64_t seed, const std::filesystem::path& out_dir);

}  // namespace lorcap
