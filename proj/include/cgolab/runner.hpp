#pragma once

#include <string>
#include <vector>

#include "cgolab/config.hpp"

namespace cgolab {

inline constexpr const char* kVersion = "0.1.0";

//==============================================================================
// RunManifest
// Per-run bookkeeping: config hash, code version, per-task status and timing,
// and every output file written. Timing lives only here, never in the numeric
// tables, so reruns with identical config and seed are byte-identical.
//==============================================================================
struct RunManifest {
    std::string subcommand;
    std::uint64_t config_hash = 0;
    std::string version = kVersion;
    struct Task {
        std::string name;
        std::string status;
        double wall_ms = 0.0;
    };
    std::vector<Task> tasks;
    std::vector<std::string> outputs;

    void write(const std::string& out_dir) const;
};

// Exit codes: 0 = all assertions pass, 1 = an assertion failed,
// 2 = config error (thrown as config_error before any compute).
int run_verify(const ExperimentConfig& cfg, const std::string& out_dir,
               const std::vector<std::string>& estimate_filter);
int run_cgo(const ExperimentConfig& cfg, const std::string& out_dir);
int run_recover(const ExperimentConfig& cfg, const std::string& out_dir);
int run_average(const ExperimentConfig& cfg, const std::string& out_dir);

}  // namespace cgolab
