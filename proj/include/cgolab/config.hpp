#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cgolab/media.hpp"
#include "cgolab/symbols.hpp"

namespace cgolab {

//==============================================================================
// ExperimentConfig
// Parsed and validated form of the JSON experiment description. Frequencies k
// are given as integer lattice multiples of pi/L. All regime gates derivable
// from the config are checked at load; violations raise config_error naming
// the gate and the JSON path.
//==============================================================================
struct CarlemanPoint {
    double tau = 0.0;
    double M = 0.0;
};

struct VerifyConfig {
    std::vector<std::string> estimates;  // default: the full suite
    int samples = 100;

    double carleman_explicit_M = 4.0;
    std::vector<double> carleman_explicit_tau = {16.0, 32.0, 64.0};
    int carleman_explicit_samples = 200;

    CarlemanPoint carleman_half_calibration{256.0, 16.0};
    std::vector<CarlemanPoint> carleman_half_hold = {{512.0, 16.0}, {1024.0, 64.0}};

    std::vector<double> commutator_M = {4.0, 16.0, 64.0};
    double commutator_tau_factor = 16.0;
    int commutator_samples = 2;

    CarlemanPoint multiplication_calibration{50.0, 2.0};
    CarlemanPoint multiplication_hold{100.0, 2.0};
    int multiplication_samples = 50;

    CarlemanPoint quotient_calibration{64.0, 4.0};
    CarlemanPoint quotient_hold{128.0, 4.0};

    CarlemanPoint pseudolocality_point{64.0, 4.0};

    int derivative_k = 8;
    std::vector<double> derivative_M = {4.0, 16.0};
    std::vector<double> derivative_tau = {1024.0, 4096.0};

    std::vector<CarlemanPoint> estimate_q_points = {{256.0, 16.0}, {1024.0, 64.0}};
    int estimate_q_samples = 8;
};

struct CgoRunConfig {
    std::vector<std::vector<int>> k;  // lattice integers
    std::vector<double> tau = {20.0};
    double tol = 1e-8;
    int max_iter = 50;
    int verify_count = 20;
    double verify_tol = 1e-7;
};

struct RecoverConfig {
    std::vector<std::vector<int>> k;
    std::vector<double> tau = {20.0, 40.0, 80.0};
    double tol = 1e-8;
    int max_iter = 50;
    double decay_factor = 0.8;
    double closure_tol = 1e-9;
};

struct AverageConfig {
    std::vector<int> k;
    std::vector<double> lambda = {8.0, 16.0, 32.0};
    int directions = 16;
    int tau_nodes_per_octave = 8;
};

struct ExperimentConfig {
    GridSpec grid{3, 64, 4.0, 1.0};
    ModelParams model;
    std::optional<ModelParams> model2;
    std::uint64_t seed = 1;
    int workers = 0;  // 0 = library default
    VerifyConfig verify;
    CgoRunConfig cgo;
    RecoverConfig recover;
    AverageConfig average;

    std::string canonical_text;  // serialized form used for the config hash
};

// Parse a JSON config; file errors and malformed JSON raise config_error with
// a line reference, semantic errors with the JSON path.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);
ExperimentConfig default_config();

// Gate report: one line per regime gate derivable from the config, evaluated
// before any compute; throws config_error on the first violated gate.
std::vector<std::string> check_gates(const ExperimentConfig& cfg, const std::string& subcommand,
                                     const std::vector<std::string>& estimate_filter);

std::uint64_t fnv1a_hash(const std::string& text);

VecN lattice_k(const GridSpec& g, const std::vector<int>& z);

}  // namespace cgolab
