#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cgolab/runner.hpp"

using namespace cgolab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// small-grid config so runner tests stay fast
const char* kSmallRecover = R"json({
  "grid": {"n": 3, "N": 16, "L": 4.0, "R": 1.0},
  "model": {"kind": "gaussian-log", "eps": 0.1, "sigma": 0.3},
  "seed": 7,
  "recover": {"k": [[1, 0, 0]], "tau": [15, 30], "tol": 1e-8, "max_iter": 50, "decay_factor": 0.9}
})json";

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("config defaults and parse errors") {
    ExperimentConfig cfg = default_config();
    CHECK(cfg.grid.n == 3);
    CHECK(cfg.grid.N == 64);
    CHECK(cfg.verify.estimates.size() == 8);
    CHECK(cfg.recover.k.size() == 4);

    // malformed JSON carries a line reference
    try {
        (void)parse_config_text("{\n  \"grid\": {\n  \"n\": oops\n}}");
        CHECK(false);
    } catch (const config_error& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }

    // semantic errors carry the JSON path
    try {
        (void)parse_config_text(R"({"model": {"kind": "cubist"}})");
        CHECK(false);
    } catch (const config_error& e) {
        CHECK(std::string(e.what()).find("/model/kind") != std::string::npos);
    }

    CHECK_THROWS_AS((void)parse_config_text(R"({"grid": {"n": 3, "N": 64, "L": 2.0, "R": 1.0}})"),
                    config_error);
}

TEST_CASE("gates are checked at load and name the violated gate") {
    ExperimentConfig cfg = parse_config_text(R"json({
        "verify": {"estimates": ["carleman_half"], "carleman_half": {"calibration": {"M": 16, "tau": 100}}}
    })json");
    try {
        (void)check_gates(cfg, "verify", {});
        CHECK(false);
    } catch (const config_error& e) {
        CHECK(std::string(e.what()).find("tau > 8MR") != std::string::npos);
    }

    ExperimentConfig ok = default_config();
    const auto lines = check_gates(ok, "verify", {});
    CHECK(lines.size() > 5);
    for (const auto& l : lines) CHECK(l.find("gate ok") != std::string::npos);
}

TEST_CASE("estimate filter selects a single estimate") {
    ExperimentConfig cfg = parse_config_text(R"json({
        "grid": {"n": 2, "N": 32, "L": 4.0, "R": 1.0},
        "verify": {"carleman_explicit": {"M": 4, "tau": [16], "samples": 3}}
    })json");
    const std::string dir = "cli_test_out/filter";
    fs::remove_all(dir);
    const int rc = run_verify(cfg, dir, {"carleman_explicit"});
    CHECK(rc == 0);
    const std::string summary = slurp(dir + "/verify_summary.csv");
    CHECK(summary.find("carleman_explicit") != std::string::npos);
    CHECK(summary.find("carleman_half") == std::string::npos);
    CHECK(fs::exists(dir + "/manifest.json"));
    CHECK(fs::exists(dir + "/verify_reports.json"));
}

TEST_CASE("recover run emits the documented columns and reruns byte-identically") {
    ExperimentConfig cfg = parse_config_text(kSmallRecover);
    const std::string dir1 = "cli_test_out/rec1";
    const std::string dir2 = "cli_test_out/rec2";
    fs::remove_all(dir1);
    fs::remove_all(dir2);

    const int rc1 = run_recover(cfg, dir1);
    const int rc2 = run_recover(cfg, dir2);
    CHECK(rc1 == 0);
    CHECK(rc2 == 0);

    const std::string t1 = slurp(dir1 + "/recovery.csv");
    const std::string t2 = slurp(dir2 + "/recovery.csv");
    CHECK(t1 == t2);  // byte-identical numeric tables
    CHECK(t1.find("q_hat_true_re") != std::string::npos);
    CHECK(t1.find("min_symbol") != std::string::npos);
    CHECK(slurp(dir1 + "/error_vs_tau_k0.csv") == slurp(dir2 + "/error_vs_tau_k0.csv"));

    // different seed changes the numbers
    ExperimentConfig other = cfg;
    other.seed = 8;
    const std::string dir3 = "cli_test_out/rec3";
    fs::remove_all(dir3);
    (void)run_recover(other, dir3);
    CHECK(slurp(dir3 + "/recovery.csv") != t1);
}

TEST_CASE("constant model recovers zeros with exit 0") {
    ExperimentConfig cfg = parse_config_text(R"json({
        "grid": {"n": 3, "N": 16, "L": 4.0, "R": 1.0},
        "model": {"kind": "constant"},
        "recover": {"k": [[1, 0, 0]], "tau": [15]}
    })json");
    const std::string dir = "cli_test_out/const";
    fs::remove_all(dir);
    CHECK(run_recover(cfg, dir) == 0);
    const std::string table = slurp(dir + "/recovery.csv");
    CHECK(table.find("\n") != std::string::npos);
}

TEST_CASE("average run on a coarse grid emits decreasing values") {
    ExperimentConfig cfg = parse_config_text(R"json({
        "grid": {"n": 3, "N": 16, "L": 4.0, "R": 1.0},
        "model": {"kind": "mollified-tent", "eps": 0.1, "tent_radius": 0.4, "delta": 0.5},
        "average": {"k": [1, 0, 0], "lambda": [8, 16], "directions": 8, "tau_nodes_per_octave": 8}
    })json");
    const std::string dir = "cli_test_out/avg";
    fs::remove_all(dir);
    CHECK(run_average(cfg, dir) == 0);
    CHECK(fs::exists(dir + "/averaging_model.csv"));
}

TEST_SUITE_END();
