//==============================================================================
// cgolab
// Config-driven experiment runner: the estimate verification suite, CGO
// solves, Fourier-mode recovery sweeps, and the averaging experiment.
// Exit codes: 0 pass, 1 assertion failure, 2 config error.
//==============================================================================

#include <CLI11.hpp>

#include <iostream>

#include "cgolab/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"spectral laboratory for CGO solutions, Carleman estimates and Fourier-mode recovery"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    bool seed_set = false;
    int workers = 0;
    std::vector<std::string> estimates;

    app.add_option("--config", config_path, "experiment config (JSON); defaults apply when omitted");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "override the config seed")->each([&](const std::string&) { seed_set = true; });
    app.add_option("--workers", workers, "worker threads (0 = library default)");

    CLI::App* verify = app.add_subcommand("verify", "run the inequality verification suite");
    verify->add_option("--estimate", estimates, "run only the named estimates (repeatable)");
    CLI::App* cgo = app.add_subcommand("cgo", "solve CGO remainders and verify them weakly");
    CLI::App* recover = app.add_subcommand("recover", "Fourier-mode recovery sweep");
    CLI::App* average = app.add_subcommand("average", "averaged X-norm decay experiment");
    for (CLI::App* sub : {verify, cgo, recover, average}) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        cgolab::ExperimentConfig cfg =
            config_path.empty() ? cgolab::default_config() : cgolab::load_config_file(config_path);
        if (seed_set) cfg.seed = seed;
        if (workers > 0) cfg.workers = workers;

        if (verify->parsed()) return cgolab::run_verify(cfg, out_dir, estimates);
        if (cgo->parsed()) return cgolab::run_cgo(cfg, out_dir);
        if (recover->parsed()) return cgolab::run_recover(cfg, out_dir);
        if (average->parsed()) return cgolab::run_average(cfg, out_dir);
    } catch (const cgolab::config_error& e) {
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
