#include "cgolab/runner.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "cgolab/estimates.hpp"
#include "cgolab/recovery.hpp"

namespace cgolab {

namespace {

namespace fs = std::filesystem;

double now_ms() {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

// fixed-format float for byte-identical tables
std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

class TableWriter {
  public:
    TableWriter(const std::string& dir, const std::string& name, RunManifest& manifest)
        : path_(dir + "/" + name) {
        fs::create_directories(dir);
        out_.open(path_);
        if (!out_) throw numeric_error("cannot open output file " + path_);
        manifest.outputs.push_back(path_);
    }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }

  private:
    std::string path_;
    std::ofstream out_;
};

void write_text(const std::string& dir, const std::string& name, const std::string& text,
                RunManifest& manifest) {
    fs::create_directories(dir);
    const std::string path = dir + "/" + name;
    std::ofstream out(path);
    out << text;
    manifest.outputs.push_back(path);
}

ConductivityModel build_model(const ExperimentConfig& cfg) { return ConductivityModel(cfg.grid, cfg.model); }

void apply_workers(const ExperimentConfig& cfg) {
    if (cfg.workers > 0) kernels::set_worker_count(cfg.workers);
}

}  // namespace

void RunManifest::write(const std::string& out_dir) const {
    nlohmann::json j;
    j["subcommand"] = subcommand;
    char hash_hex[20];
    std::snprintf(hash_hex, sizeof(hash_hex), "%016llx", static_cast<unsigned long long>(config_hash));
    j["config_hash"] = hash_hex;
    j["version"] = version;
    j["tasks"] = nlohmann::json::array();
    for (const auto& t : tasks) j["tasks"].push_back({{"name", t.name}, {"status", t.status}, {"wall_ms", t.wall_ms}});
    j["outputs"] = outputs;
    fs::create_directories(out_dir);
    std::ofstream out(out_dir + "/manifest.json");
    out << j.dump(2) << '\n';
}

//==============================================================================
// verify
//==============================================================================
int run_verify(const ExperimentConfig& cfg, const std::string& out_dir,
               const std::vector<std::string>& estimate_filter) {
    apply_workers(cfg);
    for (const std::string& line : check_gates(cfg, "verify", estimate_filter)) std::cout << line << '\n';

    RunManifest manifest;
    manifest.subcommand = "verify";
    manifest.config_hash = fnv1a_hash(cfg.canonical_text);

    auto selected = [&](const std::string& name) {
        const auto& base = cfg.verify.estimates;
        if (std::find(base.begin(), base.end(), name) == base.end()) return false;
        if (estimate_filter.empty()) return true;
        return std::find(estimate_filter.begin(), estimate_filter.end(), name) != estimate_filter.end();
    };

    const GridSpec& g = cfg.grid;
    const VerifyConfig& vc = cfg.verify;
    std::vector<EstimateReport> reports;

    auto timed = [&](const std::string& name, auto&& body) {
        const double t0 = now_ms();
        body();
        manifest.tasks.push_back({name, "done", now_ms() - t0});
    };

    if (selected("carleman_explicit"))
        timed("carleman_explicit", [&] {
            for (double tau : vc.carleman_explicit_tau)
                reports.push_back(carleman_explicit_suite(g, CarlemanParams(tau, vc.carleman_explicit_M, g.R), vc.carleman_explicit_samples,
                                               cfg.seed));
        });
    if (selected("carleman_half"))
        timed("carleman_half", [&] {
            std::vector<CarlemanParams> pts;
            pts.emplace_back(vc.carleman_half_calibration.tau, vc.carleman_half_calibration.M, g.R);
            for (const auto& h : vc.carleman_half_hold) pts.emplace_back(h.tau, h.M, g.R);
            for (auto& r : carleman_half_suite(g, pts, vc.samples, cfg.seed)) reports.push_back(std::move(r));
        });
    if (selected("commutator"))
        timed("commutator", [&] {
            std::vector<CarlemanParams> pts;
            for (double M : vc.commutator_M) pts.emplace_back(vc.commutator_tau_factor * M * g.R, M, g.R);
            for (auto& r : commutator_suite(pts, vc.commutator_samples, cfg.seed)) reports.push_back(std::move(r));
        });
    if (selected("multiplication"))
        timed("multiplication", [&] {
            for (auto& r : multiplication_suite(
                     g, CarlemanParams(vc.multiplication_calibration.tau, vc.multiplication_calibration.M, g.R),
                     CarlemanParams(vc.multiplication_hold.tau, vc.multiplication_hold.M, g.R),
                     vc.multiplication_samples, cfg.seed))
                reports.push_back(std::move(r));
        });
    if (selected("quotient"))
        timed("quotient", [&] {
            for (auto& r : quotient_suite(
                     CarlemanParams(vc.quotient_calibration.tau, vc.quotient_calibration.M, g.R),
                     CarlemanParams(vc.quotient_hold.tau, vc.quotient_hold.M, g.R)))
                reports.push_back(std::move(r));
        });
    if (selected("pseudolocality"))
        timed("pseudolocality", [&] {
            for (auto& r : pseudolocality_suite(
                     g, CarlemanParams(vc.pseudolocality_point.tau, vc.pseudolocality_point.M, g.R), cfg.seed))
                reports.push_back(std::move(r));
        });
    if (selected("derivative_l1"))
        timed("derivative_l1", [&] {
            for (auto& r : derivative_l1_suite(vc.derivative_M, vc.derivative_tau, vc.derivative_k))
                reports.push_back(std::move(r));
        });
    if (selected("estimate_q"))
        timed("estimate_q", [&] {
            const ConductivityModel model = build_model(cfg);
            std::vector<CarlemanParams> pts;
            for (const auto& p : vc.estimate_q_points) pts.emplace_back(p.tau, p.M, g.R);
            for (auto& r : estimate_q_suite(g, model, pts, vc.estimate_q_samples, cfg.seed))
                reports.push_back(std::move(r));
        });

    // reports as a JSON array, summary as CSV, worst ratios to stdout
    std::string json_out = "[\n";
    for (std::size_t i = 0; i < reports.size(); ++i) {
        json_out += reports[i].to_json_string();
        if (i + 1 < reports.size()) json_out += ",";
        json_out += "\n";
    }
    json_out += "]\n";
    write_text(out_dir, "verify_reports.json", json_out, manifest);

    bool all_pass = true;
    {
        TableWriter table(out_dir, "verify_summary.csv", manifest);
        table.row({"estimate", "tau", "M", "samples", "max_ratio", "budget", "pass"});
        for (const auto& r : reports) {
            all_pass = all_pass && r.pass;
            const double tau = r.params.count("tau") ? r.params.at("tau") : 0.0;
            const double M = r.params.count("M") ? r.params.at("M") : 0.0;
            table.row({r.name, fmt(tau), fmt(M), std::to_string(r.samples), fmt(r.max_ratio), fmt(r.budget),
                       r.pass ? "1" : "0"});
        }
    }
    for (const auto& r : reports)
        std::cout << (r.pass ? "pass  " : "FAIL  ") << r.name << "  max_ratio=" << r.max_ratio
                  << "  budget=" << r.budget << '\n';

    manifest.write(out_dir);
    return all_pass ? 0 : 1;
}

//==============================================================================
// cgo
//==============================================================================
int run_cgo(const ExperimentConfig& cfg, const std::string& out_dir) {
    apply_workers(cfg);
    for (const std::string& line : check_gates(cfg, "cgo", {})) std::cout << line << '\n';

    RunManifest manifest;
    manifest.subcommand = "cgo";
    manifest.config_hash = fnv1a_hash(cfg.canonical_text);

    const ConductivityModel model = build_model(cfg);
    bool all_ok = true;

    TableWriter table(out_dir, "cgo_solutions.csv", manifest);
    {
        std::vector<std::string> head = {"k0", "k1", "k2", "tau_requested", "tau", "converged", "iterations",
                                         "residual_over_q", "wnorm_X", "qnorm_X", "wq_ratio", "min_symbol",
                                         "corrector_norm_X", "tau_gate_group", "verify_defect", "verify_pass"};
        head.resize(static_cast<std::size_t>(cfg.grid.n) + 13);
        table.row(head);
    }

    for (const auto& z : cfg.cgo.k) {
        const VecN k = lattice_k(cfg.grid, z);
        double prev_ratio = -1.0;
        for (double tau0 : cfg.cgo.tau) {
            const double t0 = now_ms();
            const double tau = nudge_tau(cfg.grid, k, tau0, cfg.seed);
            const ZetaPair pair = make_zeta_pair(k, tau, cfg.seed);
            CgoOptions opts;
            opts.tol = cfg.cgo.tol;
            opts.max_iter = cfg.cgo.max_iter;
            CgoSolution sol = solve_cgo(model, pair.zeta1, opts);
            VerifyReport ver = sol.converged
                                   ? verify_solution(sol, model, cfg.cgo.verify_count, cfg.cgo.verify_tol, cfg.seed)
                                   : VerifyReport{};
            const double wq = sol.qnorm_X > 0.0 ? sol.wnorm_X / sol.qnorm_X : 0.0;

            std::vector<std::string> row;
            for (int a = 0; a < cfg.grid.n; ++a) row.push_back(fmt(k[a]));
            row.insert(row.end(),
                       {fmt(tau0), fmt(tau), sol.converged ? "1" : "0", std::to_string(sol.iterations),
                        fmt(sol.qnorm_X > 0 ? sol.residual_X / sol.qnorm_X : 0.0), fmt(sol.wnorm_X),
                        fmt(sol.qnorm_X), fmt(wq), fmt(sol.min_symbol), fmt(sol.corrector_norm_X),
                        fmt(sol.tau_gate_group), fmt(ver.max_defect), ver.pass ? "1" : "0"});
            table.row(row);

            all_ok = all_ok && sol.converged && (model.is_constant() || ver.pass);
            // norm-bound shadow: w/q non-increasing along the tau sweep (10% slack)
            if (prev_ratio >= 0.0 && wq > 1.1 * prev_ratio) all_ok = false;
            prev_ratio = wq;
            manifest.tasks.push_back({"cgo k=" + to_string(k) + " tau=" + fmt(tau0),
                                      sol.converged ? "done" : "non-converged", now_ms() - t0});
        }
    }

    manifest.write(out_dir);
    return all_ok ? 0 : 1;
}

//==============================================================================
// recover
//==============================================================================
int run_recover(const ExperimentConfig& cfg, const std::string& out_dir) {
    apply_workers(cfg);
    for (const std::string& line : check_gates(cfg, "recover", {})) std::cout << line << '\n';

    RunManifest manifest;
    manifest.subcommand = "recover";
    manifest.config_hash = fnv1a_hash(cfg.canonical_text);

    const ConductivityModel model = build_model(cfg);
    bool all_ok = true;

    TableWriter table(out_dir, "recovery.csv", manifest);
    {
        std::vector<std::string> head;
        for (int a = 0; a < cfg.grid.n; ++a) head.push_back("k" + std::to_string(a));
        for (const char* c : {"tau", "q_hat_true_re", "q_hat_true_im", "q_hat_est_re", "q_hat_est_im", "error",
                              "wnorm_X", "qnorm_X", "iterations", "min_symbol", "converged", "closure_defect"})
            head.push_back(c);
        table.row(head);
    }

    CgoOptions opts;
    opts.tol = cfg.recover.tol;
    opts.max_iter = cfg.recover.max_iter;

    for (std::size_t ki = 0; ki < cfg.recover.k.size(); ++ki) {
        const VecN k = lattice_k(cfg.grid, cfg.recover.k[ki]);
        TableWriter series(out_dir, "error_vs_tau_k" + std::to_string(ki) + ".csv", manifest);
        series.row({"tau", "error"});
        double prev_error = -1.0;
        for (double tau : cfg.recover.tau) {
            const double t0 = now_ms();
            RecoveryRecord rec = recover_fourier_mode(model, k, tau, opts, cfg.seed);
            std::vector<std::string> row;
            for (int a = 0; a < cfg.grid.n; ++a) row.push_back(fmt(k[a]));
            row.insert(row.end(), {fmt(rec.tau), fmt(rec.q_hat_true.real()), fmt(rec.q_hat_true.imag()),
                                   fmt(rec.q_hat_est.real()), fmt(rec.q_hat_est.imag()), fmt(rec.error),
                                   fmt(rec.wnorm_X), fmt(rec.qnorm_X), std::to_string(rec.iterations),
                                   fmt(rec.min_symbol), rec.converged ? "1" : "0", fmt(rec.closure_defect)});
            table.row(row);
            series.row({fmt(rec.tau), fmt(rec.error)});

            if (!rec.converged) {
                // flagged in the table; the run continues
                manifest.tasks.push_back({"recover k=" + to_string(k) + " tau=" + fmt(tau), "non-converged",
                                          now_ms() - t0});
                continue;
            }
            if (rec.closure_defect > cfg.recover.closure_tol) all_ok = false;
            if (!model.is_constant() && prev_error > 0.0 && rec.error > cfg.recover.decay_factor * prev_error)
                all_ok = false;
            prev_error = rec.error;
            manifest.tasks.push_back({"recover k=" + to_string(k) + " tau=" + fmt(tau), "done", now_ms() - t0});
        }
    }

    manifest.write(out_dir);
    return all_ok ? 0 : 1;
}

//==============================================================================
// average
//==============================================================================
int run_average(const ExperimentConfig& cfg, const std::string& out_dir) {
    apply_workers(cfg);
    for (const std::string& line : check_gates(cfg, "average", {})) std::cout << line << '\n';

    RunManifest manifest;
    manifest.subcommand = "average";
    manifest.config_hash = fnv1a_hash(cfg.canonical_text);

    const VecN k = lattice_k(cfg.grid, cfg.average.k);
    bool all_ok = true;

    auto run_one = [&](const ModelParams& mp, const std::string& tag) {
        const double t0 = now_ms();
        const ConductivityModel model(cfg.grid, mp);
        auto records = averaging_experiment(model, k, cfg.average.lambda, cfg.average.directions,
                                            cfg.average.tau_nodes_per_octave, cfg.seed);
        TableWriter table(out_dir, "averaging_" + tag + ".csv", manifest);
        table.row({"lambda", "averaged_qnorm_sq", "rhs_c0_term", "rhs_volume_term", "rhs_modulus_term"});
        double prev = -1.0;
        for (const auto& r : records) {
            table.row({fmt(r.lambda), fmt(r.averaged), fmt(r.rhs_c0_term), fmt(r.rhs_volume_term),
                       fmt(r.rhs_modulus_term)});
            if (model.is_constant()) {
                if (r.averaged != 0.0) all_ok = false;
            } else {
                if (prev >= 0.0 && !(r.averaged < prev)) all_ok = false;
                prev = r.averaged;
            }
        }
        manifest.tasks.push_back({"average " + tag, "done", now_ms() - t0});
    };

    run_one(cfg.model, "model");
    if (cfg.model2) run_one(*cfg.model2, "model2");

    manifest.write(out_dir);
    return all_ok ? 0 : 1;
}

}  // namespace cgolab
