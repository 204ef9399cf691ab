#include "cgolab/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace cgolab {

using nlohmann::json;

namespace {

const std::vector<std::string> kAllEstimates = {"carleman_explicit",       "carleman_half",     "commutator",
                                                "multiplication", "quotient",     "pseudolocality",
                                                "derivative_l1",  "estimate_q"};

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw config_error("config: " + path + ": " + what);
}

double get_num(const json& j, const std::string& path, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) fail(path + "/" + key, "expected a number");
    return j[key].get<double>();
}

int get_int(const json& j, const std::string& path, const char* key, int fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number_integer()) fail(path + "/" + key, "expected an integer");
    return j[key].get<int>();
}

std::vector<double> get_num_list(const json& j, const std::string& path, const char* key,
                                 std::vector<double> fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_array()) fail(path + "/" + key, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& v : j[key]) {
        if (!v.is_number()) fail(path + "/" + key, "expected numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

std::vector<std::vector<int>> get_k_list(const json& j, const std::string& path, const char* key,
                                         std::vector<std::vector<int>> fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_array()) fail(path + "/" + key, "expected an array of integer vectors");
    std::vector<std::vector<int>> out;
    for (const auto& row : j[key]) {
        if (!row.is_array()) fail(path + "/" + key, "expected integer vectors");
        std::vector<int> z;
        for (const auto& v : row) {
            if (!v.is_number_integer()) fail(path + "/" + key, "k components must be lattice integers");
            z.push_back(v.get<int>());
        }
        out.push_back(std::move(z));
    }
    return out;
}

CarlemanPoint get_point(const json& j, const std::string& path, CarlemanPoint fallback) {
    CarlemanPoint p = fallback;
    p.tau = get_num(j, path, "tau", fallback.tau);
    p.M = get_num(j, path, "M", fallback.M);
    return p;
}

ModelParams parse_model(const json& j, const std::string& path, const GridSpec& g) {
    ModelParams m;
    const std::string kind = j.contains("kind") ? j["kind"].get<std::string>() : "gaussian-log";
    if (kind == "constant")
        m.kind = ConductivityKind::constant;
    else if (kind == "gaussian-log")
        m.kind = ConductivityKind::gaussian_log;
    else if (kind == "mollified-tent")
        m.kind = ConductivityKind::mollified_tent;
    else
        fail(path + "/kind", "unknown kind '" + kind + "' (constant | gaussian-log | mollified-tent)");
    m.eps = get_num(j, path, "eps", 0.1);
    m.sigma = get_num(j, path, "sigma", 0.25);
    m.tent_radius = get_num(j, path, "tent_radius", 0.0);
    m.delta = get_num(j, path, "delta", 0.0);
    m.window_radius = get_num(j, path, "window_radius", 0.0);
    if (j.contains("center")) {
        if (!j["center"].is_array() || static_cast<int>(j["center"].size()) != g.n)
            fail(path + "/center", "expected an array of n coordinates");
        m.center = VecN::zero(g.n);
        for (int a = 0; a < g.n; ++a) m.center[a] = j["center"][static_cast<std::size_t>(a)].get<double>();
    }
    if (std::abs(m.eps) > 0.5) fail(path + "/eps", "amplitude beyond the desk-scale range (|eps| <= 0.5)");
    return m;
}

}  // namespace

std::uint64_t fnv1a_hash(const std::string& text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

VecN lattice_k(const GridSpec& g, const std::vector<int>& z) {
    if (static_cast<int>(z.size()) != g.n)
        throw config_error("config: k vector has " + std::to_string(z.size()) + " components, grid has n = " +
                           std::to_string(g.n));
    VecN k(g.n);
    for (int a = 0; a < g.n; ++a) {
        if (z[static_cast<std::size_t>(a)] < -g.N / 2 || z[static_cast<std::size_t>(a)] >= g.N / 2)
            throw config_error("config: k outside the frequency lattice");
        k[a] = g.freq_step() * z[static_cast<std::size_t>(a)];
    }
    return k;
}

ExperimentConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1;
        for (std::size_t i = 0; i < std::min<std::size_t>(e.byte, text.size()); ++i)
            if (text[i] == '\n') ++line;
        throw config_error("config: JSON parse error at line " + std::to_string(line) + ": " + e.what());
    }

    ExperimentConfig cfg;
    if (j.contains("grid")) {
        const json& gj = j["grid"];
        const int n = get_int(gj, "/grid", "n", 3);
        const int N = get_int(gj, "/grid", "N", 64);
        const double L = get_num(gj, "/grid", "L", 4.0);
        const double R = get_num(gj, "/grid", "R", 1.0);
        try {
            cfg.grid = GridSpec(n, N, L, R);
        } catch (const parameter_error& e) {
            fail("/grid", e.what());
        }
    }
    if (j.contains("model")) cfg.model = parse_model(j["model"], "/model", cfg.grid);
    if (j.contains("model2")) cfg.model2 = parse_model(j["model2"], "/model2", cfg.grid);
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    cfg.workers = get_int(j, "", "workers", 0);

    if (j.contains("verify")) {
        const json& v = j["verify"];
        VerifyConfig& vc = cfg.verify;
        if (v.contains("estimates")) {
            for (const auto& e : v["estimates"]) {
                const std::string name = e.get<std::string>();
                if (std::find(kAllEstimates.begin(), kAllEstimates.end(), name) == kAllEstimates.end())
                    fail("/verify/estimates", "unknown estimate '" + name + "'");
                vc.estimates.push_back(name);
            }
        }
        vc.samples = get_int(v, "/verify", "samples", vc.samples);
        if (v.contains("carleman_explicit")) {
            vc.carleman_explicit_M = get_num(v["carleman_explicit"], "/verify/carleman_explicit", "M", vc.carleman_explicit_M);
            vc.carleman_explicit_tau = get_num_list(v["carleman_explicit"], "/verify/carleman_explicit", "tau", vc.carleman_explicit_tau);
            vc.carleman_explicit_samples = get_int(v["carleman_explicit"], "/verify/carleman_explicit", "samples", vc.carleman_explicit_samples);
        }
        if (v.contains("carleman_half")) {
            const json& t = v["carleman_half"];
            if (t.contains("calibration"))
                vc.carleman_half_calibration = get_point(t["calibration"], "/verify/carleman_half/calibration",
                                                    vc.carleman_half_calibration);
            if (t.contains("hold")) {
                vc.carleman_half_hold.clear();
                for (const auto& h : t["hold"])
                    vc.carleman_half_hold.push_back(get_point(h, "/verify/carleman_half/hold", {0.0, 0.0}));
            }
        }
        if (v.contains("commutator")) {
            const json& c = v["commutator"];
            vc.commutator_M = get_num_list(c, "/verify/commutator", "M", vc.commutator_M);
            vc.commutator_tau_factor = get_num(c, "/verify/commutator", "tau_factor", vc.commutator_tau_factor);
            vc.commutator_samples = get_int(c, "/verify/commutator", "samples", vc.commutator_samples);
        }
        if (v.contains("multiplication")) {
            const json& mjs = v["multiplication"];
            vc.multiplication_calibration =
                get_point(mjs, "/verify/multiplication", vc.multiplication_calibration);
            vc.multiplication_hold.tau = 2.0 * vc.multiplication_calibration.tau;
            vc.multiplication_hold.M = vc.multiplication_calibration.M;
            vc.multiplication_samples = get_int(mjs, "/verify/multiplication", "samples", vc.multiplication_samples);
        }
        if (v.contains("quotient")) {
            vc.quotient_calibration = get_point(v["quotient"], "/verify/quotient", vc.quotient_calibration);
            vc.quotient_hold.tau = 2.0 * vc.quotient_calibration.tau;
            vc.quotient_hold.M = vc.quotient_calibration.M;
        }
        if (v.contains("pseudolocality"))
            vc.pseudolocality_point = get_point(v["pseudolocality"], "/verify/pseudolocality", vc.pseudolocality_point);
        if (v.contains("derivative_l1")) {
            const json& d = v["derivative_l1"];
            vc.derivative_k = get_int(d, "/verify/derivative_l1", "k", vc.derivative_k);
            vc.derivative_M = get_num_list(d, "/verify/derivative_l1", "M", vc.derivative_M);
            vc.derivative_tau = get_num_list(d, "/verify/derivative_l1", "tau", vc.derivative_tau);
        }
        if (v.contains("estimate_q")) {
            const json& eq = v["estimate_q"];
            if (eq.contains("points")) {
                vc.estimate_q_points.clear();
                for (const auto& pt : eq["points"])
                    vc.estimate_q_points.push_back(get_point(pt, "/verify/estimate_q/points", {0.0, 0.0}));
            }
            vc.estimate_q_samples = get_int(eq, "/verify/estimate_q", "samples", vc.estimate_q_samples);
        }
    }
    if (cfg.verify.estimates.empty()) cfg.verify.estimates = kAllEstimates;

    if (j.contains("cgo")) {
        const json& c = j["cgo"];
        cfg.cgo.k = get_k_list(c, "/cgo", "k", cfg.cgo.k);
        cfg.cgo.tau = get_num_list(c, "/cgo", "tau", cfg.cgo.tau);
        cfg.cgo.tol = get_num(c, "/cgo", "tol", cfg.cgo.tol);
        cfg.cgo.max_iter = get_int(c, "/cgo", "max_iter", cfg.cgo.max_iter);
        cfg.cgo.verify_count = get_int(c, "/cgo", "verify_count", cfg.cgo.verify_count);
        cfg.cgo.verify_tol = get_num(c, "/cgo", "verify_tol", cfg.cgo.verify_tol);
    }
    if (cfg.cgo.k.empty()) cfg.cgo.k = {{1, 0, 0}};

    if (j.contains("recover")) {
        const json& r = j["recover"];
        cfg.recover.k = get_k_list(r, "/recover", "k", cfg.recover.k);
        cfg.recover.tau = get_num_list(r, "/recover", "tau", cfg.recover.tau);
        cfg.recover.tol = get_num(r, "/recover", "tol", cfg.recover.tol);
        cfg.recover.max_iter = get_int(r, "/recover", "max_iter", cfg.recover.max_iter);
        cfg.recover.decay_factor = get_num(r, "/recover", "decay_factor", cfg.recover.decay_factor);
        cfg.recover.closure_tol = get_num(r, "/recover", "closure_tol", cfg.recover.closure_tol);
    }
    if (cfg.recover.k.empty()) cfg.recover.k = {{1, 0, 0}, {2, 0, 0}, {0, 0, 3}, {4, 0, 0}};

    if (j.contains("average")) {
        const json& a = j["average"];
        if (a.contains("k")) {
            cfg.average.k.clear();
            for (const auto& v : a["k"]) cfg.average.k.push_back(v.get<int>());
        }
        cfg.average.lambda = get_num_list(a, "/average", "lambda", cfg.average.lambda);
        cfg.average.directions = get_int(a, "/average", "directions", cfg.average.directions);
        cfg.average.tau_nodes_per_octave =
            get_int(a, "/average", "tau_nodes_per_octave", cfg.average.tau_nodes_per_octave);
    }
    if (cfg.average.k.empty()) cfg.average.k = std::vector<int>(static_cast<std::size_t>(cfg.grid.n), 0),
                               cfg.average.k[0] = 1;

    cfg.canonical_text = j.dump();
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

ExperimentConfig default_config() { return parse_config_text("{}"); }

std::vector<std::string> check_gates(const ExperimentConfig& cfg, const std::string& subcommand,
                                     const std::vector<std::string>& estimate_filter) {
    std::vector<std::string> lines;
    auto gate = [&](bool ok, const std::string& what) {
        lines.push_back(std::string(ok ? "gate ok:   " : "gate FAIL: ") + what);
        if (!ok) throw config_error("config: regime gate violated: " + what);
    };
    auto selected = [&](const std::string& name) {
        const auto& base = cfg.verify.estimates;
        if (std::find(base.begin(), base.end(), name) == base.end()) return false;
        if (estimate_filter.empty()) return true;
        return std::find(estimate_filter.begin(), estimate_filter.end(), name) != estimate_filter.end();
    };
    const double R = cfg.grid.R;

    if (subcommand == "verify") {
        if (selected("carleman_explicit"))
            for (double tau : cfg.verify.carleman_explicit_tau)
                gate(tau > 2.0 * cfg.verify.carleman_explicit_M * R,
                     "carleman_explicit requires tau > 2MR (tau=" + std::to_string(tau) +
                         ", M=" + std::to_string(cfg.verify.carleman_explicit_M) + ")");
        if (selected("carleman_half")) {
            auto pts = cfg.verify.carleman_half_hold;
            pts.insert(pts.begin(), cfg.verify.carleman_half_calibration);
            for (const auto& p : pts)
                gate(p.tau > 8.0 * p.M * R, "carleman_half requires tau > 8MR (tau=" + std::to_string(p.tau) +
                                                ", M=" + std::to_string(p.M) + ")");
        }
        if (selected("commutator"))
            for (double M : cfg.verify.commutator_M)
                gate(cfg.verify.commutator_tau_factor > 8.0,
                     "commutator requires tau = factor*MR with factor > 8 (factor=" +
                         std::to_string(cfg.verify.commutator_tau_factor) + ", M=" + std::to_string(M) + ")");
        if (selected("multiplication"))
            gate(cfg.verify.multiplication_calibration.tau > cfg.verify.multiplication_calibration.M,
                 "multiplication requires tau > M");
        if (selected("quotient"))
            gate(cfg.verify.quotient_calibration.tau > cfg.verify.quotient_calibration.M,
                 "quotient requires tau > M");
        if (selected("pseudolocality"))
            gate(cfg.verify.pseudolocality_point.tau > 8.0 * cfg.verify.pseudolocality_point.M * R,
                 "pseudolocality requires tau > 8MR");
        if (selected("derivative_l1")) {
            gate(cfg.verify.derivative_k >= 8, "derivative_l1 requires k >= 8");
            for (double M : cfg.verify.derivative_M)
                for (double tau : cfg.verify.derivative_tau)
                    gate(tau > M, "derivative_l1 requires tau > M (tau=" + std::to_string(tau) +
                                      ", M=" + std::to_string(M) + ")");
        }
        if (selected("estimate_q"))
            for (const auto& p : cfg.verify.estimate_q_points)
                gate(p.tau > 8.0 * p.M * R, "estimate_q requires tau > 8MR (tau=" + std::to_string(p.tau) +
                                                ", M=" + std::to_string(p.M) + ")");
    } else if (subcommand == "cgo" || subcommand == "recover") {
        const auto& ks = subcommand == "cgo" ? cfg.cgo.k : cfg.recover.k;
        const auto& taus = subcommand == "cgo" ? cfg.cgo.tau : cfg.recover.tau;
        for (const auto& z : ks) {
            const VecN k = lattice_k(cfg.grid, z);
            for (double tau : taus)
                gate(tau > norm(k), subcommand + " requires tau > |k| (tau=" + std::to_string(tau) +
                                        ", |k|=" + std::to_string(norm(k)) + ")");
        }
        if (cfg.grid.n < 3) gate(false, subcommand + " requires n >= 3 for the zeta-pair geometry");
    } else if (subcommand == "average") {
        const VecN k = lattice_k(cfg.grid, cfg.average.k);
        for (double lambda : cfg.average.lambda)
            gate(lambda >= std::max(norm(k), 1.0),
                 "average requires lambda >= max(|k|, 1) (lambda=" + std::to_string(lambda) + ")");
        gate(cfg.average.directions >= 8, "average requires >= 8 directions");
        gate(cfg.average.tau_nodes_per_octave >= 8, "average requires >= 8 tau nodes per octave");
        if (cfg.grid.n < 3) gate(false, "average requires n >= 3 for the zeta-pair geometry");
    }
    return lines;
}

}  // namespace cgolab
