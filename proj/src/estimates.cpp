#include "cgolab/estimates.hpp"

#include <json.hpp>

#include <cmath>

#include "cgolab/rng.hpp"

namespace cgolab {

namespace {

constexpr double kDegenerateFloor = 1e-14;

void require_slab_support(const Field& u, double R, const char* who) {
    if (support_violation(u, SupportShape::slab, R) > 1e-12)
        throw parameter_error(std::string(who) + ": field not supported in |x_n| <= R");
}

bool is_degenerate(const Field& u) { return norm_l2(u) < kDegenerateFloor; }

EstimateReport degenerate_report(const char* name, const CarlemanParams& p) {
    EstimateReport r;
    r.name = name;
    r.params = {{"tau", p.tau}, {"M", p.M}, {"R", p.R}};
    r.degenerate = true;
    r.pass = true;
    r.note = "degenerate input (norm below 1e-14); ratio not formed";
    return r;
}

}  // namespace

std::string EstimateReport::to_json_string() const {
    nlohmann::json j;
    j["estimate"] = name;
    j["params"] = params;
    j["samples"] = samples;
    j["max_ratio"] = max_ratio;
    j["budget"] = budget;
    j["pass"] = pass;
    j["provenance"] = provenance == Provenance::paper_explicit ? "paper-explicit" : "derived-sweep";
    j["degenerate"] = degenerate;
    if (!note.empty()) j["note"] = note;
    j["ratios"] = ratios;
    return j.dump();
}

//------------------------------------------------------------------------------
// Energy-level bound |u|_{Y^1}^2 <= 50 R^2 (1 + slack) |P_phi u|^2: the one
// estimate with a fully explicit constant; enforced strictly.
//------------------------------------------------------------------------------
EstimateReport check_carleman_explicit(const Field& u, const CarlemanParams& p, double slack) {
    p.require_tau_gt_2MR();
    if (is_degenerate(u)) return degenerate_report("carleman_explicit", p);
    require_slab_support(u, p.R, "check_carleman_explicit");

    const double lhs = std::pow(norm_Y(u, 1.0, p), 2);
    const double rhs = 50.0 * p.R * p.R * std::pow(norm_l2(conjugated_laplacian(u, p)), 2);

    EstimateReport r;
    r.name = "carleman_explicit";
    r.params = {{"tau", p.tau}, {"M", p.M}, {"R", p.R}};
    r.budget = 1.0 + slack;
    r.provenance = EstimateReport::Provenance::paper_explicit;
    r.ratios = {lhs / rhs};
    r.finalize();
    return r;
}

EstimateReport check_carleman_half(const Field& u, const CarlemanParams& p, double budget) {
    p.require_tau_gt_8MR();
    if (is_degenerate(u)) return degenerate_report("carleman_half", p);
    require_slab_support(u, p.R, "check_carleman_half");

    const double lhs = norm_Y(u, 0.5, p);
    const double rhs = p.R * norm_Y(conjugated_laplacian(u, p), -0.5, p);

    EstimateReport r;
    r.name = "carleman_half";
    r.params = {{"tau", p.tau}, {"M", p.M}, {"R", p.R}};
    r.budget = budget;
    r.ratios = {lhs / rhs};
    r.finalize();
    return r;
}

EstimateReport check_commutator_lemma(const Field& u, const CarlemanParams& p, double budget) {
    p.require_tau_gt_8MR();
    if (is_degenerate(u)) return degenerate_report("commutator", p);
    require_slab_support(u, p.R, "check_commutator_lemma");

    const double lhs = norm_l2(commutator_conj_mhalf(u, p)) * std::sqrt(p.M);
    const double rhs = norm_Y(u, 0.5, p);

    EstimateReport r;
    r.name = "commutator";
    r.params = {{"tau", p.tau}, {"M", p.M}, {"R", p.R}};
    r.budget = budget;
    r.ratios = {lhs / rhs};
    r.finalize();
    return r;
}

//------------------------------------------------------------------------------
// Multiplication lemma. The 1-d L^1 weight carries the convolution prefactor
// (2 pi)^{-1/2}, so the constant profile has weight exactly one.
//------------------------------------------------------------------------------
double profile_l1_weight(const GridSpec& g, const std::function<double(double)>& profile,
                         const CarlemanParams& p) {
    const int N = g.N;
    const double h = g.spacing();
    std::vector<cplx> fhat(static_cast<std::size_t>(N), cplx(0.0, 0.0));
    for (int z = 0; z < N; ++z) {
        cplx acc(0.0, 0.0);
        for (int j = 0; j < N; ++j) {
            const double x = g.coord(j);
            const double sigma = g.freq(z);
            acc += profile(x) * std::exp(cplx(0.0, -sigma * x));
        }
        fhat[static_cast<std::size_t>(z)] = acc * h / std::sqrt(2.0 * kPi);
    }
    double l1 = 0.0;
    for (int z = 0; z < N; ++z) {
        const double sigma = g.freq(z);
        const double w = (std::abs(sigma) / p.M + 1.0) * (std::abs(sigma) / p.M + 1.0);
        l1 += w * std::abs(fhat[static_cast<std::size_t>(z)]) * g.freq_step();
    }
    return l1 / std::sqrt(2.0 * kPi);
}

EstimateReport check_multiplication_lemma(const std::function<double(double)>& profile, const Field& u,
                                          const CarlemanParams& p, double budget) {
    p.require_tau_gt_M();
    if (is_degenerate(u)) return degenerate_report("multiplication", p);
    const GridSpec& g = u.grid();

    Field fu = u;
    {
        const ModeIndexer ix(g);
        auto* d = fu.values().data();
        const int last = g.n - 1;
        kernels::for_each(fu.size(), [&](std::size_t i) {
            int k[kMaxDim];
            ix.decompose(i, k);
            d[i] *= profile(g.coord(k[last]));
        });
    }

    const double lhs = norm_Y(fu, 0.5, p);
    const double rhs = profile_l1_weight(g, profile, p) * norm_Y(u, 0.5, p);

    EstimateReport r;
    r.name = "multiplication";
    r.params = {{"tau", p.tau}, {"M", p.M}, {"R", p.R}};
    r.budget = budget;
    r.ratios = {lhs / rhs};
    r.finalize();
    return r;
}

//------------------------------------------------------------------------------
// Quotient bound sweep: m(xi', xi_n) / m(xi', eta_n) <= C (|eta_n - xi_n|/M + 1)^2
// over lattice-spaced triples, uniform range plus a fine band at the sphere.
//------------------------------------------------------------------------------
EstimateReport check_quotient_bound(const CarlemanParams& p, const QuotientSweep& sweep, double budget) {
    p.require_tau_gt_M();
    const double step = kPi / 4.0;  // default-grid lattice spacing
    const double range = sweep.range_factor * p.tau;

    const int zr = std::max(1, static_cast<int>(range / step) / sweep.radial_count);
    const int za = std::max(1, static_cast<int>(2.0 * range / step) / sweep.axis_count);

    std::vector<double> radii;
    for (int z = 0; z * step <= range; z += zr) radii.push_back(z * step);
    std::vector<double> axis;
    for (int z = -static_cast<int>(range / step); z * step <= range; z += za) axis.push_back(z * step);
    // fine band around |.| = tau where the quotient's structure lives
    std::vector<double> band;
    for (int z = -sweep.band_count; z <= sweep.band_count; ++z) band.push_back(p.tau + z * step);

    auto ratio_over_bound = [&](double rp_sq, double xin, double etan) {
        const double num = m_symbol(rp_sq + xin * xin, xin, p);
        const double den = m_symbol(rp_sq + etan * etan, etan, p);
        const double b = std::abs(etan - xin) / p.M + 1.0;
        return num / (den * b * b);
    };

    const std::size_t triples =
        radii.size() * (axis.size() * axis.size() + band.size() * band.size());
    std::vector<double> row_max(radii.size(), 0.0);
    kernels::for_each(radii.size(), [&](std::size_t ri) {
        const double rp_sq = radii[ri] * radii[ri];
        double local = 0.0;
        for (double xin : axis)
            for (double etan : axis) local = std::max(local, ratio_over_bound(rp_sq, xin, etan));
        for (double xin : band)
            for (double etan : band) local = std::max(local, ratio_over_bound(rp_sq, xin, etan));
        row_max[ri] = local;
    });
    double worst = 0.0;
    for (double m : row_max) worst = std::max(worst, m);

    EstimateReport r;
    r.name = "quotient";
    r.params = {{"tau", p.tau}, {"M", p.M}, {"R", p.R}, {"triples", static_cast<double>(triples)}};
    r.budget = budget;
    r.ratios = row_max;  // per-radius maxima
    r.finalize();
    r.max_ratio = worst;
    r.pass = worst <= budget;
    r.note = "ratios are per-radius maxima over the (xi_n, eta_n) sweep";
    return r;
}

//------------------------------------------------------------------------------
// Pseudo-locality: |(1 - chi) P(D) u| R^N M^N / |u|_{Y^{1/2}} for the three
// multipliers of the proof.
//------------------------------------------------------------------------------
double pseudolocality_lhs(const Field& u, const CarlemanParams& p, PseudoTag tag) {
    const GridSpec& g = u.grid();
    const int last = g.n - 1;
    Field pu = apply_multiplier(u, [&](const VecN& xi) -> cplx {
        const double minv = std::pow(m_symbol_sq(norm_sq(xi), xi[last], p), -0.25);
        switch (tag) {
            case PseudoTag::resolvent_shift:
                return cplx((p.tau * p.tau - norm_sq(xi)) * minv, 0.0);
            case PseudoTag::tau_dxn:
                return cplx(0.0, p.tau * xi[last] * minv);
            case PseudoTag::tau_plain:
            default:
                return cplx(p.tau * minv, 0.0);
        }
    });
    const CutoffProfile chi{p.R};
    const ModeIndexer ix(g);
    auto* d = pu.values().data();
    kernels::for_each(pu.size(), [&](std::size_t i) {
        int k[kMaxDim];
        ix.decompose(i, k);
        d[i] *= 1.0 - chi.chi(g.coord(k[last]));
    });
    return norm_l2(pu);
}

EstimateReport check_pseudolocality(const Field& u, const CarlemanParams& p, PseudoTag tag, int order) {
    p.require_tau_gt_8MR();
    if (is_degenerate(u)) return degenerate_report("pseudolocality", p);
    require_slab_support(u, p.R, "check_pseudolocality");

    const double lhs = pseudolocality_lhs(u, p, tag);
    const double scale = std::pow(p.R * p.M, order);
    const double rhs = norm_Y(u, 0.5, p);

    EstimateReport r;
    r.name = "pseudolocality";
    r.params = {{"tau", p.tau},
                {"M", p.M},
                {"R", p.R},
                {"order", static_cast<double>(order)},
                {"multiplier", static_cast<double>(static_cast<int>(tag))}};
    r.budget = 0.0;  // set by the suite (trend checks)
    r.ratios = {lhs * scale / rhs};
    r.finalize();
    r.pass = true;  // single evaluation carries no budget
    r.note = "normalized R^N M^N ratio; pass criteria live in the suite trends";
    return r;
}

//------------------------------------------------------------------------------
// Corollary-level L^1 bound for d^k m^{-1/2}: composite-Simpson quadrature in
// xi_n from exact jets, sup over sampled |xi'| radii, normalized by
// M^{k/4 - 3/4} tau^{1/2}.
//------------------------------------------------------------------------------
double derivative_l1_value(int k, const CarlemanParams& p) {
    const double fracs[] = {0.0, 0.3, 0.7, 0.9, 0.97, 1.0, 1.03, 1.1, 1.3, 2.0, 3.0};
    const double X = 8.0 * p.tau;
    const double hq = std::min(p.M / 8.0, p.tau / 2048.0);
    const std::size_t half = static_cast<std::size_t>(X / hq) / 2 * 2;  // even panel count

    double sup = 0.0;
    for (double f : fracs) {
        const double rp_sq = (f * p.tau) * (f * p.tau);
        // integrand is even in xi_n: integrate [0, X] and double
        const double integral = kernels::sum_rows((half + 2) / 2, [&](std::size_t pair) {
            // Simpson pairs: nodes 2*pair, 2*pair+1, 2*pair+2
            double acc = 0.0;
            const std::size_t base = 2 * pair;
            if (base >= half) return 0.0;
            for (std::size_t off = 0; off <= 2; ++off) {
                const std::size_t node = base + off;
                const double xin = static_cast<double>(node) * hq;
                const double val = std::abs(m_inverse_sqrt_jet(rp_sq, xin, p, k)[static_cast<std::size_t>(k)]);
                acc += (off == 1 ? 4.0 : 1.0) * val;
            }
            return acc * hq / 3.0;
        });
        sup = std::max(sup, 2.0 * integral);
    }
    return sup * std::pow(p.M, 0.25 * k - 0.75) * std::sqrt(p.tau);
}

EstimateReport check_derivative_L1(int k, const CarlemanParams& p, double budget) {
    if (k < 8) throw parameter_error("check_derivative_L1: k >= 8 required");
    p.require_tau_gt_M();

    EstimateReport r;
    r.name = "derivative_l1";
    r.params = {{"tau", p.tau}, {"M", p.M}, {"R", p.R}, {"k", static_cast<double>(k)}};
    r.budget = budget;
    r.ratios = {derivative_l1_value(k, p)};
    r.finalize();
    return r;
}

//------------------------------------------------------------------------------
// Perturbed Carleman estimate with q (T = identity).
//------------------------------------------------------------------------------
EstimateQReport check_estimate_q(const Field& u, const ConductivityModel& model, const CarlemanParams& p,
                                 double qu_budget, double perturbed_budget) {
    p.require_tau_gt_8MR();
    const double A4 = std::pow(model.A_scan(), 4);
    if (p.M < p.R * p.R * A4)
        throw parameter_error(p.gate_msg("M >= R^2 A^4 (scanned A)"));
    EstimateQReport out;
    if (is_degenerate(u)) {
        out.qu_bound = degenerate_report("estimate_q.qu", p);
        out.perturbed = degenerate_report("estimate_q.perturbed", p);
        return out;
    }
    require_slab_support(u, p.R, "check_estimate_q");

    const double A = model.A_scan();
    const double y_half = norm_Y(u, 0.5, p);

    Field qu = pointwise_mul(model.strong_q(), u);
    const double qu_ratio =
        A > 0.0 ? norm_Y(qu, -0.5, p) * std::sqrt(p.M) / (A * A * y_half) : 0.0;

    out.qu_bound.name = "estimate_q.qu";
    out.qu_bound.params = {{"tau", p.tau}, {"M", p.M}, {"R", p.R}, {"A", A}};
    out.qu_bound.budget = qu_budget;
    out.qu_bound.ratios = {qu_ratio};
    out.qu_bound.finalize();

    Field perturbed = conjugated_laplacian(u, p) + qu;
    const double full_ratio = y_half / (p.R * norm_Y(perturbed, -0.5, p));

    out.perturbed.name = "estimate_q.perturbed";
    out.perturbed.params = {{"tau", p.tau}, {"M", p.M}, {"R", p.R}, {"A", A}};
    out.perturbed.budget = perturbed_budget;
    out.perturbed.ratios = {full_ratio};
    out.perturbed.finalize();
    return out;
}

//==============================================================================
// Suite drivers
//==============================================================================

EstimateReport carleman_explicit_suite(const GridSpec& g, const CarlemanParams& p, int samples, std::uint64_t seed) {
    EstimateReport suite;
    suite.name = "carleman_explicit";
    suite.params = {{"tau", p.tau}, {"M", p.M}, {"R", p.R}, {"n", static_cast<double>(g.n)},
                    {"N", static_cast<double>(g.N)}};
    suite.budget = 1.05;
    suite.provenance = EstimateReport::Provenance::paper_explicit;
    for (int s = 0; s < samples; ++s) {
        Field u = sample_bump(g, SupportShape::slab, g.R, seed + static_cast<std::uint64_t>(s));
        EstimateReport one = check_carleman_explicit(u, p);
        suite.ratios.push_back(one.max_ratio);
    }
    suite.finalize();
    return suite;
}

std::vector<EstimateReport> carleman_half_suite(const GridSpec& g, const std::vector<CarlemanParams>& points,
                                           int samples, std::uint64_t seed, double headroom) {
    if (points.empty()) throw parameter_error("carleman_half_suite: no parameter points");
    std::vector<EstimateReport> out;
    double budget = 0.0;
    double calib_max = 0.0;
    for (std::size_t pt = 0; pt < points.size(); ++pt) {
        const CarlemanParams& p = points[pt];
        EstimateReport rep;
        rep.name = "carleman_half";
        rep.params = {{"tau", p.tau}, {"M", p.M}, {"R", p.R}};
        for (int s = 0; s < samples; ++s) {
            Field u = sample_bump(g, SupportShape::slab, p.R, seed + static_cast<std::uint64_t>(s));
            rep.ratios.push_back(check_carleman_half(u, p, 1e300).max_ratio);
        }
        if (pt == 0) {
            double mx = 0.0;
            for (double r : rep.ratios) mx = std::max(mx, r);
            budget = headroom * mx;
            calib_max = mx;
            rep.note = "calibration point; budget = " + std::to_string(headroom) + " x observed max";
        } else {
            const bool tau_doubled = p.M == points[0].M;
            double mx = 0.0;
            for (double r : rep.ratios) mx = std::max(mx, r);
            if (tau_doubled) {
                const bool stable = std::abs(mx / calib_max - 1.0) <= 0.25;
                rep.note = stable ? "tau-doubling stability within 25%" : "tau-doubling stability VIOLATED";
            } else {
                const bool stable = mx <= 1.25 * calib_max;
                rep.note = stable ? "M-growth did not raise the ratio by more than 25%"
                                  : "M-growth stability VIOLATED";
            }
        }
        rep.budget = budget;
        rep.finalize();
        if (rep.note.find("VIOLATED") != std::string::npos) rep.pass = false;
        out.push_back(std::move(rep));
    }
    return out;
}

// Smallest grid (n = 2) whose lattice reaches past the characteristic shell;
// the radial symmetry of m in xi' makes the 2-d slice representative.
static GridSpec shell_grid(double tau, double M, double R) {
    const double need = 1.15 * tau + 3.0 * M + 16.0;
    for (int N : {128, 256, 512, 1024, 1536, 2048, 3072, 4096}) {
        const GridSpec g(2, N, 4.0 * R, R);
        if (g.freq_step() * (N / 2 - 1) >= need) return g;
    }
    throw parameter_error("shell_grid: tau too large for the supported grid sizes");
}

std::vector<EstimateReport> commutator_suite(const std::vector<CarlemanParams>& points, int samples,
                                             std::uint64_t seed, double spread_budget) {
    std::vector<EstimateReport> out;
    std::vector<double> maxima;
    for (const CarlemanParams& p : points) {
        const GridSpec g = shell_grid(p.tau, p.M, p.R);
        EstimateReport rep;
        rep.name = "commutator";
        rep.params = {{"tau", p.tau}, {"M", p.M}, {"R", p.R}, {"N", static_cast<double>(g.N)}};
        for (int s = 0; s < samples; ++s) {
            const std::uint64_t sd = seed + static_cast<std::uint64_t>(s);
            Field u = modulated_bump(g, shell_carrier(g, p.tau, p.M, sd), SupportShape::slab, p.R, sd);
            rep.ratios.push_back(check_commutator_lemma(u, p, 1e300).max_ratio);
        }
        rep.finalize();
        maxima.push_back(rep.max_ratio);
        out.push_back(std::move(rep));
    }
    double lo = maxima[0], hi = maxima[0];
    for (double m : maxima) {
        lo = std::min(lo, m);
        hi = std::max(hi, m);
    }
    const bool ok = hi <= spread_budget * lo;
    for (auto& rep : out) {
        rep.budget = spread_budget * lo;
        rep.pass = ok;
        rep.note = "normalized M^{1/2} ratios across the M-sweep within factor " +
                   std::to_string(spread_budget) + (ok ? "" : " VIOLATED");
    }
    return out;
}

std::vector<EstimateReport> multiplication_suite(const GridSpec& g, const CarlemanParams& calibration,
                                                 const CarlemanParams& hold, int samples, std::uint64_t seed,
                                                 double headroom) {
    auto gaussian_profile = [&](double xn) { return std::exp(-0.5 * xn * xn / (0.35 * 0.35)); };
    std::vector<EstimateReport> out;
    double budget = 0.0;
    for (int phase = 0; phase < 2; ++phase) {
        const CarlemanParams& p = phase == 0 ? calibration : hold;
        EstimateReport rep;
        rep.name = "multiplication";
        rep.params = {{"tau", p.tau}, {"M", p.M}, {"R", p.R}};
        for (int s = 0; s < samples; ++s) {
            Rng rng(seed + static_cast<std::uint64_t>(s));
            Field u = Field::physical(g);
            for (auto& v : u.values()) v = cplx(rng.gaussian(), rng.gaussian());
            rep.ratios.push_back(check_multiplication_lemma(gaussian_profile, u, p, 1e300).max_ratio);
        }
        if (phase == 0) {
            double mx = 0.0;
            for (double r : rep.ratios) mx = std::max(mx, r);
            budget = headroom * mx;
            rep.note = "calibration point; budget = " + std::to_string(headroom) + " x observed max";
        } else {
            rep.note = "hold at doubled tau";
        }
        rep.budget = budget;
        rep.finalize();
        out.push_back(std::move(rep));
    }
    return out;
}

std::vector<EstimateReport> quotient_suite(const CarlemanParams& calibration, const CarlemanParams& hold,
                                           double stability) {
    QuotientSweep sweep;
    EstimateReport calib = check_quotient_bound(calibration, sweep, 1e300);
    EstimateReport held = check_quotient_bound(hold, sweep, 1e300);
    calib.budget = 1.5 * calib.max_ratio;
    calib.pass = true;
    calib.note += "; calibration point";
    held.budget = calib.budget;
    const double rel = std::abs(held.max_ratio / calib.max_ratio - 1.0);
    held.pass = held.max_ratio <= held.budget && rel <= stability;
    held.note += "; tau-doubling change " + std::to_string(100.0 * rel) + "%";
    return {calib, held};
}

std::vector<EstimateReport> pseudolocality_suite(const GridSpec& g, const CarlemanParams& p, std::uint64_t seed) {
    std::vector<EstimateReport> out;

    // all three multipliers at the requested point; record normalized values
    // and assert the absolute level
    for (PseudoTag tag : {PseudoTag::resolvent_shift, PseudoTag::tau_dxn, PseudoTag::tau_plain}) {
        Field u = sample_bump(g, SupportShape::slab, p.R, seed);
        EstimateReport rep;
        rep.name = "pseudolocality";
        rep.params = {{"tau", p.tau}, {"M", p.M}, {"R", p.R},
                      {"multiplier", static_cast<double>(static_cast<int>(tag))}};
        const double lhs = pseudolocality_lhs(u, p, tag);
        rep.ratios = {lhs / norm_Y(u, 0.5, p)};
        rep.budget = 1e-3;
        rep.finalize();
        rep.note = "unnormalized localization leak relative to |u|_{Y^{1/2}}";
        out.push_back(std::move(rep));
    }

    // M-doubling trend for orders N = 1, 2: raw LHS must drop by 2^N * 0.5.
    // Run on a shell-covering grid with a wave packet; off the shell the leak
    // sits at the roundoff floor and shows no M-dependence.
    for (int order : {1, 2}) {
        const double tau_trend = std::max(p.tau, 10.0 * 2.0 * p.M * p.R);
        const CarlemanParams pa(tau_trend, p.M, p.R);
        const CarlemanParams pb(tau_trend, 2.0 * p.M, p.R);
        pb.require_tau_gt_8MR();
        const GridSpec gs = shell_grid(tau_trend, 2.0 * p.M, p.R);
        Field u = modulated_bump(gs, shell_carrier(gs, tau_trend, p.M, seed + 1), SupportShape::slab, p.R,
                                 seed + 1);
        const double la = pseudolocality_lhs(u, pa, PseudoTag::tau_plain);
        const double lb = pseudolocality_lhs(u, pb, PseudoTag::tau_plain);
        EstimateReport rep;
        rep.name = "pseudolocality.trend";
        rep.params = {{"tau", p.tau}, {"M", p.M}, {"R", p.R}, {"order", static_cast<double>(order)}};
        const double required = std::pow(2.0, order) * 0.5;
        rep.ratios = {lb > 0.0 ? la / lb : 1e300};
        rep.budget = required;
        rep.finalize();
        rep.pass = rep.max_ratio >= required;  // decay factor: larger is better
        rep.note = "raw LHS decay factor under M-doubling; requires >= " + std::to_string(required);
        out.push_back(std::move(rep));
    }
    return out;
}

std::vector<EstimateReport> derivative_l1_suite(const std::vector<double>& Ms, const std::vector<double>& taus,
                                                int k, double headroom) {
    std::vector<EstimateReport> out;
    double budget = 0.0;
    bool first = true;
    for (double M : Ms)
        for (double tau : taus) {
            const CarlemanParams p(tau, M, 1.0);
            EstimateReport rep = check_derivative_L1(k, p, first ? 1e300 : budget);
            if (first) {
                budget = headroom * rep.max_ratio;
                rep.budget = budget;
                rep.pass = true;
                rep.note = "calibration point; budget = " + std::to_string(headroom) + " x observed value";
                first = false;
            } else {
                rep.note = "hold point";
            }
            out.push_back(std::move(rep));
        }
    return out;
}

std::vector<EstimateReport> estimate_q_suite(const GridSpec& g, const ConductivityModel& model,
                                             const std::vector<CarlemanParams>& points, int samples,
                                             std::uint64_t seed) {
    std::vector<EstimateReport> out;
    std::vector<double> qu_maxima;
    double perturbed_budget = 0.0;
    for (std::size_t pt = 0; pt < points.size(); ++pt) {
        const CarlemanParams& p = points[pt];
        EstimateReport qu, full;
        qu.name = "estimate_q.qu";
        full.name = "estimate_q.perturbed";
        qu.params = full.params = {{"tau", p.tau}, {"M", p.M}, {"R", p.R}, {"A", model.A_scan()}};
        for (int s = 0; s < samples; ++s) {
            Field u = sample_bump(g, SupportShape::slab, p.R, seed + static_cast<std::uint64_t>(s));
            EstimateQReport one = check_estimate_q(u, model, p, 1e300, 1e300);
            qu.ratios.push_back(one.qu_bound.max_ratio);
            full.ratios.push_back(one.perturbed.max_ratio);
        }
        qu.finalize();
        full.finalize();
        qu_maxima.push_back(qu.max_ratio);
        if (pt == 0) {
            perturbed_budget = 1.5 * full.max_ratio;
            full.note = "calibration point; budget = 1.5 x observed max";
        } else {
            full.note = "hold point";
        }
        full.budget = perturbed_budget;
        full.pass = full.max_ratio <= perturbed_budget;
        out.push_back(std::move(qu));
        out.push_back(std::move(full));
    }
    // The normalized qu ratios must not grow across the M sweep: the first
    // point calibrates the constant, the others hold within headroom. (The
    // tau > 8MR gate forces extra M-decay on top of the lemma's M^{-1/2}, so
    // the observed values fall rather than stay level.)
    const double qu_budget = 1.5 * qu_maxima[0];
    bool ok = true;
    for (double m : qu_maxima) ok = ok && (m <= qu_budget || model.is_constant());
    std::size_t which = 0;
    for (auto& rep : out)
        if (rep.name == "estimate_q.qu") {
            rep.budget = qu_budget;
            rep.pass = ok;
            rep.note = which == 0 ? "calibration point for the normalized qu bound" : "hold point";
            ++which;
        }
    return out;
}

}  // namespace cgolab
