#include "cgolab/recovery.hpp"

#include <cmath>

namespace cgolab {

cplx alessandrini_pair(const ConductivityModel& m1, const ConductivityModel& m2, const Field& v1,
                       const Field& v2) {
    return q_bilinear(m1, v1, v2) - q_bilinear(m2, v1, v2);
}

RecoveryRecord recover_fourier_mode(const ConductivityModel& model, const VecN& k, double tau,
                                    const CgoOptions& opts, std::uint64_t eta_seed) {
    const GridSpec& g = model.grid();
    RecoveryRecord rec;
    rec.k = k;
    rec.tau_requested = tau;
    rec.tau = nudge_tau(g, k, tau, eta_seed);

    const ZetaPair pair = make_zeta_pair(k, rec.tau, eta_seed);
    CgoSolution sol = solve_cgo(model, pair.zeta1, opts);
    rec.converged = sol.converged;
    rec.iterations = sol.iterations;
    rec.wnorm_X = sol.wnorm_X;
    rec.qnorm_X = sol.qnorm_X;
    rec.min_symbol = sol.min_symbol;

    rec.q_hat_true = model.q_fourier(k);

    VecN minus_k = -1.0 * k;
    Field phase = plane_wave(g, minus_k);  // e^{-ik.x}
    Field one_plus_w = fill_physical(g, [](const VecN&) { return cplx(1.0, 0.0); });
    add_scaled(one_plus_w, cplx(1.0, 0.0), sol.w);

    rec.q_hat_est = q_bilinear(model, phase, one_plus_w);
    rec.r1 = q_bilinear(model, phase, sol.w);
    rec.error = std::abs(rec.q_hat_est - rec.q_hat_true);

    const double scale = std::abs(rec.q_hat_true) + std::abs(rec.r1) + 1e-300;
    rec.closure_defect = std::abs(rec.q_hat_est - rec.q_hat_true - rec.r1) / scale;
    return rec;
}

RemainderReport remainder_bound_check(const ConductivityModel& model, const VecN& k, double tau,
                                      const CgoOptions& opts, std::uint64_t eta_seed) {
    const GridSpec& g = model.grid();
    RemainderReport rep;
    rep.k = k;
    rep.tau = nudge_tau(g, k, tau, eta_seed);

    const ZetaPair pair = make_zeta_pair(k, rep.tau, eta_seed);
    CgoSolution s1 = solve_cgo(model, pair.zeta1, opts);
    CgoSolution s2 = solve_cgo(model, pair.zeta2, opts);
    rep.converged = s1.converged && s2.converged;

    VecN minus_k = -1.0 * k;
    Field phase = plane_wave(g, minus_k);
    const double kn = norm(k);

    const cplx t1 = q_bilinear(model, phase, s1.w);
    const cplx t2 = q_bilinear(model, phase, s2.w);
    rep.ratio_w1 = std::abs(t1) / ((1.0 + kn) * s1.qnorm_X * s1.wnorm_X);
    rep.ratio_w2 = std::abs(t2) / ((1.0 + kn) * s2.qnorm_X * s2.wnorm_X);

    const cplx bil = q_bilinear(model, s1.w, pointwise_mul(phase, s2.w));
    const double c0 = model.c0();
    const double front = std::pow(1.0 / (c0 * c0) + kn, 2);
    rep.ratio_bilinear = std::abs(bil) / (front * s1.wnorm_X * s2.wnorm_X);
    return rep;
}

std::vector<AveragingRecord> averaging_experiment(const ConductivityModel& model, const VecN& k,
                                                  const std::vector<double>& lambdas, int direction_count,
                                                  int tau_nodes_per_octave, std::uint64_t seed) {
    const GridSpec& g = model.grid();
    const double kn = norm(k);
    if (direction_count < 8) throw parameter_error("averaging_experiment: direction_count >= 8 required");
    if (tau_nodes_per_octave < 8) throw parameter_error("averaging_experiment: >= 8 tau nodes per octave");

    // fixed plane orthogonal to k (deterministic from the seed)
    const ZetaPair frame = make_zeta_pair(k, std::max(2.0 * kn, 2.0), seed);
    const VecN& e1 = frame.eta;
    const VecN& e2 = frame.theta;

    std::vector<AveragingRecord> out;
    for (double lambda : lambdas) {
        if (!(lambda >= std::max(kn, 1.0)))
            throw parameter_error("averaging_experiment: lambda >= max(|k|, 1) required");
        AveragingRecord rec;
        rec.lambda = lambda;
        rec.directions = direction_count;
        rec.tau_nodes = tau_nodes_per_octave + 1;

        std::vector<double> taus(static_cast<std::size_t>(tau_nodes_per_octave) + 1);
        for (int j = 0; j <= tau_nodes_per_octave; ++j)
            taus[static_cast<std::size_t>(j)] = lambda * std::pow(2.0, static_cast<double>(j) / tau_nodes_per_octave);

        double circle_sum = 0.0;
        for (int i = 0; i < direction_count; ++i) {
            const double phi = 2.0 * kPi * i / direction_count;
            VecN eta = std::cos(phi) * e1 + std::sin(phi) * e2;
            VecN theta = -std::sin(phi) * e1 + std::cos(phi) * e2;

            // trapezoid in tau on the log-spaced nodes
            std::vector<double> vals(taus.size());
            for (std::size_t j = 0; j < taus.size(); ++j) {
                const ZetaPair pair = make_zeta_pair_with_basis(k, taus[j], eta, theta);
                const double nq = q_norm_X(model, pair.zeta1);
                vals[j] = nq * nq;
            }
            double tau_integral = 0.0;
            for (std::size_t j = 0; j + 1 < taus.size(); ++j)
                tau_integral += 0.5 * (vals[j] + vals[j + 1]) * (taus[j + 1] - taus[j]);
            circle_sum += tau_integral;
        }
        rec.averaged = (2.0 * kPi / direction_count) * circle_sum / lambda;

        const double c0 = model.c0();
        rec.rhs_c0_term = std::pow(c0, -8.0) / lambda;
        rec.rhs_volume_term = std::pow(g.R, 0.5 * g.n) * std::pow(c0, -4.0) / std::sqrt(lambda);
        rec.rhs_modulus_term =
            model.is_constant()
                ? 0.0
                : (1.0 + kn * kn) * modulus_of_continuity(model, std::pow(lambda, -0.25), 8, seed);
        out.push_back(rec);
    }
    return out;
}

}  // namespace cgolab
