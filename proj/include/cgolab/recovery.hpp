#pragma once

#include <cstdint>
#include <vector>

#include "cgolab/cgo.hpp"
#include "cgolab/media.hpp"

namespace cgolab {

// Alessandrini-type pairing <(q1 - q2) v1, v2> via the bilinear forms of the
// two models. The vanishing under equal DN maps is out of scope; this is the
// pairing itself.
cplx alessandrini_pair(const ConductivityModel& m1, const ConductivityModel& m2, const Field& v1,
                       const Field& v2);

//==============================================================================
// RecoveryRecord
// One Fourier-mode recovery at (k, tau): the estimate <q v_{zeta1}, e^{zeta2.x}>
// rewritten with the phases combined (only e^{-ik.x} and w appear, nothing
// large is materialized), the true lattice coefficient, and the remainder.
// The identity q_hat_est - q_hat_true = r1 is algebra, so the closure defect
// is bookkeeping-exact.
//==============================================================================
struct RecoveryRecord {
    VecN k;
    double tau = 0.0;            // tau actually used (after the collision nudge)
    double tau_requested = 0.0;
    cplx q_hat_true{};
    cplx q_hat_est{};
    cplx r1{};                   // <q, e^{-ik.x} w1>
    double error = 0.0;          // |q_hat_est - q_hat_true|
    double closure_defect = 0.0; // relative defect of the identity
    bool converged = false;
    int iterations = 0;
    double wnorm_X = 0.0;
    double qnorm_X = 0.0;
    double min_symbol = 0.0;
};

RecoveryRecord recover_fourier_mode(const ConductivityModel& model, const VecN& k, double tau,
                                    const CgoOptions& opts = {}, std::uint64_t eta_seed = 5);

//==============================================================================
// Remainder bounds of the section-3 identity, single-potential specialization
// with both zeta_1 and zeta_2 solves.
//==============================================================================
struct RemainderReport {
    VecN k;
    double tau = 0.0;
    double ratio_w1 = 0.0;       // |<q, e^{-ik.x} w_j>| / ((1+|k|) |q|_X |w_j|_X)
    double ratio_w2 = 0.0;
    double ratio_bilinear = 0.0; // |<q w1, e^{-ik.x} w2>| / ((c0^{-2}+|k|)^2 |w1|_X |w2|_X)
    bool converged = false;
};

RemainderReport remainder_bound_check(const ConductivityModel& model, const VecN& k, double tau,
                                      const CgoOptions& opts = {}, std::uint64_t eta_seed = 5);

//==============================================================================
// Averaging experiment: the averaged squared X^{-1/2} norm of
// q over zeta_1(eta, tau), eta on the circle S = P cap S^{n-1}, tau in
// [lambda, 2 lambda], against the analytic right-hand-side surrogate.
//==============================================================================
struct AveragingRecord {
    double lambda = 0.0;
    int directions = 0;
    int tau_nodes = 0;
    double averaged = 0.0;     // (1/lambda) int_S int_lambda^{2 lambda} |q|^2 dtau dl
    double rhs_c0_term = 0.0;      // c0^{-8} / lambda
    double rhs_volume_term = 0.0;  // R^{n/2} c0^{-4} / sqrt(lambda)
    double rhs_modulus_term = 0.0; // (1 + |k|^2) * modulus at h = lambda^{-1/4}
};

std::vector<AveragingRecord> averaging_experiment(const ConductivityModel& model, const VecN& k,
                                                  const std::vector<double>& lambdas, int direction_count,
                                                  int tau_nodes_per_octave, std::uint64_t seed = 5);

}  // namespace cgolab
