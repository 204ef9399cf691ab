#pragma once

#include <cstdint>
#include <vector>

#include "cgolab/media.hpp"
#include "cgolab/symbols.hpp"

namespace cgolab {

//==============================================================================
// ZetaPair
// The section-3 geometry: for a lattice frequency k and tau > |k|, two complex
// frequencies with zeta_j . zeta_j = 0 and zeta_1 + zeta_2 = -i k, built from
// an orthonormal pair (eta, theta) spanning a plane orthogonal to k.
//==============================================================================
struct ZetaPair {
    VecN k;
    double tau;
    VecN eta, theta;
    ZetaVector zeta1;
    ZetaVector zeta2;
};

// Deterministic construction from (k, tau, eta_seed); requires n >= 3 when
// k != 0 (a 2-plane orthogonal to k must exist) and tau > |k|.
ZetaPair make_zeta_pair(const VecN& k, double tau, std::uint64_t eta_seed);

// Same geometry with an explicit orthonormal basis of the plane.
ZetaPair make_zeta_pair_with_basis(const VecN& k, double tau, const VecN& eta, const VecN& theta);

// Small dense orthogonal matrix.
struct MatN {
    int n = 0;
    std::array<std::array<double, kMaxDim>, kMaxDim> a{};

    static MatN identity(int n);
    VecN apply(const VecN& v) const;
    MatN transpose() const;
    MatN mul(const MatN& o) const;
    double det() const;
};

// Rotation T with T e_n = re_zeta / |re_zeta| and det T = +1, built from at
// most two Householder reflections.
MatN rotation_to_en(const VecN& re_zeta);

// Faddeev-type symbol of -Delta - 2 zeta . grad (gradient Nyquist-zeroed to
// match the lattice operators).
cplx faddeev_symbol(const GridSpec& g, const int* k_idx, const ZetaVector& zeta);

// Apply the operator -Delta - 2 zeta . grad.
Field apply_cgo_operator(const Field& u, const ZetaVector& zeta);

// Lattice modes where the symbol vanishes structurally (the torus kernel of
// the operator): xi = 0 always, and xi = k for the pair geometry. No choice
// of tau can move them.
std::vector<std::size_t> kernel_modes(const GridSpec& g, const ZetaVector& zeta);

// Minimum of |symbol| over the lattice excluding the structural kernel modes.
double min_symbol(const GridSpec& g, const ZetaVector& zeta);

// Spectral division by the symbol on the mean-free sector. The zero mode is
// the kernel of the torus operator: inputs must carry no mean (relative to
// the spectral peak), else a characteristic-collision error is raised; any
// other near-characteristic lattice point is reported with its xi.
Field faddeev_apply(const Field& f, const ZetaVector& zeta, double floor_frac = 1e-6);

// Search tau in [tau(1-rel), tau(1+rel)] maximizing the lattice min-symbol of
// zeta_1(k, tau); collisions are resolved by moving the experiment parameter,
// never by clamping the symbol.
double nudge_tau(const GridSpec& g, const VecN& k, double tau, std::uint64_t eta_seed, double rel = 1e-3);

struct CgoOptions {
    double tol = 1e-8;          // stop when residual_X <= tol * qnorm_X
    int max_iter = 50;
    double sym_floor_frac = 1e-6;  // collision floor as a fraction of tau^2
    std::uint64_t seed = 1;
};

//==============================================================================
// CgoSolution
// Fixed-point construction of w with (-Delta - 2 zeta.grad + q) w = -q + c psi,
// where psi is a fixed bump supported in the band 2R < x_n < 4R, disjoint from
// the ball |x| <= R. The corrector absorbs the torus kernel mode (w == -1
// solves the uncorrected lattice equation exactly, so a literal global solve
// is the trivial branch); inside Omega the CGO equation holds to the solver
// tolerance. residual_X measures the solved equation; corrector_norm_X
// reports the off-Omega defect.
//==============================================================================
struct CgoSolution {
    ZetaVector zeta;
    Field w;
    int iterations = 0;
    bool converged = false;
    double residual_X = 0.0;       // |(-Delta - 2 zeta.grad + q) w + q - c psi|_{X^{-1/2}}
    double wnorm_X = 0.0;          // |w|_{X^{1/2}}
    double qnorm_X = 0.0;          // |q|_{X^{-1/2}}
    double min_symbol = 0.0;
    double corrector_mean = 0.0;   // c
    double corrector_norm_X = 0.0; // |c psi|_{X^{-1/2}}
    double tau_gate_group = 0.0;   // tau / (R^3 A^4); the admissibility gate tau > C R^3 A^4
                                   // has an unspecified constant, so it is logged, not enforced
    std::vector<double> residual_history;
    std::vector<double> step_history;  // successive-difference X^{1/2} norms

    CgoSolution(const ZetaVector& z, const GridSpec& g) : zeta(z), w(Field::physical(g)) {}
};

CgoSolution solve_cgo(const ConductivityModel& model, const ZetaVector& zeta, const CgoOptions& opts = {});

// The corrector bump (integral-normalized), supported in 2R < x_n < 4R.
Field corrector_bump(const GridSpec& g);

//==============================================================================
// verify_solution
// Weak-form check against test functions supported in |x| <= R:
//   <w, (-Delta + 2 zeta.grad) u_i> + <q (1 + w), u_i>  ~ 0
// with the pairing bilinear and the operator the exact lattice transpose of
// the solve operator.
//==============================================================================
struct VerifyReport {
    int count = 0;
    double max_defect = 0.0;  // relative to |u_i|_{X^{1/2}} * qnorm_X
    bool pass = false;
    std::vector<double> defects;
};

VerifyReport verify_solution(const CgoSolution& sol, const ConductivityModel& model, int test_count,
                             double tol, std::uint64_t seed = 5);

}  // namespace cgolab
