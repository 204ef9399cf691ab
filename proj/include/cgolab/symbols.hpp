#pragma once

#include <cmath>
#include <vector>

#include "cgolab/field.hpp"
#include "cgolab/jets.hpp"

namespace cgolab {

//==============================================================================
// CarlemanParams
// (tau, M, R) of the weight phi(x) = tau x_n + M x_n^2 / 2 and the multiplier
//   m(xi) = ( M^{-1} | |xi|^2 - tau^2 |^2 + M^{-1} tau^2 xi_n^2 + M tau^2 )^{1/2}.
// Regime flags are evaluated once at construction; gate helpers throw
// parameter_error naming the violated gate.
//==============================================================================
struct CarlemanParams {
    double tau = 16.0;
    double M = 4.0;
    double R = 1.0;

    bool tau_gt_2MR = false;
    bool tau_gt_8MR = false;
    bool tau_gt_M = false;

    CarlemanParams(double tau_, double M_, double R_) : tau(tau_), M(M_), R(R_) {
        if (!(tau > 1.0)) throw parameter_error("CarlemanParams: tau > 1 required");
        if (!(M > 1.0)) throw parameter_error("CarlemanParams: M > 1 required");
        if (!(R >= 1.0)) throw parameter_error("CarlemanParams: R >= 1 required");
        tau_gt_2MR = tau > 2.0 * M * R;
        tau_gt_8MR = tau > 8.0 * M * R;
        tau_gt_M = tau > M;
    }

    bool M_at_least(double c) const { return M >= c * R * R; }

    void require_tau_gt_2MR() const {
        if (!tau_gt_2MR) throw parameter_error(gate_msg("tau > 2MR"));
    }
    void require_tau_gt_8MR() const {
        if (!tau_gt_8MR) throw parameter_error(gate_msg("tau > 8MR"));
    }
    void require_tau_gt_M() const {
        if (!tau_gt_M) throw parameter_error(gate_msg("tau > M"));
    }

    std::string gate_msg(const char* gate) const {
        return std::string("regime gate ") + gate + " violated (tau=" + std::to_string(tau) +
               ", M=" + std::to_string(M) + ", R=" + std::to_string(R) + ")";
    }
};

// m(xi) from the squared-norm pieces; the scalar form is the hot path.
inline double m_symbol_sq(double xi_norm_sq, double xi_n, const CarlemanParams& p) {
    const double a = xi_norm_sq - p.tau * p.tau;
    return (a * a + p.tau * p.tau * xi_n * xi_n) / p.M + p.M * p.tau * p.tau;
}
inline double m_symbol(double xi_norm_sq, double xi_n, const CarlemanParams& p) {
    return std::sqrt(m_symbol_sq(xi_norm_sq, xi_n, p));
}
inline double m_symbol(const VecN& xi, const CarlemanParams& p) {
    return m_symbol(norm_sq(xi), xi[xi.n - 1], p);
}

//==============================================================================
// ZetaVector
// zeta = re + i im with |re| = |im| = tau and re.im = 0, so zeta.zeta = 0.
//==============================================================================
struct ZetaVector {
    VecN re;
    VecN im;
    double tau = 0.0;

    ZetaVector(const VecN& re_, const VecN& im_, double tau_) : re(re_), im(im_), tau(tau_) {
        if (re.n != im.n) throw parameter_error("ZetaVector: dimension mismatch");
        if (!(tau > 0.0)) throw parameter_error("ZetaVector: tau must be positive");
        const double t2 = tau * tau;
        if (std::abs(dot(re, im)) > 1e-10 * t2) throw parameter_error("ZetaVector: re.im not orthogonal");
        if (std::abs(norm(re) - tau) > 1e-10 * tau) throw parameter_error("ZetaVector: |re| != tau");
        if (std::abs(norm(im) - tau) > 1e-10 * tau) throw parameter_error("ZetaVector: |im| != tau");
        const double zz_re = norm_sq(re) - norm_sq(im);
        const double zz_im = 2.0 * dot(re, im);
        if (std::hypot(zz_re, zz_im) > 1e-9 * t2) throw parameter_error("ZetaVector: zeta.zeta != 0");
    }

    int dim() const { return re.n; }
    // |zeta| in the X-norm weight: sqrt(|re|^2 + |im|^2) = sqrt(2) tau.
    double weight_norm() const { return std::sqrt(2.0) * tau; }
};

// p_zeta(xi) = |xi|^2 + 2 i zeta . xi = |xi|^2 - 2 im.xi + 2 i re.xi
inline cplx p_symbol(const VecN& xi, const ZetaVector& z) {
    return cplx(norm_sq(xi) - 2.0 * dot(z.im, xi), 2.0 * dot(z.re, xi));
}

// X-norm weight |zeta| + |p_zeta(xi)|.
inline double x_weight(const VecN& xi, const ZetaVector& z) {
    return z.weight_norm() + std::abs(p_symbol(xi, z));
}

// --- norms -------------------------------------------------------------------
double norm_Y(const Field& u, double s, const CarlemanParams& p);
double norm_X(const Field& u, double b, const ZetaVector& z);

// --- multiplier application ---------------------------------------------------
// Pointwise multiplication of the spectral coefficients by sym(xi). A physical
// input is transformed, multiplied and transformed back; the representation of
// the result matches the input. Non-finite symbol values raise numeric_error
// naming the offending xi.
template <class SymFn>
Field apply_multiplier(const Field& u, SymFn&& sym) {
    const GridSpec& g = u.grid();
    const bool was_physical = u.rep() == Rep::physical;
    Field hat = was_physical ? forward_transform(u) : u;
    const ModeIndexer ix(g);
    auto* d = hat.values().data();
    std::vector<std::string> bad(1);
    kernels::for_each(hat.size(), [&](std::size_t i) {
        int k[kMaxDim];
        ix.decompose(i, k);
        VecN xi(g.n);
        for (int a = 0; a < g.n; ++a) xi[a] = g.freq(k[a]);
        const cplx w = sym(xi);
        if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) {
            if (bad[0].empty()) bad[0] = to_string(xi);
            return;
        }
        d[i] *= w;
    });
    if (!bad[0].empty()) throw numeric_error("apply_multiplier: non-finite symbol at xi = " + bad[0]);
    return was_physical ? inverse_transform(hat) : hat;
}

// m(D)^s u
Field apply_m_power(const Field& u, double s, const CarlemanParams& p);

// --- spectral derivatives ------------------------------------------------------
// First derivatives zero the Nyquist plane so discrete integration by parts is
// exact; the Laplacian keeps the full |xi|^2 symbol.
Field derivative(const Field& u, int axis);
Field laplacian(const Field& u);

// --- conjugated operator and its A/B split -------------------------------------
// e^phi (-Delta)(e^{-phi} u) expanded algebraically:
//   -Delta u + 2 (tau + M x_n) d_n u + M u - (tau + M x_n)^2 u
// The exponentials are never materialized. Requires u numerically supported in
// |x_n| <= 4R so the polynomial weight is unambiguous on the torus.
Field conjugated_laplacian(const Field& u, const CarlemanParams& p);
Field A_op(const Field& u, const CarlemanParams& p);  // -Delta u - (tau + M x_n)^2 u
Field B_op(const Field& u, const CarlemanParams& p);  // 2 (tau + M x_n) d_n u + M u
Field commutator_AB(const Field& u, const CarlemanParams& p);  // -4M d_n^2 u + 4M (tau+M x_n)^2 u

// Commutator [e^phi(-Delta)(e^{-phi} .), m(D)^{-1/2}] u via the expanded form;
// the -Delta parts cancel exactly since they commute with the multiplier.
Field commutator_conj_mhalf(const Field& u, const CarlemanParams& p);

// tau + M x_n as a physical field.
Field weight_field(const GridSpec& g, const CarlemanParams& p);

// --- exact jets of m^{-1/2} -----------------------------------------------------
// Derivatives d^j/d xi_n^j of m^{-1/2} at (xi', xi_n) for j = 0..k, computed
// from the degree-4 polynomial jet of m^2; k <= 16.
std::vector<double> m_inverse_sqrt_jet(double xi_prime_sq, double xi_n, const CarlemanParams& p, int k);
inline std::vector<double> m_inverse_sqrt_jet(const VecN& xi_prime, double xi_n, const CarlemanParams& p, int k) {
    return m_inverse_sqrt_jet(norm_sq(xi_prime), xi_n, p, k);
}

}  // namespace cgolab
