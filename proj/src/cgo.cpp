#include "cgolab/cgo.hpp"

#include <cmath>

#include "cgolab/rng.hpp"
#include "cgolab/test_functions.hpp"
#include "cgolab/windows.hpp"

namespace cgolab {

namespace {

VecN gram_schmidt_unit(const VecN& v, const std::vector<VecN>& against) {
    VecN r = v;
    for (const VecN& a : against) r -= dot(r, a) * a;
    const double m = norm(r);
    if (m < 1e-10) throw parameter_error("gram_schmidt_unit: degenerate direction");
    r *= 1.0 / m;
    return r;
}

}  // namespace

ZetaPair make_zeta_pair(const VecN& k, double tau, std::uint64_t eta_seed) {
    const int n = k.n;
    if (n < 2) throw parameter_error("make_zeta_pair: dimension must be >= 2");
    const double kn = norm(k);
    if (!(tau > kn)) throw parameter_error("make_zeta_pair: tau > |k| required");
    if (kn > 0.0 && n < 3)
        throw parameter_error("make_zeta_pair: k != 0 needs n >= 3 for a 2-plane orthogonal to k");

    std::vector<VecN> frame;
    if (kn > 0.0) frame.push_back((1.0 / kn) * k);

    Rng rng(eta_seed * 0x9e3779b97f4a7c15ULL + 11);
    auto draw_unit = [&]() {
        for (int attempt = 0; attempt < 64; ++attempt) {
            VecN v(n);
            for (int a = 0; a < n; ++a) v[a] = rng.gaussian();
            if (norm(v) < 1e-8) continue;
            VecN r = v;
            bool ok = true;
            try {
                r = gram_schmidt_unit(v, frame);
            } catch (const parameter_error&) {
                ok = false;
            }
            if (ok) return r;
        }
        throw numeric_error("make_zeta_pair: failed to draw an orthonormal frame");
    };

    const VecN eta = draw_unit();
    frame.push_back(eta);
    const VecN theta = draw_unit();

    const double beta = std::sqrt(tau * tau - 0.25 * kn * kn);
    return ZetaPair{k, tau, eta, theta, ZetaVector(tau * eta, -0.5 * k + beta * theta, tau),
                    ZetaVector(-1.0 * tau * eta, -0.5 * k - beta * theta, tau)};
}

ZetaPair make_zeta_pair_with_basis(const VecN& k, double tau, const VecN& eta, const VecN& theta) {
    const double kn = norm(k);
    if (!(tau > kn)) throw parameter_error("make_zeta_pair_with_basis: tau > |k| required");
    if (std::abs(norm(eta) - 1.0) > 1e-12 || std::abs(norm(theta) - 1.0) > 1e-12 ||
        std::abs(dot(eta, theta)) > 1e-12 || std::abs(dot(eta, k)) > 1e-12 * (1.0 + kn) ||
        std::abs(dot(theta, k)) > 1e-12 * (1.0 + kn))
        throw parameter_error("make_zeta_pair_with_basis: (eta, theta) must be orthonormal and orthogonal to k");
    const double beta = std::sqrt(tau * tau - 0.25 * kn * kn);
    return ZetaPair{k, tau, eta, theta, ZetaVector(tau * eta, -0.5 * k + beta * theta, tau),
                    ZetaVector(-1.0 * tau * eta, -0.5 * k - beta * theta, tau)};
}

MatN MatN::identity(int n) {
    MatN m;
    m.n = n;
    for (int i = 0; i < n; ++i) m.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1.0;
    return m;
}

VecN MatN::apply(const VecN& v) const {
    VecN r(n);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * v[j];
        r[i] = s;
    }
    return r;
}

MatN MatN::transpose() const {
    MatN t;
    t.n = n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            t.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                a[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    return t;
}

MatN MatN::mul(const MatN& o) const {
    MatN r;
    r.n = n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int l = 0; l < n; ++l)
                s += a[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)] *
                     o.a[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)];
            r.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = s;
        }
    return r;
}

double MatN::det() const {
    // Gaussian elimination on a copy; n <= 4
    std::array<std::array<double, kMaxDim>, kMaxDim> m = a;
    double d = 1.0;
    for (int c = 0; c < n; ++c) {
        int piv = c;
        for (int r = c + 1; r < n; ++r)
            if (std::abs(m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]) >
                std::abs(m[static_cast<std::size_t>(piv)][static_cast<std::size_t>(c)]))
                piv = r;
        if (piv != c) {
            std::swap(m[static_cast<std::size_t>(piv)], m[static_cast<std::size_t>(c)]);
            d = -d;
        }
        const double p = m[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)];
        if (p == 0.0) return 0.0;
        d *= p;
        for (int r = c + 1; r < n; ++r) {
            const double f = m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] / p;
            for (int cc = c; cc < n; ++cc)
                m[static_cast<std::size_t>(r)][static_cast<std::size_t>(cc)] -=
                    f * m[static_cast<std::size_t>(c)][static_cast<std::size_t>(cc)];
        }
    }
    return d;
}

MatN rotation_to_en(const VecN& re_zeta) {
    const int n = re_zeta.n;
    const double m = norm(re_zeta);
    if (m == 0.0) throw parameter_error("rotation_to_en: zero vector");
    const VecN v = (1.0 / m) * re_zeta;
    const VecN en = VecN::axis(n, n - 1, 1.0);

    auto householder = [&](const VecN& u) {
        MatN h = MatN::identity(n);
        const double uu = norm_sq(u);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                h.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -= 2.0 * u[i] * u[j] / uu;
        return h;
    };

    VecN diff = en - v;
    if (norm(diff) < 1e-14) return MatN::identity(n);

    // H_u swaps e_n and v (det -1); H_a reflects about a hyperplane containing
    // v to restore det +1.
    MatN hu = householder(diff);
    VecN aux(n);
    int pick = 0;
    double best = std::abs(v[0]);
    for (int i = 1; i < n; ++i)
        if (std::abs(v[i]) < best) {
            best = std::abs(v[i]);
            pick = i;
        }
    aux = gram_schmidt_unit(VecN::axis(n, pick, 1.0), {v});
    MatN ha = householder(aux);
    return ha.mul(hu);
}

cplx faddeev_symbol(const GridSpec& g, const int* k_idx, const ZetaVector& zeta) {
    double xi_sq = 0.0, re_dot = 0.0, im_dot = 0.0;
    for (int a = 0; a < g.n; ++a) {
        const double f = g.freq(k_idx[a]);
        const double fd = g.freq_deriv(k_idx[a]);
        xi_sq += f * f;
        re_dot += zeta.re[a] * fd;
        im_dot += zeta.im[a] * fd;
    }
    return cplx(xi_sq + 2.0 * im_dot, -2.0 * re_dot);
}

Field apply_cgo_operator(const Field& u, const ZetaVector& zeta) {
    const GridSpec& g = u.grid();
    const bool was_physical = u.rep() == Rep::physical;
    Field hat = was_physical ? forward_transform(u) : u;
    const ModeIndexer ix(g);
    auto* d = hat.values().data();
    kernels::for_each(hat.size(), [&](std::size_t i) {
        int k[kMaxDim];
        ix.decompose(i, k);
        d[i] *= faddeev_symbol(g, k, zeta);
    });
    return was_physical ? inverse_transform(hat) : hat;
}

// Structural zeros of the symbol: xi = 0 and (for the pair geometry) xi = k
// are exactly characteristic for every admissible zeta; they are the torus
// kernel of the operator, not accidental collisions, and are identified by
// an exact-zero threshold well below anything a lattice near-miss produces.
double structural_floor(const ZetaVector& zeta) { return 1e-11 * zeta.tau * zeta.tau; }

std::vector<std::size_t> kernel_modes(const GridSpec& g, const ZetaVector& zeta) {
    const ModeIndexer ix(g);
    const double floor = structural_floor(zeta);
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < g.total(); ++i) {
        int k[kMaxDim];
        ix.decompose(i, k);
        if (std::abs(faddeev_symbol(g, k, zeta)) <= floor) out.push_back(i);
    }
    return out;
}

double min_symbol(const GridSpec& g, const ZetaVector& zeta) {
    const ModeIndexer ix(g);
    const double sf = structural_floor(zeta);
    const double worst = kernels::max(g.total(), [&](std::size_t i) {
        int k[kMaxDim];
        ix.decompose(i, k);
        const double a = std::abs(faddeev_symbol(g, k, zeta));
        return a <= sf ? -1e300 : -a;  // skip the structural kernel modes
    });
    return -worst;
}

Field faddeev_apply(const Field& f, const ZetaVector& zeta, double floor_frac) {
    const GridSpec& g = f.grid();
    const bool was_physical = f.rep() == Rep::physical;
    Field hat = was_physical ? forward_transform(f) : f;

    const double peak = max_abs(hat);
    const double sf = structural_floor(zeta);
    const double floor = floor_frac * zeta.tau * zeta.tau;
    const ModeIndexer ix(g);
    auto* d = hat.values().data();
    std::vector<std::string> collision(1), kernel_hit(1);
    kernels::for_each(hat.size(), [&](std::size_t i) {
        int k[kMaxDim];
        ix.decompose(i, k);
        const cplx s = faddeev_symbol(g, k, zeta);
        const double mag = std::abs(s);
        if (mag <= sf) {
            // torus kernel mode: the forcing must not load it
            if (std::abs(d[i]) > 1e-10 * peak && kernel_hit[0].empty()) {
                VecN xi(g.n);
                for (int a = 0; a < g.n; ++a) xi[a] = g.freq(k[a]);
                kernel_hit[0] = to_string(xi);
            }
            d[i] = cplx(0.0, 0.0);
            return;
        }
        if (mag < floor) {
            if (collision[0].empty()) {
                VecN xi(g.n);
                for (int a = 0; a < g.n; ++a) xi[a] = g.freq(k[a]);
                collision[0] = to_string(xi);
            }
            return;
        }
        d[i] /= s;
    });
    if (!kernel_hit[0].empty())
        throw numeric_error("faddeev_apply: forcing loads the torus kernel mode at xi = " + kernel_hit[0]);
    if (!collision[0].empty())
        throw numeric_error("faddeev_apply: characteristic collision at xi = " + collision[0] +
                            " (|symbol| below the floor); perturb tau");
    return was_physical ? inverse_transform(hat) : hat;
}

double nudge_tau(const GridSpec& g, const VecN& k, double tau, std::uint64_t eta_seed, double rel) {
    double best_tau = tau;
    double best = -1.0;
    const int half = 20;
    for (int j = -half; j <= half; ++j) {
        const double cand = tau * (1.0 + rel * static_cast<double>(j) / half);
        if (!(cand > norm(k))) continue;
        const ZetaPair pair = make_zeta_pair(k, cand, eta_seed);
        const double ms = std::min(min_symbol(g, pair.zeta1), min_symbol(g, pair.zeta2));
        if (ms > best) {
            best = ms;
            best_tau = cand;
        }
    }
    return best_tau;
}

Field corrector_bump(const GridSpec& g) {
    const double R = g.R;
    const KaiserWindow win{0.8 * R, std::min(14.0, kaiser_beta_budget(g, 0.8 * R))};
    const int last = g.n - 1;
    Field psi = fill_physical(g, [&](const VecN& x) {
        return cplx(win.value(x[last] - 3.0 * R), 0.0);
    });
    const double total = integrate(psi).real();
    return (1.0 / total) * psi;
}

CgoSolution solve_cgo(const ConductivityModel& model, const ZetaVector& zeta, const CgoOptions& opts) {
    const GridSpec& g = model.grid();
    if (zeta.dim() != g.n) throw usage_error("solve_cgo: zeta dimension mismatch");

    CgoSolution sol(zeta, g);
    sol.qnorm_X = q_norm_X(model, zeta);
    sol.min_symbol = min_symbol(g, zeta);
    const double A4 = std::pow(model.A_scan(), 4);
    sol.tau_gate_group = A4 > 0.0 ? zeta.tau / (std::pow(g.R, 3) * A4) : 0.0;

    if (model.is_constant() || sol.qnorm_X == 0.0) {
        sol.converged = true;
        sol.iterations = 1;
        return sol;
    }

    const double floor = opts.sym_floor_frac * zeta.tau * zeta.tau;
    if (sol.min_symbol < floor)
        throw numeric_error("solve_cgo: characteristic collision (min |symbol| = " +
                            std::to_string(sol.min_symbol) + " below floor); nudge tau");

    // Torus kernel of the operator: xi = 0 always, and xi = k for pair
    // geometry (e^{ik.x} times a harmonic exponential is again harmonic).
    // One off-Omega corrector bump per kernel mode absorbs the forcing there;
    // inside Omega the CGO equation is untouched.
    const std::vector<std::size_t> kset = kernel_modes(g, zeta);
    const std::size_t m = kset.size();

    const Field& q = model.strong_q();
    Field psi = corrector_bump(g);
    const ModeIndexer ix(g);

    std::vector<Field> correctors;       // psi * e^{i xi_j . x}, physical
    std::vector<Field> corrector_hats;   // their transforms
    correctors.reserve(m);
    corrector_hats.reserve(m);
    for (std::size_t j = 0; j < m; ++j) {
        int kidx[kMaxDim];
        ix.decompose(kset[j], kidx);
        VecN xi(g.n);
        for (int a = 0; a < g.n; ++a) xi[a] = g.freq(kidx[a]);
        Field mod = pointwise_mul(plane_wave(g, xi), psi);
        corrector_hats.push_back(forward_transform(mod));
        correctors.push_back(std::move(mod));
    }

    // m x m system: corrector coefficients that cancel the forcing on the
    // kernel modes. Near-diagonal (psi-hat concentrated), solved by Gaussian
    // elimination.
    auto solve_coeffs = [&](const Field& fhat_raw) {
        std::vector<cplx> A(m * m), b(m);
        for (std::size_t l = 0; l < m; ++l) {
            b[l] = fhat_raw[kset[l]];
            for (std::size_t j = 0; j < m; ++j) A[l * m + j] = corrector_hats[j][kset[l]];
        }
        std::vector<cplx> c(m, cplx(0.0, 0.0));
        std::vector<std::size_t> perm(m);
        for (std::size_t i = 0; i < m; ++i) perm[i] = i;
        for (std::size_t col = 0; col < m; ++col) {
            std::size_t piv = col;
            for (std::size_t r = col + 1; r < m; ++r)
                if (std::abs(A[r * m + col]) > std::abs(A[piv * m + col])) piv = r;
            if (piv != col) {
                for (std::size_t cc = 0; cc < m; ++cc) std::swap(A[col * m + cc], A[piv * m + cc]);
                std::swap(b[col], b[piv]);
            }
            const cplx pv = A[col * m + col];
            if (std::abs(pv) == 0.0) throw numeric_error("solve_cgo: singular corrector system");
            for (std::size_t r = col + 1; r < m; ++r) {
                const cplx f = A[r * m + col] / pv;
                for (std::size_t cc = col; cc < m; ++cc) A[r * m + cc] -= f * A[col * m + cc];
                b[r] -= f * b[col];
            }
        }
        for (std::size_t r = m; r-- > 0;) {
            cplx acc = b[r];
            for (std::size_t cc = r + 1; cc < m; ++cc) acc -= A[r * m + cc] * c[cc];
            c[r] = acc / A[r * m + r];
        }
        return c;
    };

    // symbol on the lattice
    Field symbol = Field::spectral(g);
    {
        auto* d = symbol.values().data();
        kernels::for_each(symbol.size(), [&](std::size_t i) {
            int k[kMaxDim];
            ix.decompose(i, k);
            d[i] = faddeev_symbol(g, k, zeta);
        });
    }

    std::vector<cplx> coeffs(m, cplx(0.0, 0.0));
    auto corrected_forcing_hat = [&](const Field& w) {
        Field f = Field::physical(g);
        auto* d = f.values().data();
        const auto* qv = q.values().data();
        const auto* wv = w.values().data();
        kernels::for_each(f.size(), [&](std::size_t i) { d[i] = -qv[i] * (1.0 + wv[i]); });
        Field fhat = forward_transform(f);
        coeffs = solve_coeffs(fhat);
        for (std::size_t j = 0; j < m; ++j) add_scaled(fhat, -coeffs[j], corrector_hats[j]);
        for (std::size_t l = 0; l < m; ++l) fhat[kset[l]] = cplx(0.0, 0.0);  // exact by construction
        return fhat;
    };

    Field w = Field::physical(g);
    Field fhat = corrected_forcing_hat(w);

    for (int it = 1; it <= opts.max_iter; ++it) {
        Field what = fhat;
        {
            auto* d = what.values().data();
            const auto* sv = symbol.values().data();
            const double sf = structural_floor(zeta);
            kernels::for_each(what.size(), [&](std::size_t i) {
                d[i] = std::abs(sv[i]) <= sf ? cplx(0.0, 0.0) : d[i] / sv[i];
            });
        }
        Field w_new = inverse_transform(what);

        Field diff = w_new - w;
        sol.step_history.push_back(norm_X(diff, 0.5, zeta));
        w = std::move(w_new);
        sol.iterations = it;

        Field fhat_new = corrected_forcing_hat(w);
        Field rhat = Field::spectral(g);
        {
            auto* d = rhat.values().data();
            const auto* sv = symbol.values().data();
            const auto* wh = what.values().data();
            const auto* fn = fhat_new.values().data();
            kernels::for_each(rhat.size(), [&](std::size_t i) { d[i] = sv[i] * wh[i] - fn[i]; });
        }
        sol.residual_X = norm_X(rhat, -0.5, zeta);
        sol.residual_history.push_back(sol.residual_X);

        fhat = std::move(fhat_new);
        if (sol.residual_X <= opts.tol * sol.qnorm_X) {
            sol.converged = true;
            break;
        }
    }

    sol.w = std::move(w);
    sol.corrector_mean = m > 0 ? coeffs[0].real() : 0.0;
    Field corr_total = Field::physical(g);
    for (std::size_t j = 0; j < m; ++j) add_scaled(corr_total, coeffs[j], correctors[j]);
    sol.corrector_norm_X = norm_X(corr_total, -0.5, zeta);
    sol.wnorm_X = norm_X(sol.w, 0.5, zeta);
    return sol;
}

VerifyReport verify_solution(const CgoSolution& sol, const ConductivityModel& model, int test_count,
                             double tol, std::uint64_t seed) {
    const GridSpec& g = model.grid();
    VerifyReport rep;
    rep.count = test_count;

    // transpose of the solve operator under the bilinear pairing
    ZetaVector minus_zeta(-1.0 * sol.zeta.re, -1.0 * sol.zeta.im, sol.zeta.tau);

    Field one_plus_w = fill_physical(g, [](const VecN&) { return cplx(1.0, 0.0); });
    add_scaled(one_plus_w, cplx(1.0, 0.0), sol.w);

    for (int t = 0; t < test_count; ++t) {
        Field u = sample_bump(g, SupportShape::ball, g.R, seed + static_cast<std::uint64_t>(t));
        Field lu = apply_cgo_operator(u, minus_zeta);  // -Delta + 2 zeta . grad
        const cplx lhs = pairing(sol.w, lu);
        const cplx qterm = q_bilinear(model, one_plus_w, u);
        const double defect = std::abs(lhs + qterm);
        const double scale = norm_X(u, 0.5, sol.zeta) * (sol.qnorm_X > 0.0 ? sol.qnorm_X : 1.0);
        rep.defects.push_back(defect / scale);
        rep.max_defect = std::max(rep.max_defect, defect / scale);
    }
    rep.pass = rep.max_defect <= tol;
    return rep;
}

}  // namespace cgolab
