#include <doctest.h>

#include <cmath>

#include "cgolab/cgo.hpp"
#include "cgolab/test_functions.hpp"
#include "helpers.hpp"

using namespace cgolab;
using cgolab::testing::rel_diff;

namespace {

ConductivityModel gaussian_model(const GridSpec& g, double eps = 0.1) {
    ModelParams p;
    p.kind = ConductivityKind::gaussian_log;
    p.eps = eps;
    p.sigma = 0.25;
    return ConductivityModel(g, p);
}

// random field with the operator's kernel modes projected out
Field kernel_free_random(const GridSpec& g, const ZetaVector& z, std::uint64_t seed) {
    Field hat = forward_transform(cgolab::testing::random_field(g, seed));
    for (std::size_t i : kernel_modes(g, z)) hat[i] = cplx(0.0, 0.0);
    return inverse_transform(hat);
}

}  // namespace

TEST_SUITE_BEGIN("cgo");

TEST_CASE("zeta pair: frozen example from the explicit basis") {
    VecN k{1.0, 0.0, 0.0};
    ZetaPair pair = make_zeta_pair_with_basis(k, 5.0, VecN{0.0, 1.0, 0.0}, VecN{0.0, 0.0, 1.0});
    CHECK(pair.zeta1.re[1] == doctest::Approx(5.0));
    CHECK(pair.zeta1.im[0] == doctest::Approx(-0.5));
    CHECK(pair.zeta1.im[2] == doctest::Approx(std::sqrt(24.75)).epsilon(1e-12));
    CHECK(std::sqrt(24.75) == doctest::Approx(4.974937).epsilon(1e-6));

    for (int a = 0; a < 3; ++a) {
        CHECK(std::abs(pair.zeta1.re[a] + pair.zeta2.re[a]) < 1e-12);
        CHECK(pair.zeta1.im[a] + pair.zeta2.im[a] == doctest::Approx(-k[a]).epsilon(1e-12));
    }

    // zeta1 . zeta1 = 25 - (0.25 + 24.75) + 2i*0 = 0
    const double re2 = norm_sq(pair.zeta1.re), im2 = norm_sq(pair.zeta1.im);
    CHECK(std::abs(re2 - im2) < 1e-12 * 25.0);
    CHECK(std::abs(dot(pair.zeta1.re, pair.zeta1.im)) < 1e-12 * 25.0);
}

TEST_CASE("zeta pair algebra on 100 random triples") {
    Rng rng(4242);
    for (int t = 0; t < 100; ++t) {
        VecN k(3);
        for (int a = 0; a < 3; ++a) k[a] = std::round(rng.uniform(-4.0, 4.0)) * (kPi / 4.0);
        const double tau = rng.uniform(norm(k) + 1.0, 50.0);
        ZetaPair pair = make_zeta_pair(k, tau, 100 + static_cast<std::uint64_t>(t));
        const double t2 = tau * tau;

        for (const ZetaVector* z : {&pair.zeta1, &pair.zeta2}) {
            const double zz_re = norm_sq(z->re) - norm_sq(z->im);
            const double zz_im = 2.0 * dot(z->re, z->im);
            CHECK(std::hypot(zz_re, zz_im) <= 1e-9 * t2);
        }
        double sum_err = 0.0;
        for (int a = 0; a < 3; ++a) {
            sum_err = std::max(sum_err, std::abs(pair.zeta1.re[a] + pair.zeta2.re[a]));
            sum_err = std::max(sum_err, std::abs(pair.zeta1.im[a] + pair.zeta2.im[a] + k[a]));
        }
        CHECK(sum_err <= 1e-10 * tau);
    }
    CHECK_THROWS_AS((void)make_zeta_pair(VecN{1.0, 0.0, 0.0}, 0.5, 1), parameter_error);
    CHECK_THROWS_AS((void)make_zeta_pair(VecN{1.0, 0.0}, 5.0, 1), parameter_error);  // n = 2 with k != 0
}

TEST_CASE("phase identity e^{zeta1.x} e^{zeta2.x} = e^{-ik.x} at moderate tau") {
    const GridSpec g(3, 16, 4.0, 1.0);
    VecN k{kPi / 4.0, 0.0, -kPi / 2.0};
    ZetaPair pair = make_zeta_pair(k, 15.0, 9);
    const ModeIndexer ix(g);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.total(); i += 3) {
        int kk[kMaxDim];
        ix.decompose(i, kk);
        VecN x(3);
        for (int a = 0; a < 3; ++a) x[a] = g.coord(kk[a]);
        auto zdotx = [&](const ZetaVector& z) { return cplx(dot(z.re, x), dot(z.im, x)); };
        const cplx lhs = std::exp(zdotx(pair.zeta1)) * std::exp(zdotx(pair.zeta2));
        const cplx rhs = std::exp(cplx(0.0, -dot(k, x)));
        worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("rotation to e_n: identity, axis, random orthogonality") {
    MatN id = rotation_to_en(VecN{0.0, 0.0, 2.5});
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(std::abs(id.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -
                           (i == j ? 1.0 : 0.0)) < 1e-14);

    MatN t1 = rotation_to_en(VecN{3.0, 0.0, 0.0});
    VecN mapped = t1.apply(VecN::axis(3, 2, 1.0));
    CHECK(mapped[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(t1.det() == doctest::Approx(1.0).epsilon(1e-12));

    Rng rng(31);
    for (int t = 0; t < 25; ++t) {
        VecN v(3);
        for (int a = 0; a < 3; ++a) v[a] = rng.gaussian();
        if (norm(v) < 1e-3) continue;
        MatN T = rotation_to_en(v);
        MatN gram = T.transpose().mul(T);
        double worst = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                worst = std::max(worst, std::abs(gram.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -
                                                 (i == j ? 1.0 : 0.0)));
        CHECK(worst < 1e-12);
        CHECK(T.det() == doctest::Approx(1.0).epsilon(1e-12));
        VecN image = T.apply(VecN::axis(3, 2, 1.0));
        VecN unit = normalized(v);
        double dir_err = 0.0;
        for (int a = 0; a < 3; ++a) dir_err = std::max(dir_err, std::abs(image[a] - unit[a]));
        CHECK(dir_err < 1e-12);
    }
    CHECK_THROWS_AS((void)rotation_to_en(VecN{0.0, 0.0, 0.0}), parameter_error);
}

TEST_CASE("zeta-geometry pullback: m at the rotated-translated frequency") {
    // m(T^t (eta_vec - Im zeta))^2 = M^{-1}( | |eta|^2 - 2 Im zeta . eta |^2
    //                              + |Re zeta . eta|^2 ) + M tau^2, exactly.
    const double tau = 24.0;
    const CarlemanParams p(tau, 4.0, 1.0);
    ZetaPair pair = make_zeta_pair(VecN{kPi / 4.0, -kPi / 2.0, 0.0}, tau, 77);
    const ZetaVector& z = pair.zeta1;
    MatN T = rotation_to_en(z.re);
    MatN Tt = T.transpose();

    Rng rng(5);
    for (int t = 0; t < 200; ++t) {
        VecN eta(3);
        for (int a = 0; a < 3; ++a) eta[a] = rng.uniform(-2.0 * tau, 2.0 * tau);
        VecN xi = Tt.apply(eta - z.im);
        const double lhs = m_symbol_sq(norm_sq(xi), xi[2], p);
        const double w1 = norm_sq(eta) - 2.0 * dot(z.im, eta);
        const double w2 = dot(z.re, eta);
        const double rhs = (w1 * w1 + w2 * w2) / p.M + p.M * tau * tau;
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));

        // norm-equivalence envelope between the pullback weight and the X weight
        const double xw = x_weight(eta, z);
        CHECK(xw * xw <= 10.0 * p.M * lhs * (1.0 + 1e-12));
        CHECK(xw * xw >= lhs / p.M * (1.0 - 1e-12));
    }
}

TEST_CASE("faddeev apply: zero, diagonal mode, two-path round trips") {
    const GridSpec g(3, 16, 4.0, 1.0);
    ZetaPair pair = make_zeta_pair(VecN{kPi / 4.0, 0.0, 0.0}, 11.0, 3);
    const ZetaVector& z = pair.zeta1;

    Field zero = Field::physical(g);
    CHECK(max_abs(faddeev_apply(zero, z)) == 0.0);

    // single off-characteristic mode: coefficient divided by the symbol
    VecN xi0{2.0 * g.freq_step(), -3.0 * g.freq_step(), g.freq_step()};
    Field mode = plane_wave(g, xi0);
    Field inv = faddeev_apply(mode, z);
    int kidx[kMaxDim];
    for (int a = 0; a < 3; ++a) kidx[a] = g.index_of_freq(xi0[a]);
    const cplx s = faddeev_symbol(g, kidx, z);
    Field expect = (cplx(1.0, 0.0) / s) * mode;
    CHECK(rel_diff(inv, expect) < 1e-12);

    // operator then inverse, and inverse then operator, off the kernel
    Field f = kernel_free_random(g, z, 8);
    CHECK(rel_diff(faddeev_apply(apply_cgo_operator(f, z), z), f) < 1e-11);
    CHECK(rel_diff(apply_cgo_operator(faddeev_apply(f, z), z), f) < 1e-11);

    // a forcing with a mean hits the torus kernel mode
    Field with_mean = cgolab::testing::random_field(g, 9);
    for (auto& v : with_mean.values()) v += 1.0;
    CHECK_THROWS_AS((void)faddeev_apply(with_mean, z), numeric_error);
}

TEST_CASE("nudge tau improves or preserves the lattice min-symbol") {
    const GridSpec g(3, 16, 4.0, 1.0);
    VecN k{kPi / 4.0, 0.0, 0.0};
    const double tau = 20.0;
    const double nudged = nudge_tau(g, k, tau, 5);
    CHECK(std::abs(nudged - tau) <= 1e-3 * tau * (1.0 + 1e-12));
    ZetaPair before = make_zeta_pair(k, tau, 5);
    ZetaPair after = make_zeta_pair(k, nudged, 5);
    CHECK(std::min(min_symbol(g, after.zeta1), min_symbol(g, after.zeta2)) >=
          std::min(min_symbol(g, before.zeta1), min_symbol(g, before.zeta2)) * (1.0 - 1e-12));
}

TEST_CASE("solve_cgo: constant conductivity gives w = 0 in one iteration") {
    const GridSpec g(3, 16, 4.0, 1.0);
    ModelParams mp;
    mp.kind = ConductivityKind::constant;
    const ConductivityModel constant(g, mp);
    ZetaPair pair = make_zeta_pair(VecN{kPi / 4.0, 0.0, 0.0}, 20.0, 5);
    CgoSolution sol = solve_cgo(constant, pair.zeta1);
    CHECK(sol.converged);
    CHECK(sol.iterations == 1);
    CHECK(max_abs(sol.w) == 0.0);
}

TEST_CASE("solve_cgo: gaussian-log model converges and verifies weakly") {
    const GridSpec g(3, 32, 4.0, 1.0);
    const ConductivityModel m = gaussian_model(g);
    VecN k{kPi / 4.0, 0.0, 0.0};
    const double tau = nudge_tau(g, k, 20.0, 5);
    ZetaPair pair = make_zeta_pair(k, tau, 5);

    CgoOptions opts;
    opts.tol = 1e-8;
    CgoSolution sol = solve_cgo(m, pair.zeta1, opts);
    CHECK(sol.converged);
    CHECK(sol.iterations <= 50);
    CHECK(sol.residual_X <= 1e-8 * sol.qnorm_X);
    CHECK(sol.min_symbol > 0.0);
    CHECK(sol.wnorm_X > 0.0);

    // contraction evidence: successive steps decay once the iteration settles
    REQUIRE(sol.step_history.size() >= 3);
    for (std::size_t i = 2; i < sol.step_history.size(); ++i)
        CHECK(sol.step_history[i] < sol.step_history[i - 1]);

    VerifyReport rep = verify_solution(sol, m, 20, 1e-7, 99);
    CHECK(rep.pass);

    // negative control: a 2-step truncation leaves a visibly larger defect
    CgoOptions trunc = opts;
    trunc.max_iter = 2;
    CgoSolution rough = solve_cgo(m, pair.zeta1, trunc);
    CHECK_FALSE(rough.converged);
    VerifyReport rough_rep = verify_solution(rough, m, 20, 1e-7, 99);
    CHECK(rough_rep.max_defect > 10.0 * rep.max_defect);
}

TEST_CASE("corrector bump is supported away from the ball |x| <= R") {
    const GridSpec g(3, 16, 4.0, 1.0);
    Field psi = corrector_bump(g);
    const ModeIndexer ix(g);
    for (std::size_t i = 0; i < psi.size(); ++i) {
        int k[kMaxDim];
        ix.decompose(i, k);
        double r2 = 0.0;
        for (int a = 0; a < 3; ++a) r2 += g.coord(k[a]) * g.coord(k[a]);
        if (r2 <= (2.0 * g.R) * (2.0 * g.R)) CHECK(psi[i] == cplx(0.0, 0.0));
    }
    CHECK(integrate(psi).real() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_SUITE_END();
