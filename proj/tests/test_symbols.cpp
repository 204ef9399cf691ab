#include <doctest.h>

#include <cmath>

#include "cgolab/symbols.hpp"
#include "cgolab/test_functions.hpp"
#include "helpers.hpp"

using namespace cgolab;
using cgolab::testing::random_field;
using cgolab::testing::rel_diff;

namespace {

// Direct long-double evaluation of m^{-1/2}, independent of the jet path.
long double m_inv_sqrt_ld(long double xi_prime_sq, long double xi_n, const CarlemanParams& p) {
    const long double a = xi_prime_sq + xi_n * xi_n - (long double)p.tau * p.tau;
    const long double m2 =
        (a * a + (long double)p.tau * p.tau * xi_n * xi_n) / p.M + (long double)p.M * p.tau * p.tau;
    return powl(m2, -0.25L);
}

}  // namespace

TEST_SUITE_BEGIN("symbols");

TEST_CASE("m symbol at frozen points") {
    const CarlemanParams p(10.0, 4.0, 1.0);
    // xi = 0: sqrt(tau^4/M + M tau^2) = sqrt(2900)
    CHECK(m_symbol(VecN{0.0, 0.0, 0.0}, p) == doctest::Approx(std::sqrt(2900.0)).epsilon(1e-13));
    // characteristic-sphere point with xi_n = 0: only M tau^2 survives
    CHECK(m_symbol(VecN{10.0, 0.0, 0.0}, p) == doctest::Approx(20.0).epsilon(1e-13));
    CHECK(m_symbol(VecN{0.0, 0.0, 10.0}, p) == doctest::Approx(std::sqrt(2900.0)).epsilon(1e-13));
}

TEST_CASE("m symbol lower bound sqrt(M) tau on a wide sweep") {
    const CarlemanParams p(64.0, 4.0, 1.0);
    const double floor = std::sqrt(p.M) * p.tau;
    for (double xip = 0.0; xip <= 4.0 * p.tau; xip += 3.7)
        for (double xin = -4.0 * p.tau; xin <= 4.0 * p.tau; xin += 3.3)
            CHECK(m_symbol(xip * xip + xin * xin, xin, p) >= floor * (1.0 - 1e-14));
}

TEST_CASE("p symbol at frozen points") {
    const VecN re{0.0, 5.0, 0.0};
    const VecN im{-0.5, 0.0, std::sqrt(24.75)};
    const ZetaVector z(re, im, 5.0);
    CHECK(std::abs(p_symbol(VecN{0.0, 0.0, 0.0}, z)) < 1e-14);
    // antipode of the characteristic sphere
    VecN two_im = 2.0 * im;
    CHECK(std::abs(p_symbol(two_im, z)) < 1e-9);
    CHECK(std::abs(p_symbol(VecN{1.0, 0.0, 0.0}, z) - cplx(2.0, 0.0)) < 1e-12);
}

TEST_CASE("zeta vector invariants rejected when violated") {
    CHECK_THROWS_AS(ZetaVector(VecN{1.0, 0.0}, VecN{1.0, 0.0}, 1.0), parameter_error);
    CHECK_THROWS_AS(ZetaVector(VecN{2.0, 0.0}, VecN{0.0, 1.0}, 1.0), parameter_error);
}

TEST_CASE("norm_Y: single mode, s = 0, and the L2 bridge") {
    const GridSpec g(2, 32, 4.0, 1.0);
    const CarlemanParams p(12.0, 4.0, 1.0);

    VecN xi0{2.0 * g.freq_step(), -5.0 * g.freq_step()};
    Field mode = plane_wave(g, xi0);
    const double coeff = std::pow(2.0 * g.L, g.n) * std::pow(2.0 * kPi, -0.5 * g.n);
    const double cell_half = std::pow(g.spectral_cell(), 0.5);
    for (double s : {0.5, -0.5, 1.0}) {
        const double expect = coeff * std::pow(m_symbol(xi0, p), s) * cell_half;
        CHECK(norm_Y(mode, s, p) == doctest::Approx(expect).epsilon(1e-11));
    }

    Field f = random_field(g, 3);
    CHECK(norm_Y(f, 0.0, p) == doctest::Approx(norm_l2(f)).epsilon(1e-12));

    // |u|_{L2} <= M^{-1/4} tau^{-1/2} |u|_{Y^{1/2}} and the dual bridge
    for (int t = 0; t < 50; ++t) {
        Field u = random_field(g, 100 + static_cast<std::uint64_t>(t));
        const double l2 = norm_l2(u);
        const double bridge = std::pow(p.M, -0.25) / std::sqrt(p.tau);
        CHECK(l2 <= bridge * norm_Y(u, 0.5, p) * (1.0 + 1e-12));
        CHECK(norm_Y(u, -0.5, p) <= bridge * l2 * (1.0 + 1e-12));
    }
}

TEST_CASE("norm_X: single mode, b = 0, Cauchy-Schwarz between b = +-1/2") {
    const GridSpec g(2, 32, 4.0, 1.0);
    const ZetaVector z(VecN{7.0, 0.0}, VecN{0.0, 7.0}, 7.0);

    VecN xi0{3.0 * g.freq_step(), 2.0 * g.freq_step()};
    Field mode = plane_wave(g, xi0);
    const double coeff = std::pow(2.0 * g.L, g.n) * std::pow(2.0 * kPi, -0.5 * g.n);
    const double expect = coeff * std::sqrt(x_weight(xi0, z)) * std::pow(g.spectral_cell(), 0.5);
    CHECK(norm_X(mode, 0.5, z) == doctest::Approx(expect).epsilon(1e-11));

    Field f = random_field(g, 4);
    CHECK(norm_X(f, 0.0, z) == doctest::Approx(norm_l2(f)).epsilon(1e-12));

    for (int t = 0; t < 20; ++t) {
        Field u = random_field(g, 500 + static_cast<std::uint64_t>(t));
        const double l2 = norm_l2(u);
        CHECK(norm_X(u, 0.5, z) * norm_X(u, -0.5, z) >= l2 * l2 * (1.0 - 1e-12));
    }

    // weight positivity: sqrt(2) tau + |p| >= sqrt(2) tau
    const ModeIndexer ix(g);
    for (std::size_t i = 0; i < g.total(); i += 7) {
        int k[kMaxDim];
        ix.decompose(i, k);
        VecN xi(g.n);
        for (int a = 0; a < g.n; ++a) xi[a] = g.freq(k[a]);
        CHECK(x_weight(xi, z) >= std::sqrt(2.0) * z.tau);
    }
}

TEST_CASE("apply_multiplier: identity, composition round trip, diagonal algebra") {
    const GridSpec g(2, 32, 4.0, 1.0);
    const CarlemanParams p(16.0, 4.0, 1.0);
    Field u = random_field(g, 11);

    Field same = apply_multiplier(u, [](const VecN&) { return cplx(1.0, 0.0); });
    CHECK(rel_diff(same, u) < 1e-15);

    Field round = apply_m_power(apply_m_power(u, 0.5, p), -0.5, p);
    CHECK(rel_diff(round, u) < 1e-12);

    CHECK(norm_Y(apply_m_power(u, -0.5, p), 0.5, p) == doctest::Approx(norm_l2(u)).epsilon(1e-12));

    CHECK_THROWS_AS((void)apply_multiplier(u, [](const VecN& xi) {
        return cplx(1.0 / (xi[0] * xi[0] + xi[1] * xi[1]), 0.0);  // infinite at 0
    }), numeric_error);
}

TEST_CASE("gradient bridge and d_n bridge") {
    const GridSpec g(2, 32, 4.0, 1.0);
    const CarlemanParams p(24.0, 4.0, 1.0);
    for (int t = 0; t < 100; ++t) {
        Field u = random_field(g, 900 + static_cast<std::uint64_t>(t));
        double grad_sq = 0.0;
        for (int a = 0; a < g.n; ++a) {
            const double d = norm_l2(derivative(u, a));
            grad_sq += d * d;
        }
        const double y_half = norm_Y(u, 0.5, p);
        const double cap = 4.0 * (std::sqrt(p.tau) * std::pow(p.M, -0.25) + std::pow(p.M, 0.25));
        CHECK(std::sqrt(grad_sq) <= cap * y_half);

        const double lhs = norm_l2(derivative(apply_m_power(u, -0.5, p), g.n - 1));
        CHECK(lhs <= (std::sqrt(p.M) / p.tau) * y_half * (1.0 + 1e-12));
    }
}

TEST_CASE("conjugated laplacian: zero input, A+B split") {
    const GridSpec g(2, 32, 4.0, 1.0);
    const CarlemanParams p(16.0, 4.0, 1.0);

    Field zero = Field::physical(g);
    CHECK(max_abs(conjugated_laplacian(zero, p)) == 0.0);
    CHECK(max_abs(A_op(zero, p)) == 0.0);
    CHECK(max_abs(B_op(zero, p)) == 0.0);
    CHECK(max_abs(commutator_AB(zero, p)) == 0.0);

    Field u = sample_bump(g, SupportShape::slab, g.R, 42);
    Field conj = conjugated_laplacian(u, p);
    Field split = A_op(u, p) + B_op(u, p);
    CHECK(rel_diff(split, conj) < 1e-13);
}

TEST_CASE("conjugated laplacian matches the explicit-exponential oracle at moderate tau") {
    const GridSpec g(2, 96, 4.0, 1.0);
    const CarlemanParams p(8.0, 2.0, 1.0);
    BumpParams bp;
    bp.width = 0.30;  // narrow: keeps the e^{+-phi} dynamic range from amplifying roundoff
    bp.shape = SupportShape::ball;
    Field u = make_test_function(g, BumpKind::gaussian_bump, bp, 5);

    // oracle: materialize e^{-phi} u, apply -Delta spectrally, multiply e^{+phi}
    const int last = g.n - 1;
    auto phi = [&](double xn) { return p.tau * xn + 0.5 * p.M * xn * xn; };
    Field damped = Field::physical(g);
    {
        const ModeIndexer ix(g);
        for (std::size_t i = 0; i < u.size(); ++i) {
            int k[kMaxDim];
            ix.decompose(i, k);
            damped[i] = u[i] * std::exp(-phi(g.coord(k[last])));
        }
    }
    Field lap = laplacian(damped);
    Field oracle = Field::physical(g);
    {
        const ModeIndexer ix(g);
        for (std::size_t i = 0; i < u.size(); ++i) {
            int k[kMaxDim];
            ix.decompose(i, k);
            oracle[i] = -lap[i] * std::exp(phi(g.coord(k[last])));
        }
    }

    Field conj = conjugated_laplacian(u, p);
    const double scale = max_abs(conj);
    const double peak = max_abs(u);
    double worst = 0.0;
    for (std::size_t i = 0; i < u.size(); i += 3) {  // coarse subsample
        if (std::abs(u[i]) < 1e-2 * peak) continue;
        worst = std::max(worst, std::abs(conj[i] - oracle[i]) / scale);
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("energy identity and commutator positivity") {
    const GridSpec g(2, 64, 4.0, 1.0);
    const CarlemanParams p(16.0, 4.0, 1.0);
    for (std::uint64_t s = 0; s < 5; ++s) {
        Field u = sample_bump(g, SupportShape::slab, g.R, 77 + s);
        Field conj = conjugated_laplacian(u, p);
        Field au = A_op(u, p);
        Field bu = B_op(u, p);
        const cplx comm_pair = inner(commutator_AB(u, p), u);

        // commutator positivity and the two-sided identity for <[A,B]u, u>
        CHECK(comm_pair.real() >= 0.0);
        CHECK(std::abs(comm_pair.imag()) < 1e-10 * std::abs(comm_pair.real()));
        Field dnu = derivative(u, g.n - 1);
        Field wu = pointwise_mul(weight_field(g, p), u);
        const double expect = 4.0 * p.M * (std::pow(norm_l2(dnu), 2) + std::pow(norm_l2(wu), 2));
        CHECK(comm_pair.real() == doctest::Approx(expect).epsilon(1e-10));

        // |conj u|^2 = |Au|^2 + |Bu|^2 + <[A,B]u, u>
        const double lhs = std::pow(norm_l2(conj), 2);
        const double rhs = std::pow(norm_l2(au), 2) + std::pow(norm_l2(bu), 2) + comm_pair.real();
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
}

TEST_CASE("support precondition for the conjugated operator") {
    const GridSpec g(2, 32, 8.0, 1.0);  // L = 8 so |x_n| <= 4R is a strict subset
    const CarlemanParams p(16.0, 4.0, 1.0);
    Field wide = fill_physical(g, [&](const VecN& x) {
        return cplx(std::cos(kPi * x[1] / g.L), 0.0);  // spans the whole period
    });
    CHECK_THROWS_AS((void)conjugated_laplacian(wide, p), parameter_error);
}

TEST_CASE("jets reproduce the closed-form first and second derivative identities") {
    const CarlemanParams p(50.0, 2.0, 1.0);
    const double xips = 3.0;
    const double xin = 7.5;
    auto jet = m_inverse_sqrt_jet(xips, xin, p, 2);

    const double xisq = xips + xin * xin;
    const double m2 = m_symbol_sq(xisq, xin, p);
    const double f = std::pow(m2, -0.25);
    const double dm2 = (4.0 * (xisq - p.tau * p.tau) * xin + 2.0 * p.tau * p.tau * xin) / p.M;
    const double d2m2 = (8.0 * xin * xin + 4.0 * (xisq - p.tau * p.tau) + 2.0 * p.tau * p.tau) / p.M;

    CHECK(jet[0] == doctest::Approx(f).epsilon(1e-14));
    CHECK(jet[1] == doctest::Approx(-0.25 * f * dm2 / m2).epsilon(1e-12));
    const double second = (5.0 / 16.0) * f * dm2 * dm2 / (m2 * m2) - 0.25 * f * d2m2 / m2;
    CHECK(jet[2] == doctest::Approx(second).epsilon(1e-12));
}

TEST_CASE("order-4 jet matches extended-precision central differences") {
    const CarlemanParams p(100.0, 4.0, 1.0);
    const double xin = 7.0;
    auto jet = m_inverse_sqrt_jet(0.0, xin, p, 4);

    const long double h = 0.01L;
    auto f = [&](long double x) { return m_inv_sqrt_ld(0.0L, x, p); };
    const long double fd4 =
        (f(xin - 2 * h) - 4 * f(xin - h) + 6 * f(xin) - 4 * f(xin + h) + f(xin + 2 * h)) / (h * h * h * h);
    CHECK(jet[4] == doctest::Approx(static_cast<double>(fd4)).epsilon(1e-4));
}

TEST_CASE("jet order limit enforced") {
    const CarlemanParams p(10.0, 2.0, 1.0);
    CHECK_THROWS_AS((void)m_inverse_sqrt_jet(0.0, 1.0, p, 17), parameter_error);
    CHECK_NOTHROW((void)m_inverse_sqrt_jet(0.0, 1.0, p, 16));
}

TEST_CASE("regime gates are named in errors") {
    const CarlemanParams p(10.0, 4.0, 1.0);  // tau = 10 < 2MR = 8? no: 10 > 8, < 8MR = 32
    CHECK_NOTHROW(p.require_tau_gt_2MR());
    CHECK_THROWS_WITH_AS(p.require_tau_gt_8MR(), doctest::Contains("tau > 8MR"), parameter_error);
}

TEST_SUITE_END();
