#include <doctest.h>

#include <cmath>

#include "cgolab/field.hpp"
#include "cgolab/rng.hpp"
#include "cgolab/test_functions.hpp"

using namespace cgolab;

namespace {

Field random_field(const GridSpec& g, std::uint64_t seed) {
    Rng rng(seed);
    Field f = Field::physical(g);
    for (auto& v : f.values()) v = cplx(rng.gaussian(), rng.gaussian());
    return f;
}

double rel_diff(const Field& a, const Field& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += std::norm(a[i] - b[i]);
        den += std::norm(a[i]);
    }
    return den > 0 ? std::sqrt(num / den) : std::sqrt(num);
}

}  // namespace

TEST_SUITE_BEGIN("lattice");

TEST_CASE("grid invariants are enforced") {
    CHECK_THROWS_AS(GridSpec(1, 16, 4.0, 1.0), parameter_error);
    CHECK_THROWS_AS(GridSpec(3, 15, 4.0, 1.0), parameter_error);
    CHECK_THROWS_AS(GridSpec(3, 6, 4.0, 1.0), parameter_error);
    CHECK_THROWS_AS(GridSpec(3, 16, 3.0, 1.0), parameter_error);  // L < 4R
    const GridSpec g(3, 16, 4.0, 1.0);
    CHECK(g.total() == 4096);
    CHECK(g.spacing() == doctest::Approx(0.5));
    CHECK(g.freq(0) == 0.0);
    CHECK(g.freq(8) == doctest::Approx(-8.0 * kPi / 4.0));
    CHECK(g.freq(15) == doctest::Approx(-kPi / 4.0));
}

TEST_CASE("constant field transforms to a single mode at zero") {
    const GridSpec g(2, 16, 4.0, 1.0);
    Field one = fill_physical(g, [](const VecN&) { return cplx(1.0, 0.0); });
    Field hat = forward_transform(one);
    const ModeIndexer ix(g);
    // expected mass (2L)^n (2pi)^{-n/2} at xi = 0
    const double expect = std::pow(2.0 * g.L, g.n) * std::pow(2.0 * kPi, -0.5 * g.n);
    for (std::size_t i = 0; i < hat.size(); ++i) {
        int k[kMaxDim];
        ix.decompose(i, k);
        if (k[0] == 0 && k[1] == 0) {
            CHECK(std::abs(hat[i] - cplx(expect, 0.0)) < 1e-12 * expect);
        } else {
            CHECK(std::abs(hat[i]) < 1e-12 * expect);
        }
    }
}

TEST_CASE("pure lattice mode maps to a single coefficient") {
    const GridSpec g(3, 16, 4.0, 1.0);
    VecN xi0{2.0 * g.freq_step(), -3.0 * g.freq_step(), 5.0 * g.freq_step()};
    Field f = plane_wave(g, xi0);
    Field hat = forward_transform(f);
    const ModeIndexer ix(g);
    const double expect = std::pow(2.0 * g.L, g.n) * std::pow(2.0 * kPi, -0.5 * g.n);
    double off = 0.0;
    cplx at{};
    for (std::size_t i = 0; i < hat.size(); ++i) {
        int k[kMaxDim];
        ix.decompose(i, k);
        const bool is_target = g.signed_index(k[0]) == 2 && g.signed_index(k[1]) == -3 && g.signed_index(k[2]) == 5;
        if (is_target)
            at = hat[i];
        else
            off = std::max(off, std::abs(hat[i]));
    }
    CHECK(std::abs(at - cplx(expect, 0.0)) < 1e-11 * expect);
    CHECK(off < 1e-11 * expect);
}

TEST_CASE("round trip and Plancherel at 1e-12 on 100 random fields") {
    const GridSpec g(2, 32, 4.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        Field f = random_field(g, 1000 + static_cast<std::uint64_t>(trial));
        Field hat = forward_transform(f);
        Field back = inverse_transform(hat);
        CHECK(rel_diff(back, f) < 1e-12);
        const double np = norm_l2(f);
        const double ns = norm_l2(hat);
        CHECK(std::abs(np - ns) < 1e-12 * np);
    }
}

TEST_CASE("inverse transform is linear") {
    const GridSpec g(2, 16, 4.0, 1.0);
    Field a = forward_transform(random_field(g, 7));
    Field b = forward_transform(random_field(g, 8));
    const cplx ca(0.7, -0.3), cb(-1.2, 0.4);
    Field lhs = inverse_transform(ca * a + cb * b);
    Field rhs = ca * inverse_transform(a) + cb * inverse_transform(b);
    CHECK(rel_diff(lhs, rhs) < 1e-12);
}

TEST_CASE("representation mismatch is a usage error") {
    const GridSpec g(2, 16, 4.0, 1.0);
    Field p = Field::physical(g);
    Field s = Field::spectral(g);
    CHECK_THROWS_AS((void)forward_transform(s), usage_error);
    CHECK_THROWS_AS((void)inverse_transform(p), usage_error);
    CHECK_THROWS_AS((void)integrate(s), usage_error);
}

TEST_CASE("integrate: volume, orthogonality, refinement oracle") {
    const GridSpec g(3, 16, 4.0, 1.0);
    Field one = fill_physical(g, [](const VecN&) { return cplx(1.0, 0.0); });
    CHECK(std::abs(integrate(one) - cplx(512.0, 0.0)) < 1e-10);

    VecN xi0{g.freq_step(), 0.0, -2.0 * g.freq_step()};
    Field mode = plane_wave(g, xi0);
    CHECK(std::abs(integrate(mode)) < 1e-12 * 512.0);

    // grid-refinement oracle for a gaussian bump (well inside the torus)
    auto bump = [](const VecN& x) { return cplx(std::exp(-norm_sq(x) / 0.5), 0.0); };
    const GridSpec g1(2, 32, 4.0, 1.0);
    const GridSpec g2(2, 320, 4.0, 1.0);
    const cplx coarse = integrate(fill_physical(g1, bump));
    const cplx fine = integrate(fill_physical(g2, bump));
    CHECK(std::abs(coarse - fine) < 1e-10 * std::abs(fine));
}

TEST_CASE("Parseval links physical pairing and spectral inner product") {
    const GridSpec g(2, 32, 4.0, 1.0);
    Field f = random_field(g, 21);
    Field h = random_field(g, 22);
    const cplx lhs = inner(f, h);
    const cplx rhs = inner_spectral(forward_transform(f), forward_transform(h));
    CHECK(std::abs(lhs - rhs) < 1e-12 * std::abs(lhs));
    const cplx lhs2 = inner(h, f);
    CHECK(std::abs(lhs2 - std::conj(lhs)) < 1e-12 * std::abs(lhs));
}

TEST_CASE("test functions: support, determinism, kinds") {
    const GridSpec g(3, 32, 4.0, 1.0);

    BumpParams p;
    p.width = g.R / 4.0;
    p.shape = SupportShape::slab;
    Field u1 = make_test_function(g, BumpKind::gaussian_bump, p, 5);
    CHECK(support_violation(u1, SupportShape::slab, g.R) <= 1e-14);

    Field u2 = make_test_function(g, BumpKind::slab_bump, p, 5);
    CHECK(support_violation(u2, SupportShape::slab, g.R) <= 1e-14);

    BumpParams pb;
    pb.shape = SupportShape::ball;
    Field u3 = make_test_function(g, BumpKind::random_bandlimited, pb, 5);
    CHECK(support_violation(u3, SupportShape::ball, g.R) <= 1e-14);

    Field u3b = make_test_function(g, BumpKind::random_bandlimited, pb, 5);
    CHECK(rel_diff(u3, u3b) == 0.0);  // same seed, identical field

    BumpParams bad;
    bad.width = 4.0;  // gaussian too wide for the window to stay smooth? width only
    bad.support_radius = 10.0;  // support set larger than the grid R -> violation vs R scan
    // support_radius beyond L is fine geometrically; the violation check is
    // against the requested set, so instead check an off-center bump that
    // escapes the slab.
    bad = BumpParams{};
    bad.center = VecN::zero(g.n);
    bad.center[g.n - 1] = 3.0;  // pushes support outside |x_n| <= R
    CHECK_THROWS_AS((void)make_test_function(g, BumpKind::gaussian_bump, bad, 3), parameter_error);
}

TEST_SUITE_END();
