#pragma once

#include <cstdint>

#include "cgolab/field.hpp"
#include "cgolab/windows.hpp"

namespace cgolab {

enum class BumpKind { gaussian_bump, slab_bump, random_bandlimited };

enum class SupportShape { slab, ball };  // slab: |x_n| <= radius; ball: |x| <= radius

// Parameters for the smooth compactly-supported test functions that stand in
// for Schwartz functions. Every kind is cut off by a C-infinity window, so
// the samples vanish identically outside the support set and the 1e-14
// support scan is satisfied by construction.
struct BumpParams {
    VecN center;                 // defaults to the origin
    double width = 0.30;         // gaussian core scale
    double support_radius = 0;   // defaults to grid R
    SupportShape shape = SupportShape::ball;
    double plateau_frac = 0.25;  // slab_bump: plateau as a fraction of the support radius
    double spectral_frac = 0.12; // random_bandlimited: envelope scale as a fraction of the Nyquist
    double beta = 0.0;           // Kaiser beta; 0 = derive from the grid's time-bandwidth budget
    bool normalize = true;       // scale so max |u| = 1
};

// Relative magnitude of the field outside the support set (max over
// offending grid points divided by the peak).
double support_violation(const Field& u, SupportShape shape, double radius);

// Deterministic smooth test function; throws parameter_error if the
// numerically-supported region escapes the support set.
Field make_test_function(const GridSpec& g, BumpKind kind, const BumpParams& params, std::uint64_t seed);

inline Field make_test_function(const GridSpec& g, BumpKind kind, std::uint64_t seed) {
    return make_test_function(g, kind, BumpParams{}, seed);
}

// Mixed-kind sample stream used by the estimate suites: cycles through
// gaussian / slab / random bumps with randomized admissible parameters.
Field sample_bump(const GridSpec& g, SupportShape shape, double radius, std::uint64_t seed);

// Bump modulated by a lattice plane wave: the spectrum moves to the carrier
// while the support stays put. The multiplier estimates are tight only for
// spectra near the characteristic shell |xi| ~ tau, which plain bumps on a
// desk-scale lattice never reach.
Field modulated_bump(const GridSpec& g, const VecN& carrier, SupportShape shape, double radius,
                     std::uint64_t seed);

// Lattice carrier at distance ~M from the sphere |xi| = tau with xi_n ~ M,
// where the symbol's derivative bounds saturate.
VecN shell_carrier(const GridSpec& g, double tau, double M, std::uint64_t seed);

}  // namespace cgolab
