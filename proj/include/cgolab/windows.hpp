#pragma once

#include <cmath>

#include "cgolab/field.hpp"

namespace cgolab {

// Degree-7 polynomial smoothstep, C^3 at the knots: 0 at t<=0, 1 at t>=1.
inline double smoothstep7(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double t4 = t * t * t * t;
    return t4 * (35.0 + t * (-84.0 + t * (70.0 - 20.0 * t)));
}

//==============================================================================
// Kaiser-type windows
// Compactly supported profiles with near-optimal spectral concentration: the
// samples vanish identically outside |r| >= T while the lattice spectrum
// stays at the e^{-beta} level. beta is capped by the time-bandwidth budget
// T * xi_max of the grid in use.
//==============================================================================

// I0-based window, exactly zero for r >= T. C^0 at the edge (jump ~ 1/I0(beta)).
struct KaiserWindow {
    double T = 1.0;
    double beta = 18.0;

    double value(double r) const {
        const double t = std::abs(r) / T;
        if (t >= 1.0) return 0.0;
        const double s = std::sqrt(1.0 - t * t);
        return std::cyl_bessel_i(0.0, beta * s) / std::cyl_bessel_i(0.0, beta);
    }
    double deriv(double r) const {
        const double t = std::abs(r) / T;
        if (t >= 1.0 || t == 0.0) return 0.0;
        const double s = std::sqrt(1.0 - t * t);
        const double d = -std::cyl_bessel_i(1.0, beta * s) * beta * t / (T * s * std::cyl_bessel_i(0.0, beta));
        return r > 0.0 ? d : -d;
    }
};

// Kaiser window with the first two series terms removed, making the edge C^1
// (value and first derivative vanish at r = T). Used for conductivity models,
// where a derivative kink would show in the gradient oracle.
struct KaiserWindowC1 {
    double T = 1.0;
    double beta = 22.0;

    double norm() const { return std::cyl_bessel_i(0.0, beta) - 1.0 - 0.25 * beta * beta; }

    double value(double r) const {
        const double t = std::abs(r) / T;
        if (t >= 1.0) return 0.0;
        const double x = beta * std::sqrt(1.0 - t * t);
        return (std::cyl_bessel_i(0.0, x) - 1.0 - 0.25 * x * x) / norm();
    }
    double deriv(double r) const {
        const double t = std::abs(r) / T;
        if (t >= 1.0 || t == 0.0) return 0.0;
        const double s = std::sqrt(1.0 - t * t);
        const double x = beta * s;
        const double dI = std::cyl_bessel_i(1.0, x) - 0.5 * x;  // d/dx of the series remainder
        const double d = -dI * beta * t / (T * s * norm());
        return r > 0.0 ? d : -d;
    }
};

// Plateau with C^1 Kaiser shoulders: 1 for |t| <= a, 0 for |t| >= b.
struct PlateauWindow {
    double a = 0.5;
    double b = 1.0;
    double beta = 14.0;

    double value(double t) const {
        const double s = std::abs(t);
        if (s <= a) return 1.0;
        if (s >= b) return 0.0;
        KaiserWindowC1 w{1.0, beta};
        return w.value((s - a) / (b - a));
    }
};

// Largest admissible Kaiser beta for a window of half-width T on grid g,
// with a safety fraction of the time-bandwidth product.
inline double kaiser_beta_budget(const GridSpec& g, double T, double frac = 0.72) {
    const double ximax = g.freq_step() * (g.N / 2);
    return frac * T * ximax;
}

//==============================================================================
// CutoffProfile
// chi0 in C_0(R; [0,1]) with chi0(t) = 1 for |t| <= 2 and chi0(t) = 0 for
// |t| > 4, realized as a degree-7 smoothstep on the transition bands.
// chi(x_n) = chi0(x_n / R).
//==============================================================================
struct CutoffProfile {
    double R = 1.0;
    double plateau = 2.0;  // half-width of the plateau in units of R
    double support = 4.0;  // half-width of the support in units of R

    double chi0(double t) const {
        const double s = std::abs(t);
        if (s <= plateau) return 1.0;
        if (s >= support) return 0.0;
        return smoothstep7((support - s) / (support - plateau));
    }
    double chi(double xn) const { return chi0(xn / R); }

    // chi(x_n) as a physical field (function of the last axis only).
    Field as_field(const GridSpec& g) const {
        return fill_physical(g, [&](const VecN& x) { return cplx(chi(x[g.n - 1]), 0.0); });
    }
    Field one_minus_chi_field(const GridSpec& g) const {
        return fill_physical(g, [&](const VecN& x) { return cplx(1.0 - chi(x[g.n - 1]), 0.0); });
    }
};

}  // namespace cgolab
