#pragma once

#include <complex>
#include <vector>

#include "cgolab/grid.hpp"
#include "cgolab/kernels.hpp"

namespace cgolab {

using cplx = std::complex<double>;

enum class Rep { physical, spectral };

//==============================================================================
// Field
// Complex-valued function on the grid, tagged physical or spectral.
// The transform pair uses the symmetric continuum normalization
//   uhat(xi) = (2pi)^{-n/2} * h^n * sum_j u(x_j) e^{-i xi . x_j}
// so that the discrete Plancherel identity
//   h^n sum |u|^2 = (pi/L)^n sum |uhat|^2
// holds exactly and norm formulas transcribe without constant juggling.
//==============================================================================
class Field {
  public:
    Field(const GridSpec& g, Rep r) : grid_(g), rep_(r), v_(g.total(), cplx(0.0, 0.0)) {}

    static Field physical(const GridSpec& g) { return Field(g, Rep::physical); }
    static Field spectral(const GridSpec& g) { return Field(g, Rep::spectral); }

    const GridSpec& grid() const { return grid_; }
    Rep rep() const { return rep_; }
    std::size_t size() const { return v_.size(); }

    const std::vector<cplx>& values() const { return v_; }
    std::vector<cplx>& values() { return v_; }
    cplx operator[](std::size_t i) const { return v_[i]; }
    cplx& operator[](std::size_t i) { return v_[i]; }

    void require(Rep r, const char* who) const {
        if (rep_ != r)
            throw usage_error(std::string(who) + ": field is in the " +
                              (rep_ == Rep::physical ? "physical" : "spectral") + " representation");
    }

  private:
    GridSpec grid_;
    Rep rep_;
    std::vector<cplx> v_;
};

// --- transforms (FFTW-backed; see fft.cpp) ----------------------------------
Field forward_transform(const Field& f);
Field inverse_transform(const Field& f);

// --- quadrature and inner products -------------------------------------------
// Cell-volume-weighted Riemann sum of a physical field.
cplx integrate(const Field& f);

// Bilinear pairing: integral of u*v (no conjugation), physical representation.
cplx pairing(const Field& u, const Field& v);

// Hermitian inner product: integral of u*conj(v), physical representation.
cplx inner(const Field& u, const Field& v);

// L2 norm in either representation (Plancherel makes them agree).
double norm_l2(const Field& f);

// Spectral-side hermitian inner product: sum uhat conj(vhat) * spectral cell.
cplx inner_spectral(const Field& u, const Field& v);

// --- pointwise algebra --------------------------------------------------------
Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(cplx s, const Field& a);
Field operator*(double s, const Field& a);
Field pointwise_mul(const Field& a, const Field& b);
Field conjugate(const Field& a);
void add_scaled(Field& acc, cplx s, const Field& a);  // acc += s*a

double max_abs(const Field& f);

void check_same_grid(const Field& a, const Field& b, const char* who);

// Fill a physical field from fn(x), x the torus point.
template <class Fn>
Field fill_physical(const GridSpec& g, Fn&& fn) {
    Field f = Field::physical(g);
    const ModeIndexer ix(g);
    auto* out = f.values().data();
    kernels::for_each(g.total(), [&](std::size_t i) {
        int k[kMaxDim];
        ix.decompose(i, k);
        VecN x(g.n);
        for (int a = 0; a < g.n; ++a) x[a] = g.coord(k[a]);
        out[i] = fn(x);
    });
    return f;
}

// Fill a spectral field from fn(xi), xi the lattice frequency.
template <class Fn>
Field fill_spectral(const GridSpec& g, Fn&& fn) {
    Field f = Field::spectral(g);
    const ModeIndexer ix(g);
    auto* out = f.values().data();
    kernels::for_each(g.total(), [&](std::size_t i) {
        int k[kMaxDim];
        ix.decompose(i, k);
        VecN xi(g.n);
        for (int a = 0; a < g.n; ++a) xi[a] = g.freq(k[a]);
        out[i] = fn(xi);
    });
    return f;
}

// Plane wave e^{i xi0 . x} for a lattice frequency xi0.
Field plane_wave(const GridSpec& g, const VecN& xi0);

}  // namespace cgolab
