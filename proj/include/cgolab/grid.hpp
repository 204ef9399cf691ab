#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>

#include "cgolab/errors.hpp"
#include "cgolab/vecn.hpp"

namespace cgolab {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

//==============================================================================
// GridSpec
// Periodic computational domain [-L, L)^n with N points per axis.
//   grid points      x_i = -L + i * (2L/N)
//   frequency lattice xi = (pi/L) * z, z integer in [-N/2, N/2)
// The distinguished coordinate x_n of the Carleman weight is the LAST axis
// (axis n-1), which is contiguous in memory.
//==============================================================================
struct GridSpec {
    int n = 3;       // spatial dimension (>= 2)
    int N = 64;      // points per axis (even, >= 8)
    double L = 4.0;  // half-period
    double R = 1.0;  // support radius

    GridSpec() = default;
    GridSpec(int n_, int N_, double L_, double R_) : n(n_), N(N_), L(L_), R(R_) {
        if (n < 2 || n > kMaxDim) throw parameter_error("GridSpec: n must be in [2, 4]");
        if (N < 8 || N % 2 != 0) throw parameter_error("GridSpec: N must be even and >= 8");
        if (!(R > 0.0)) throw parameter_error("GridSpec: R must be positive");
        if (!(L >= 4.0 * R)) throw parameter_error("GridSpec: L >= 4R required (cutoff must fit in one period)");
    }

    std::size_t total() const {
        std::size_t t = 1;
        for (int i = 0; i < n; ++i) t *= static_cast<std::size_t>(N);
        return t;
    }

    double spacing() const { return 2.0 * L / N; }
    double cell_volume() const { return std::pow(spacing(), n); }
    double freq_step() const { return kPi / L; }
    double spectral_cell() const { return std::pow(freq_step(), n); }

    // Signed lattice integer for axis index k in [0, N).
    int signed_index(int k) const { return k < N / 2 ? k : k - N; }
    bool is_nyquist(int k) const { return k == N / 2; }

    double coord(int i) const { return -L + i * spacing(); }
    double freq(int k) const { return freq_step() * signed_index(k); }

    // Frequency used by first-derivative multipliers: the Nyquist plane is
    // zeroed so that discrete integration by parts is exact.
    double freq_deriv(int k) const { return is_nyquist(k) ? 0.0 : freq(k); }

    // Axis index of a lattice frequency component; throws if off-lattice.
    int index_of_freq(double xi) const {
        const double z = xi / freq_step();
        const double zr = std::round(z);
        if (std::abs(z - zr) > 1e-9) throw parameter_error("frequency component off the lattice");
        int zi = static_cast<int>(zr);
        if (zi < -N / 2 || zi >= N / 2) throw parameter_error("frequency component outside the lattice range");
        return zi < 0 ? zi + N : zi;
    }

    bool operator==(const GridSpec& o) const { return n == o.n && N == o.N && L == o.L && R == o.R; }
    bool operator!=(const GridSpec& o) const { return !(*this == o); }
};

// Row-major multi-index helper; axis n-1 is contiguous.
struct ModeIndexer {
    int n = 0;
    int N = 0;
    std::array<std::size_t, kMaxDim> stride{};

    explicit ModeIndexer(const GridSpec& g) : n(g.n), N(g.N) {
        std::size_t s = 1;
        for (int a = n - 1; a >= 0; --a) {
            stride[static_cast<std::size_t>(a)] = s;
            s *= static_cast<std::size_t>(N);
        }
    }

    void decompose(std::size_t flat, int* k) const {
        for (int a = 0; a < n; ++a) {
            k[a] = static_cast<int>(flat / stride[static_cast<std::size_t>(a)]);
            flat %= stride[static_cast<std::size_t>(a)];
        }
    }
};

}  // namespace cgolab
