//==============================================================================
// fft.cpp
// FFTW3 backing for the forward/inverse transforms. Plans are cached per
// (n, N) and created with FFTW_ESTIMATE | FFTW_UNALIGNED, so execution is
// deterministic and the new-array execute interface is safe from concurrent
// callers. The half-period grid offset appears as the (-1)^{sum k_i} phase.
//==============================================================================

#include <fftw3.h>

#include <map>
#include <mutex>

#include "cgolab/field.hpp"

namespace cgolab {

namespace {

struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

class PlanCache {
  public:
    static PlanCache& instance() {
        static PlanCache c;
        return c;
    }

    PlanPair get(int n, int N) {
        std::lock_guard<std::mutex> lock(mu_);
        const auto key = std::make_pair(n, N);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;

        std::size_t total = 1;
        for (int i = 0; i < n; ++i) total *= static_cast<std::size_t>(N);
        std::vector<std::complex<double>> a(total), b(total);
        int dims[kMaxDim];
        for (int i = 0; i < n; ++i) dims[i] = N;

        PlanPair p;
        p.fwd = fftw_plan_dft(n, dims, reinterpret_cast<fftw_complex*>(a.data()),
                              reinterpret_cast<fftw_complex*>(b.data()), FFTW_FORWARD,
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
        p.bwd = fftw_plan_dft(n, dims, reinterpret_cast<fftw_complex*>(a.data()),
                              reinterpret_cast<fftw_complex*>(b.data()), FFTW_BACKWARD,
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
        cache_[key] = p;
        return p;
    }

  private:
    std::mutex mu_;
    std::map<std::pair<int, int>, PlanPair> cache_;
};

// (-1)^{sum of axis indices}; N even makes this equal to (-1)^{sum z_i} for
// the signed lattice integers z_i.
void apply_checkerboard(const GridSpec& g, std::vector<cplx>& v, double scale) {
    const ModeIndexer ix(g);
    auto* d = v.data();
    kernels::for_each(v.size(), [&](std::size_t i) {
        int k[kMaxDim];
        ix.decompose(i, k);
        int s = 0;
        for (int a = 0; a < g.n; ++a) s += k[a];
        d[i] *= (s & 1) ? -scale : scale;
    });
}

}  // namespace

Field forward_transform(const Field& f) {
    f.require(Rep::physical, "forward_transform");
    const GridSpec& g = f.grid();
    PlanPair plans = PlanCache::instance().get(g.n, g.N);

    std::vector<cplx> in = f.values();
    Field out(g, Rep::spectral);
    fftw_execute_dft(plans.fwd, reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.values().data()));

    const double scale = std::pow(2.0 * kPi, -0.5 * g.n) * g.cell_volume();
    apply_checkerboard(g, out.values(), scale);
    return out;
}

Field inverse_transform(const Field& f) {
    f.require(Rep::spectral, "inverse_transform");
    const GridSpec& g = f.grid();
    PlanPair plans = PlanCache::instance().get(g.n, g.N);

    std::vector<cplx> in = f.values();
    apply_checkerboard(g, in, 1.0);
    Field out(g, Rep::physical);
    fftw_execute_dft(plans.bwd, reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.values().data()));

    const double scale = std::pow(2.0 * kPi, -0.5 * g.n) * g.spectral_cell();
    auto* d = out.values().data();
    kernels::for_each(out.size(), [&](std::size_t i) { d[i] *= scale; });
    return out;
}

}  // namespace cgolab
