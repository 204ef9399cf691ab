//==============================================================================
// bench
// Times the OpenMP-parallel kernels against their serial reference on the
// hot loops (norm reductions, multiplier application, symbol sweeps) and
// checks that both paths produce identical bits.
//==============================================================================

#include <chrono>
#include <cstdio>

#include "cgolab/estimates.hpp"
#include "cgolab/test_functions.hpp"

using namespace cgolab;
namespace k = cgolab::kernels;

namespace {

double wall_ms() {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

template <class Fn>
double time_best_of(int reps, Fn&& fn) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const double t0 = wall_ms();
        fn();
        best = std::min(best, wall_ms() - t0);
    }
    return best;
}

}  // namespace

int main() {
    const GridSpec g(3, 64, 4.0, 1.0);
    const CarlemanParams p(64.0, 4.0, 1.0);
    Field u = sample_bump(g, SupportShape::slab, g.R, 1);
    Field uhat = forward_transform(u);

    std::printf("%-28s %12s %12s %9s %8s\n", "kernel", "serial [ms]", "parallel [ms]", "speedup", "bitwise");
    std::printf("%-28s %12s %12s %9s %8s\n", "------", "-----------", "-------------", "-------", "-------");

    auto bench = [&](const char* name, auto&& run) {
        k::set_mode(k::ExecMode::serial);
        volatile double sink_s = 0.0;
        const double ts = time_best_of(3, [&] { sink_s = run(); });
        const double vs = sink_s;

        k::set_mode(k::ExecMode::parallel);
        volatile double sink_p = 0.0;
        const double tp = time_best_of(3, [&] { sink_p = run(); });
        const double vp = sink_p;

        std::printf("%-28s %12.2f %12.2f %8.2fx %8s\n", name, ts, tp, ts / tp, vs == vp ? "yes" : "NO");
    };

    bench("norm_Y (s = 1/2)", [&] { return norm_Y(uhat, 0.5, p); });

    ZetaVector z(VecN{64.0, 0.0, 0.0}, VecN{0.0, 64.0, 0.0}, 64.0);
    bench("norm_X (b = -1/2)", [&] { return norm_X(uhat, -0.5, z); });

    bench("apply m^{-1/2} + norm", [&] { return norm_l2(apply_m_power(uhat, -0.5, p)); });

    bench("conjugated laplacian", [&] { return norm_l2(conjugated_laplacian(u, p)); });

    bench("quotient sweep (~2e6)", [&] {
        QuotientSweep sweep;
        sweep.radial_count = 96;
        sweep.axis_count = 96;
        return check_quotient_bound(p, sweep, 1e300).max_ratio;
    });

    bench("derivative L1 quadrature", [&] {
        return derivative_l1_value(8, CarlemanParams(1024.0, 4.0, 1.0));
    });

    k::set_mode(k::ExecMode::parallel);
    return 0;
}
