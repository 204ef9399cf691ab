#include "cgolab/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cgolab::kernels {

namespace {
ExecMode g_mode = ExecMode::parallel;
}

ExecMode mode() { return g_mode; }
void set_mode(ExecMode m) { g_mode = m; }

int worker_count() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void set_worker_count(int workers) {
#ifdef _OPENMP
    if (workers > 0) omp_set_num_threads(workers);
#else
    (void)workers;
#endif
}

}  // namespace cgolab::kernels
