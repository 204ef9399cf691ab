#include "cgolab/field.hpp"

#include <cmath>

namespace cgolab {

void check_same_grid(const Field& a, const Field& b, const char* who) {
    if (a.grid() != b.grid()) throw usage_error(std::string(who) + ": grid mismatch");
}

cplx integrate(const Field& f) {
    f.require(Rep::physical, "integrate");
    const auto* v = f.values().data();
    const cplx s = kernels::sum_cplx(f.size(), [&](std::size_t i) { return v[i]; });
    return s * f.grid().cell_volume();
}

cplx pairing(const Field& u, const Field& v) {
    check_same_grid(u, v, "pairing");
    u.require(Rep::physical, "pairing");
    v.require(Rep::physical, "pairing");
    const auto* a = u.values().data();
    const auto* b = v.values().data();
    const cplx s = kernels::sum_cplx(u.size(), [&](std::size_t i) { return a[i] * b[i]; });
    return s * u.grid().cell_volume();
}

cplx inner(const Field& u, const Field& v) {
    check_same_grid(u, v, "inner");
    u.require(Rep::physical, "inner");
    v.require(Rep::physical, "inner");
    const auto* a = u.values().data();
    const auto* b = v.values().data();
    const cplx s = kernels::sum_cplx(u.size(), [&](std::size_t i) { return a[i] * std::conj(b[i]); });
    return s * u.grid().cell_volume();
}

cplx inner_spectral(const Field& u, const Field& v) {
    check_same_grid(u, v, "inner_spectral");
    u.require(Rep::spectral, "inner_spectral");
    v.require(Rep::spectral, "inner_spectral");
    const auto* a = u.values().data();
    const auto* b = v.values().data();
    const cplx s = kernels::sum_cplx(u.size(), [&](std::size_t i) { return a[i] * std::conj(b[i]); });
    return s * u.grid().spectral_cell();
}

double norm_l2(const Field& f) {
    const auto* a = f.values().data();
    const double s = kernels::sum(f.size(), [&](std::size_t i) { return std::norm(a[i]); });
    const double cell = f.rep() == Rep::physical ? f.grid().cell_volume() : f.grid().spectral_cell();
    return std::sqrt(s * cell);
}

Field operator+(const Field& a, const Field& b) {
    check_same_grid(a, b, "operator+");
    if (a.rep() != b.rep()) throw usage_error("operator+: representation mismatch");
    Field r = a;
    auto* d = r.values().data();
    const auto* s = b.values().data();
    kernels::for_each(r.size(), [&](std::size_t i) { d[i] += s[i]; });
    return r;
}

Field operator-(const Field& a, const Field& b) {
    check_same_grid(a, b, "operator-");
    if (a.rep() != b.rep()) throw usage_error("operator-: representation mismatch");
    Field r = a;
    auto* d = r.values().data();
    const auto* s = b.values().data();
    kernels::for_each(r.size(), [&](std::size_t i) { d[i] -= s[i]; });
    return r;
}

Field operator*(cplx s, const Field& a) {
    Field r = a;
    auto* d = r.values().data();
    kernels::for_each(r.size(), [&](std::size_t i) { d[i] *= s; });
    return r;
}

Field operator*(double s, const Field& a) { return cplx(s, 0.0) * a; }

Field pointwise_mul(const Field& a, const Field& b) {
    check_same_grid(a, b, "pointwise_mul");
    a.require(Rep::physical, "pointwise_mul");
    b.require(Rep::physical, "pointwise_mul");
    Field r = a;
    auto* d = r.values().data();
    const auto* s = b.values().data();
    kernels::for_each(r.size(), [&](std::size_t i) { d[i] *= s[i]; });
    return r;
}

Field conjugate(const Field& a) {
    Field r = a;
    auto* d = r.values().data();
    kernels::for_each(r.size(), [&](std::size_t i) { d[i] = std::conj(d[i]); });
    return r;
}

void add_scaled(Field& acc, cplx s, const Field& a) {
    check_same_grid(acc, a, "add_scaled");
    if (acc.rep() != a.rep()) throw usage_error("add_scaled: representation mismatch");
    auto* d = acc.values().data();
    const auto* src = a.values().data();
    kernels::for_each(acc.size(), [&](std::size_t i) { d[i] += s * src[i]; });
}

double max_abs(const Field& f) {
    const auto* a = f.values().data();
    if (f.size() == 0) return 0.0;
    return kernels::max(f.size(), [&](std::size_t i) { return std::abs(a[i]); });
}

Field plane_wave(const GridSpec& g, const VecN& xi0) {
    for (int a = 0; a < g.n; ++a) (void)g.index_of_freq(xi0[a]);  // lattice check
    return fill_physical(g, [&](const VecN& x) {
        return std::exp(cplx(0.0, dot(xi0, x)));
    });
}

}  // namespace cgolab
