#include "cgolab/symbols.hpp"

namespace cgolab {

namespace {

// Decompose a row index over the leading n-1 axes and return |xi'|^2 plus the
// base flat offset. Rows run over everything but the contiguous xi_n axis.
struct RowGeom {
    double xi_prime_sq;
    std::size_t base;
};

RowGeom row_geom(const GridSpec& g, std::size_t row) {
    RowGeom r{0.0, row * static_cast<std::size_t>(g.N)};
    std::size_t rem = row;
    for (int a = g.n - 2; a >= 0; --a) {
        const int k = static_cast<int>(rem % static_cast<std::size_t>(g.N));
        rem /= static_cast<std::size_t>(g.N);
        const double f = g.freq(k);
        r.xi_prime_sq += f * f;
    }
    return r;
}

void check_xn_support(const Field& u, double half_width, const char* who) {
    const GridSpec& g = u.grid();
    if (half_width >= g.L - 0.5 * g.spacing()) return;  // whole period admissible
    const double peak = max_abs(u);
    if (peak == 0.0) return;
    const ModeIndexer ix(g);
    const auto* v = u.values().data();
    const int last = g.n - 1;
    const double worst = kernels::max(u.size(), [&](std::size_t i) {
        int k[kMaxDim];
        ix.decompose(i, k);
        return std::abs(g.coord(k[last])) > half_width ? std::abs(v[i]) : 0.0;
    });
    if (worst > 1e-12 * peak)
        throw parameter_error(std::string(who) + ": field not numerically supported in |x_n| <= " +
                              std::to_string(half_width));
}

}  // namespace

double norm_Y(const Field& u, double s, const CarlemanParams& p) {
    const Field hat = u.rep() == Rep::spectral ? u : forward_transform(u);
    const GridSpec& g = hat.grid();
    const auto* v = hat.values().data();
    const std::size_t rows = g.total() / static_cast<std::size_t>(g.N);
    const double sum = kernels::sum_rows(rows, [&](std::size_t row) {
        const RowGeom geom = row_geom(g, row);
        double acc = 0.0;
        for (int j = 0; j < g.N; ++j) {
            const double xin = g.freq(j);
            const double w = std::pow(m_symbol_sq(geom.xi_prime_sq + xin * xin, xin, p), s);
            acc += w * std::norm(v[geom.base + static_cast<std::size_t>(j)]);
        }
        return acc;
    });
    return std::sqrt(sum * g.spectral_cell());
}

double norm_X(const Field& u, double b, const ZetaVector& z) {
    const Field hat = u.rep() == Rep::spectral ? u : forward_transform(u);
    const GridSpec& g = hat.grid();
    if (z.dim() != g.n) throw usage_error("norm_X: zeta dimension mismatch");
    const auto* v = hat.values().data();
    const ModeIndexer ix(g);
    const std::size_t rows = g.total() / static_cast<std::size_t>(g.N);
    const double sqrt2tau = z.weight_norm();
    const double sum = kernels::sum_rows(rows, [&](std::size_t row) {
        int k[kMaxDim];
        ix.decompose(row * static_cast<std::size_t>(g.N), k);
        double prime_sq = 0.0, im_dot = 0.0, re_dot = 0.0;
        for (int a = 0; a < g.n - 1; ++a) {
            const double f = g.freq(k[a]);
            prime_sq += f * f;
            im_dot += z.im[a] * f;
            re_dot += z.re[a] * f;
        }
        const int last = g.n - 1;
        double acc = 0.0;
        const std::size_t base = row * static_cast<std::size_t>(g.N);
        for (int j = 0; j < g.N; ++j) {
            const double xin = g.freq(j);
            const double pr = prime_sq + xin * xin - 2.0 * (im_dot + z.im[last] * xin);
            const double pi = 2.0 * (re_dot + z.re[last] * xin);
            const double w = std::pow(sqrt2tau + std::hypot(pr, pi), 2.0 * b);
            acc += w * std::norm(v[base + static_cast<std::size_t>(j)]);
        }
        return acc;
    });
    return std::sqrt(sum * g.spectral_cell());
}

Field apply_m_power(const Field& u, double s, const CarlemanParams& p) {
    const GridSpec& g = u.grid();
    const bool was_physical = u.rep() == Rep::physical;
    Field hat = was_physical ? forward_transform(u) : u;
    auto* d = hat.values().data();
    const std::size_t rows = g.total() / static_cast<std::size_t>(g.N);
    kernels::for_each(rows, [&](std::size_t row) {
        const RowGeom geom = row_geom(g, row);
        for (int j = 0; j < g.N; ++j) {
            const double xin = g.freq(j);
            d[geom.base + static_cast<std::size_t>(j)] *=
                std::pow(m_symbol_sq(geom.xi_prime_sq + xin * xin, xin, p), 0.5 * s);
        }
    });
    return was_physical ? inverse_transform(hat) : hat;
}

Field derivative(const Field& u, int axis) {
    const GridSpec& g = u.grid();
    if (axis < 0 || axis >= g.n) throw usage_error("derivative: axis out of range");
    const bool was_physical = u.rep() == Rep::physical;
    Field hat = was_physical ? forward_transform(u) : u;
    const ModeIndexer ix(g);
    auto* d = hat.values().data();
    kernels::for_each(hat.size(), [&](std::size_t i) {
        int k[kMaxDim];
        ix.decompose(i, k);
        d[i] *= cplx(0.0, g.freq_deriv(k[axis]));
    });
    return was_physical ? inverse_transform(hat) : hat;
}

Field laplacian(const Field& u) {
    const GridSpec& g = u.grid();
    const bool was_physical = u.rep() == Rep::physical;
    Field hat = was_physical ? forward_transform(u) : u;
    const ModeIndexer ix(g);
    auto* d = hat.values().data();
    kernels::for_each(hat.size(), [&](std::size_t i) {
        int k[kMaxDim];
        ix.decompose(i, k);
        double s = 0.0;
        for (int a = 0; a < g.n; ++a) {
            const double f = g.freq(k[a]);
            s += f * f;
        }
        d[i] *= -s;
    });
    return was_physical ? inverse_transform(hat) : hat;
}

Field weight_field(const GridSpec& g, const CarlemanParams& p) {
    const int last = g.n - 1;
    return fill_physical(g, [&](const VecN& x) { return cplx(p.tau + p.M * x[last], 0.0); });
}

namespace {

// Shared assembly for the conjugated operator pieces from one forward pass.
struct ConjParts {
    Field lap;  // -Delta u (physical)
    Field dn;   // d_n u (physical)
};

ConjParts conj_parts(const Field& u) {
    const GridSpec& g = u.grid();
    Field hat = forward_transform(u);
    Field lap_hat = hat;
    Field dn_hat = hat;
    const ModeIndexer ix(g);
    auto* dl = lap_hat.values().data();
    auto* dd = dn_hat.values().data();
    const int last = g.n - 1;
    kernels::for_each(hat.size(), [&](std::size_t i) {
        int k[kMaxDim];
        ix.decompose(i, k);
        double s = 0.0;
        for (int a = 0; a < g.n; ++a) {
            const double f = g.freq(k[a]);
            s += f * f;
        }
        dl[i] *= s;  // -Delta
        dd[i] *= cplx(0.0, g.freq_deriv(k[last]));
    });
    return ConjParts{inverse_transform(lap_hat), inverse_transform(dn_hat)};
}

}  // namespace

Field conjugated_laplacian(const Field& u, const CarlemanParams& p) {
    u.require(Rep::physical, "conjugated_laplacian");
    check_xn_support(u, 4.0 * p.R, "conjugated_laplacian");
    const GridSpec& g = u.grid();
    ConjParts parts = conj_parts(u);
    Field out = std::move(parts.lap);
    const ModeIndexer ix(g);
    auto* d = out.values().data();
    const auto* dn = parts.dn.values().data();
    const auto* uv = u.values().data();
    const int last = g.n - 1;
    kernels::for_each(out.size(), [&](std::size_t i) {
        int k[kMaxDim];
        ix.decompose(i, k);
        const double w = p.tau + p.M * g.coord(k[last]);
        d[i] += 2.0 * w * dn[i] + (p.M - w * w) * uv[i];
    });
    return out;
}

Field A_op(const Field& u, const CarlemanParams& p) {
    u.require(Rep::physical, "A_op");
    check_xn_support(u, 4.0 * p.R, "A_op");
    const GridSpec& g = u.grid();
    Field out = laplacian(u);
    const ModeIndexer ix(g);
    auto* d = out.values().data();
    const auto* uv = u.values().data();
    const int last = g.n - 1;
    kernels::for_each(out.size(), [&](std::size_t i) {
        int k[kMaxDim];
        ix.decompose(i, k);
        const double w = p.tau + p.M * g.coord(k[last]);
        d[i] = -d[i] - w * w * uv[i];
    });
    return out;
}

Field B_op(const Field& u, const CarlemanParams& p) {
    u.require(Rep::physical, "B_op");
    check_xn_support(u, 4.0 * p.R, "B_op");
    const GridSpec& g = u.grid();
    Field dn = derivative(u, g.n - 1);
    const ModeIndexer ix(g);
    auto* d = dn.values().data();
    const auto* uv = u.values().data();
    const int last = g.n - 1;
    kernels::for_each(dn.size(), [&](std::size_t i) {
        int k[kMaxDim];
        ix.decompose(i, k);
        const double w = p.tau + p.M * g.coord(k[last]);
        d[i] = 2.0 * w * d[i] + p.M * uv[i];
    });
    return dn;
}

Field commutator_AB(const Field& u, const CarlemanParams& p) {
    u.require(Rep::physical, "commutator_AB");
    check_xn_support(u, 4.0 * p.R, "commutator_AB");
    const GridSpec& g = u.grid();
    // d_n^2 with the zeroed-Nyquist first-derivative symbol squared, so that
    // <-d_n^2 u, u> = |d_n u|^2 exactly.
    Field hat = forward_transform(u);
    const ModeIndexer ix(g);
    auto* dh = hat.values().data();
    const int last = g.n - 1;
    kernels::for_each(hat.size(), [&](std::size_t i) {
        int k[kMaxDim];
        ix.decompose(i, k);
        const double f = g.freq_deriv(k[last]);
        dh[i] *= -f * f;
    });
    Field dnn = inverse_transform(hat);
    Field out = Field::physical(g);
    auto* d = out.values().data();
    const auto* uv = u.values().data();
    const auto* dn2 = dnn.values().data();
    kernels::for_each(out.size(), [&](std::size_t i) {
        int k[kMaxDim];
        ix.decompose(i, k);
        const double w = p.tau + p.M * g.coord(k[last]);
        d[i] = 4.0 * p.M * (-dn2[i] + w * w * uv[i]);
    });
    return out;
}

Field commutator_conj_mhalf(const Field& u, const CarlemanParams& p) {
    u.require(Rep::physical, "commutator_conj_mhalf");
    const GridSpec& g = u.grid();
    const int last = g.n - 1;

    // m^{-1/2} u and its x_n derivative
    Field mu_hat = apply_m_power(forward_transform(u), -0.5, p);
    Field mu = inverse_transform(mu_hat);
    Field mu_dn = inverse_transform(derivative(mu_hat, last));

    // d_n u, then the weighted products pushed through m^{-1/2}
    Field du = inverse_transform(derivative(forward_transform(u), last));

    Field w = weight_field(g, p);
    Field w2u = Field::physical(g);
    Field wdu = Field::physical(g);
    {
        auto* a = w2u.values().data();
        auto* b = wdu.values().data();
        const auto* ww = w.values().data();
        const auto* uu = u.values().data();
        const auto* dd = du.values().data();
        kernels::for_each(w2u.size(), [&](std::size_t i) {
            const double wv = ww[i].real();
            a[i] = wv * wv * uu[i];
            b[i] = wv * dd[i];
        });
    }
    Field m_w2u = inverse_transform(apply_m_power(forward_transform(w2u), -0.5, p));
    Field m_wdu = inverse_transform(apply_m_power(forward_transform(wdu), -0.5, p));

    // -w^2 (m u) + 2 w d_n(m u) + m(w^2 u) - 2 m(w d_n u); the -Delta parts
    // commute with the multiplier and drop out.
    Field out = Field::physical(g);
    auto* d = out.values().data();
    const auto* ww = w.values().data();
    const auto* a1 = mu.values().data();
    const auto* a2 = mu_dn.values().data();
    const auto* a3 = m_w2u.values().data();
    const auto* a4 = m_wdu.values().data();
    kernels::for_each(out.size(), [&](std::size_t i) {
        const double wv = ww[i].real();
        d[i] = -wv * wv * a1[i] + 2.0 * wv * a2[i] + a3[i] - 2.0 * a4[i];
    });
    return out;
}

std::vector<double> m_inverse_sqrt_jet(double xi_prime_sq, double xi_n, const CarlemanParams& p, int k) {
    if (k < 0 || k > 16) throw parameter_error("m_inverse_sqrt_jet: order must be in [0, 16]");
    const int len = k + 1;
    const Jet t = Jet::variable(xi_n, len);
    const Jet t2 = t * t;
    // m^2 = M^{-1} (a + xi_n^2)^2 + M^{-1} tau^2 xi_n^2 + M tau^2, a = |xi'|^2 - tau^2
    const double a = xi_prime_sq - p.tau * p.tau;
    Jet q = Jet::constant(a, len) + t2;
    Jet m2 = (1.0 / p.M) * (q * q) + (p.tau * p.tau / p.M) * t2 + Jet::constant(p.M * p.tau * p.tau, len);
    const Jet h = m2.pow(-0.25);  // m^{-1/2} = (m^2)^{-1/4}
    const auto d = h.derivatives();
    return std::vector<double>(d.begin(), d.begin() + len);
}

}  // namespace cgolab
