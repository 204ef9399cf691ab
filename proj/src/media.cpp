#include "cgolab/media.hpp"

#include <cmath>

#include <algorithm>
#include <functional>

#include "cgolab/rng.hpp"

namespace cgolab {

namespace {

double torus_delta(double a, double b, double period) {
    double d = a - b;
    while (d >= 0.5 * period) d -= period;
    while (d < -0.5 * period) d += period;
    return d;
}

// W'(r)/r with the analytic limit at r -> 0.
double c1_deriv_over_r(const KaiserWindowC1& w, double r) {
    const double t = std::abs(r) / w.T;
    if (t >= 1.0) return 0.0;
    if (t < 1e-8) {
        const double dI = std::cyl_bessel_i(1.0, w.beta) - 0.5 * w.beta;
        return -dI * w.beta / (w.T * w.T * w.norm());
    }
    return w.deriv(std::abs(r)) / std::abs(r);
}

// Mollified cone profile: tent(r) = max(0, 1 - |r|/rho) convolved with a
// compact kernel of half-width delta. Evaluated by piecewise Gauss-Legendre
// quadrature split at the integrand's kinks, then tabulated in the radius.
class TentProfile {
  public:
    TentProfile(double rho, double delta) : rho_(rho), delta_(delta) {
        // normalized kernel kappa(s) on [-1, 1]
        const double beta = 6.0;
        auto kernel = [beta](double s) {
            const double q = 1.0 - s * s;
            return q <= 0.0 ? 0.0 : std::cyl_bessel_i(0.0, beta * std::sqrt(q));
        };
        double z = 0.0;
        for (int i = 0; i < kGL; ++i) z += gl_w_[i] * kernel(gl_x_[i]);
        norm_ = z;
        kernel_ = kernel;

        const int table_n = 4096;
        const double rmax = rho_ + delta_;
        table_.resize(table_n + 1);
        dr_ = rmax / table_n;
        for (int i = 0; i <= table_n; ++i) table_[static_cast<std::size_t>(i)] = eval(i * dr_);
        peak_ = table_[0];
    }

    double rmax() const { return rho_ + delta_; }

    // normalized so the profile peaks at 1
    double operator()(double r) const {
        r = std::abs(r);
        if (r >= rmax()) return 0.0;
        const double u = r / dr_;
        const std::size_t i = std::min(static_cast<std::size_t>(u), table_.size() - 2);
        const double f = u - static_cast<double>(i);
        // 4-point cubic interpolation (clamped at the ends)
        const std::size_t i0 = i > 0 ? i - 1 : 0;
        const std::size_t i3 = std::min(i + 2, table_.size() - 1);
        const double p0 = table_[i0], p1 = table_[i], p2 = table_[i + 1], p3 = table_[i3];
        const double c0 = p1;
        const double c1 = 0.5 * (p2 - p0);
        const double c2 = p0 - 2.5 * p1 + 2.0 * p2 - 0.5 * p3;
        const double c3 = 0.5 * (p3 - p0) + 1.5 * (p1 - p2);
        return (c0 + f * (c1 + f * (c2 + f * c3))) / peak_;
    }

  private:
    static constexpr int kGL = 32;
    static const double gl_x_[32];
    static const double gl_w_[32];

    double eval(double r) const {
        auto tent = [this](double u) {
            const double t = 1.0 - std::abs(u) / rho_;
            return t > 0.0 ? t : 0.0;
        };
        // integrand kinks at s = r/delta, (r +- rho)/delta
        double knots[5] = {-1.0, 1.0, 1.0, 1.0, 1.0};
        int nk = 2;
        for (double s : {r / delta_, (r - rho_) / delta_, (r + rho_) / delta_})
            if (s > -1.0 && s < 1.0) knots[nk++] = s;
        std::sort(knots, knots + nk);
        double acc = 0.0;
        for (int piece = 0; piece + 1 < nk; ++piece) {
            const double lo = knots[piece], hi = knots[piece + 1];
            if (hi - lo < 1e-14) continue;
            const double mid = 0.5 * (lo + hi), hw = 0.5 * (hi - lo);
            for (int i = 0; i < kGL; ++i) {
                const double s = mid + hw * gl_x_[i];
                acc += hw * gl_w_[i] * kernel_(s) * tent(r - delta_ * s);
            }
        }
        return acc / norm_;
    }

    double rho_, delta_;
    double norm_ = 1.0, peak_ = 1.0, dr_ = 1.0;
    std::vector<double> table_;
    std::function<double(double)> kernel_;
};

// 32-point Gauss-Legendre nodes/weights on [-1, 1].
const double TentProfile::gl_x_[32] = {
    -0.9972638618494816, -0.9856115115452684, -0.9647622555875064, -0.9349060759377397,
    -0.8963211557660521, -0.8493676137325700, -0.7944837959679424, -0.7321821187402897,
    -0.6630442669302152, -0.5877157572407623, -0.5068999089322294, -0.4213512761306353,
    -0.3318686022821277, -0.2392873622521371, -0.1444719615827965, -0.0483076656877383,
    0.0483076656877383,  0.1444719615827965,  0.2392873622521371,  0.3318686022821277,
    0.4213512761306353,  0.5068999089322294,  0.5877157572407623,  0.6630442669302152,
    0.7321821187402897,  0.7944837959679424,  0.8493676137325700,  0.8963211557660521,
    0.9349060759377397,  0.9647622555875064,  0.9856115115452684,  0.9972638618494816};
const double TentProfile::gl_w_[32] = {
    0.0070186100094701, 0.0162743947309057, 0.0253920653092621, 0.0342738629130214,
    0.0428358980222267, 0.0509980592623762, 0.0586840934785355, 0.0658222227763618,
    0.0723457941088485, 0.0781938957870703, 0.0833119242269467, 0.0876520930044038,
    0.0911738786957639, 0.0938443990808046, 0.0956387200792749, 0.0965400885147278,
    0.0965400885147278, 0.0956387200792749, 0.0938443990808046, 0.0911738786957639,
    0.0876520930044038, 0.0833119242269467, 0.0781938957870703, 0.0723457941088485,
    0.0658222227763618, 0.0586840934785355, 0.0509980592623762, 0.0428358980222267,
    0.0342738629130214, 0.0253920653092621, 0.0162743947309057, 0.0070186100094701};

}  // namespace

ConductivityModel::ConductivityModel(const GridSpec& g, const ModelParams& params)
    : grid_(g),
      params_(params),
      log_gamma_(Field::physical(g)),
      gamma_(Field::physical(g)),
      strong_q_(Field::physical(g)),
      q_hat_(Field::spectral(g)) {
    ModelParams& p = params_;
    if (p.center.n != g.n) p.center = VecN::zero(g.n);
    if (p.window_radius <= 0.0) p.window_radius = 0.9 * g.R;
    if (p.tent_radius <= 0.0) p.tent_radius = 0.7 * g.R;
    if (p.delta <= 0.0) p.delta = 2.0 * g.spacing();
    if (p.beta <= 0.0) p.beta = std::min(24.0, kaiser_beta_budget(g, p.window_radius, 0.9));
    if (p.kind == ConductivityKind::mollified_tent && p.tent_radius + p.delta > g.R)
        throw parameter_error("ConductivityModel: mollified tent support exceeds R");

    // log gamma = 2 g with g the compactly supported profile
    switch (p.kind) {
        case ConductivityKind::constant:
            break;  // log gamma = 0
        case ConductivityKind::gaussian_log: {
            const KaiserWindowC1 win{p.window_radius, p.beta};
            const double s2 = p.sigma * p.sigma;
            log_gamma_ = fill_physical(g, [&](const VecN& x) {
                double r2 = 0.0;
                for (int a = 0; a < g.n; ++a) {
                    const double d = torus_delta(x[a], p.center[a], 2.0 * g.L);
                    r2 += d * d;
                }
                const double w = win.value(std::sqrt(r2));
                if (w == 0.0) return cplx(0.0, 0.0);
                return cplx(2.0 * p.eps * std::exp(-0.5 * r2 / s2) * w, 0.0);
            });
            break;
        }
        case ConductivityKind::mollified_tent: {
            const TentProfile prof(p.tent_radius, p.delta);
            log_gamma_ = fill_physical(g, [&](const VecN& x) {
                double r2 = 0.0;
                for (int a = 0; a < g.n; ++a) {
                    const double d = torus_delta(x[a], p.center[a], 2.0 * g.L);
                    r2 += d * d;
                }
                return cplx(2.0 * p.eps * prof(std::sqrt(r2)), 0.0);
            });
            break;
        }
    }

    {
        auto* gm = gamma_.values().data();
        const auto* lg = log_gamma_.values().data();
        kernels::for_each(gamma_.size(), [&](std::size_t i) { gm[i] = std::exp(lg[i].real()); });
    }

    // spectral gradient and the scans
    Field lg_hat = forward_transform(log_gamma_);
    grad_.reserve(static_cast<std::size_t>(g.n));
    for (int a = 0; a < g.n; ++a) grad_.push_back(inverse_transform(derivative(lg_hat, a)));

    double cmin = 1.0, cmax = 1.0, amax = 0.0;
    for (std::size_t i = 0; i < gamma_.size(); ++i) {
        const double gv = gamma_[i].real();
        cmin = std::min(cmin, gv);
        cmax = std::max(cmax, gv);
        double s = 0.0;
        for (int a = 0; a < g.n; ++a) s += std::norm(grad_[static_cast<std::size_t>(a)][i]);
        amax = std::max(amax, s);
        if (!(gv > 0.0)) throw parameter_error("ConductivityModel: gamma not positive");
    }
    c0_ = std::min(cmin, 1.0 / cmax);
    A_ = std::sqrt(amax);

    // strong q = |grad log gamma|^2 / 4 + Delta(log gamma) / 2, with the
    // Laplacian realized as the square of the first-derivative symbol so the
    // weak and strong routes agree by exact discrete integration by parts
    Field lap_hat = lg_hat;
    {
        const ModeIndexer ix(g);
        auto* d = lap_hat.values().data();
        kernels::for_each(lap_hat.size(), [&](std::size_t i) {
            int k[kMaxDim];
            ix.decompose(i, k);
            double s = 0.0;
            for (int a = 0; a < g.n; ++a) {
                const double f = g.freq_deriv(k[a]);
                s += f * f;
            }
            d[i] *= -s;
        });
    }
    Field lap = inverse_transform(lap_hat);
    {
        auto* sq = strong_q_.values().data();
        const auto* lp = lap.values().data();
        kernels::for_each(strong_q_.size(), [&](std::size_t i) {
            double s = 0.0;
            for (int a = 0; a < g.n; ++a) s += std::norm(grad_[static_cast<std::size_t>(a)][i]);
            sq[i] = 0.25 * s + 0.5 * lp[i];
        });
    }

    // weak lattice coefficients: Q(k) = 1/4 P[|grad lg|^2](k) + i/2 sum_j k_j P[d_j lg](k)
    Field grad_sq = Field::physical(g);
    {
        auto* d = grad_sq.values().data();
        kernels::for_each(grad_sq.size(), [&](std::size_t i) {
            double s = 0.0;
            for (int a = 0; a < g.n; ++a) s += std::norm(grad_[static_cast<std::size_t>(a)][i]);
            d[i] = s;
        });
    }
    Field gs_hat = forward_transform(grad_sq);
    std::vector<Field> grad_hat;
    grad_hat.reserve(static_cast<std::size_t>(g.n));
    for (int a = 0; a < g.n; ++a) grad_hat.push_back(forward_transform(grad_[static_cast<std::size_t>(a)]));
    {
        const ModeIndexer ix(g);
        auto* q = q_hat_.values().data();
        kernels::for_each(q_hat_.size(), [&](std::size_t i) {
            int k[kMaxDim];
            ix.decompose(i, k);
            cplx acc = 0.25 * gs_hat[i];
            for (int a = 0; a < g.n; ++a)
                acc += cplx(0.0, 0.5 * g.freq_deriv(k[a])) * grad_hat[static_cast<std::size_t>(a)][i];
            q[i] = acc;
        });
    }
}

std::vector<Field> ConductivityModel::grad_log_gamma_closed_form() const {
    if (!has_closed_form_gradient())
        throw usage_error("grad_log_gamma_closed_form: only the gaussian-log kind has one");
    const GridSpec& g = grid_;
    const ModelParams& p = params_;
    const KaiserWindowC1 win{p.window_radius, p.beta};
    const double s2 = p.sigma * p.sigma;
    std::vector<Field> out;
    out.reserve(static_cast<std::size_t>(g.n));
    for (int a = 0; a < g.n; ++a) {
        out.push_back(fill_physical(g, [&](const VecN& x) {
            double r2 = 0.0;
            VecN d(g.n);
            for (int b = 0; b < g.n; ++b) {
                d[b] = torus_delta(x[b], p.center[b], 2.0 * g.L);
                r2 += d[b] * d[b];
            }
            const double r = std::sqrt(r2);
            if (r >= win.T) return cplx(0.0, 0.0);
            const double gauss = std::exp(-0.5 * r2 / s2);
            const double val = 2.0 * p.eps * gauss * (-win.value(r) / s2 + c1_deriv_over_r(win, r)) * d[a];
            return cplx(val, 0.0);
        }));
    }
    return out;
}

cplx ConductivityModel::q_fourier(const VecN& k) const {
    const ModeIndexer ix(grid_);
    std::size_t flat = 0;
    for (int a = 0; a < grid_.n; ++a)
        flat += static_cast<std::size_t>(grid_.index_of_freq(k[a])) * ix.stride[static_cast<std::size_t>(a)];
    return q_hat_[flat] * std::pow(2.0 * kPi, 0.5 * grid_.n);
}

cplx q_bilinear(const ConductivityModel& m, const Field& u, const Field& v) {
    u.require(Rep::physical, "q_bilinear");
    v.require(Rep::physical, "q_bilinear");
    check_same_grid(u, v, "q_bilinear");
    if (u.grid() != m.grid()) throw usage_error("q_bilinear: grid mismatch with the model");
    if (m.is_constant()) return cplx(0.0, 0.0);
    const GridSpec& g = m.grid();

    Field uv = pointwise_mul(u, v);
    const auto& grad_lg = m.grad_log_gamma();

    // 1/4 int |grad log g|^2 u v
    const auto* puv = uv.values().data();
    cplx first = kernels::sum_cplx(uv.size(), [&](std::size_t i) {
        double s = 0.0;
        for (int a = 0; a < g.n; ++a) s += std::norm(grad_lg[static_cast<std::size_t>(a)][i]);
        return 0.25 * s * puv[i];
    });
    first *= g.cell_volume();

    // -1/2 int grad log g . grad(u v)
    Field uv_hat = forward_transform(uv);
    cplx second(0.0, 0.0);
    for (int a = 0; a < g.n; ++a) {
        Field da = inverse_transform(derivative(uv_hat, a));
        const auto* pg = grad_lg[static_cast<std::size_t>(a)].values().data();
        const auto* pd = da.values().data();
        cplx dot = kernels::sum_cplx(da.size(), [&](std::size_t i) { return pg[i] * pd[i]; });
        second -= 0.5 * dot * g.cell_volume();
    }
    return first + second;
}

double q_norm_X(const ConductivityModel& m, const ZetaVector& zeta, double b) {
    return norm_X(m.q_hat(), b, zeta);
}

double modulus_of_continuity(const ConductivityModel& m, double h, int sample_count, std::uint64_t seed) {
    const GridSpec& g = m.grid();
    if (!(h > 0.0 && h < 0.5 * g.L)) throw parameter_error("modulus_of_continuity: h must be in (0, L/2)");
    if (m.is_constant()) return 0.0;

    std::vector<VecN> dirs;
    for (int a = 0; a < g.n; ++a) {
        dirs.push_back(VecN::axis(g.n, a, 1.0));
        dirs.push_back(VecN::axis(g.n, a, -1.0));
    }
    Rng rng(seed);
    while (static_cast<int>(dirs.size()) < sample_count) {
        VecN y(g.n);
        for (int a = 0; a < g.n; ++a) y[a] = rng.gaussian();
        if (norm(y) < 1e-8) continue;
        dirs.push_back(normalized(y));
    }

    const ModeIndexer ix(g);
    double worst = 0.0;
    for (const VecN& y : dirs) {
        double total = 0.0;
        for (int a = 0; a < g.n; ++a) {
            Field ghat = forward_transform(m.grad_log_gamma()[static_cast<std::size_t>(a)]);
            auto* d = ghat.values().data();
            kernels::for_each(ghat.size(), [&](std::size_t i) {
                int k[kMaxDim];
                ix.decompose(i, k);
                double phase = 0.0;
                for (int c = 0; c < g.n; ++c) phase += g.freq(k[c]) * h * y[c];
                d[i] *= cplx(1.0, 0.0) - std::exp(cplx(0.0, -phase));
            });
            const double nrm = norm_l2(ghat);
            total += nrm * nrm;
        }
        worst = std::max(worst, total);
    }
    return worst;
}

}  // namespace cgolab
