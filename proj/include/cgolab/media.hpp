#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "cgolab/field.hpp"
#include "cgolab/symbols.hpp"
#include "cgolab/windows.hpp"

namespace cgolab {

enum class ConductivityKind { constant, gaussian_log, mollified_tent };

struct ModelParams {
    ConductivityKind kind = ConductivityKind::gaussian_log;
    double eps = 0.1;         // amplitude of log gamma / 2
    double sigma = 0.25;      // gaussian width
    VecN center;              // defaults to the origin
    double tent_radius = 0;   // cone base radius; 0 = 0.7 R
    double delta = 0;         // tent mollification scale; 0 = 2 * grid spacing
    double window_radius = 0; // support of gamma - 1; 0 = 0.9 R
    double beta = 0;          // C1 Kaiser beta; 0 = from the grid budget
};

//==============================================================================
// ConductivityModel
// gamma > 0 on the grid with gamma = 1 outside |x| > R (exactly, by compact
// windows). Carries log gamma, its spectral gradient, the strong-form
// potential q = |grad log gamma|^2 / 4 + (Delta log gamma) / 2, and the
// lattice weak Fourier coefficients of q. All derived data is computed once
// at construction; instances are immutable afterwards.
//==============================================================================
class ConductivityModel {
  public:
    ConductivityModel(const GridSpec& g, const ModelParams& params);

    const GridSpec& grid() const { return grid_; }
    const ModelParams& params() const { return params_; }
    bool is_constant() const { return params_.kind == ConductivityKind::constant; }

    const Field& log_gamma() const { return log_gamma_; }
    const Field& gamma() const { return gamma_; }
    const std::vector<Field>& grad_log_gamma() const { return grad_; }
    const Field& strong_q() const { return strong_q_; }

    // Closed-form gradient; available for the gaussian-log kind only.
    std::vector<Field> grad_log_gamma_closed_form() const;
    bool has_closed_form_gradient() const { return params_.kind == ConductivityKind::gaussian_log; }

    double c0() const { return c0_; }      // scanned bound: c0 <= gamma <= 1/c0
    double A_scan() const { return A_; }   // scanned max |grad log gamma|

    // Weak lattice coefficient Q(k) = <q, e^{-ik.x}> (pairing normalization).
    cplx q_fourier(const VecN& k) const;

    // Spectral field of transform-normalized weak coefficients Q(k)/(2pi)^{n/2}.
    const Field& q_hat() const { return q_hat_; }

  private:
    GridSpec grid_;
    ModelParams params_;
    Field log_gamma_;
    Field gamma_;
    std::vector<Field> grad_;
    Field strong_q_;
    Field q_hat_;
    double c0_ = 1.0;
    double A_ = 0.0;
};

// Brown's bilinear pairing <q u, v> = 1/4 int |grad log g|^2 u v
//                                   - 1/2 int grad log g . grad(u v).
cplx q_bilinear(const ConductivityModel& m, const Field& u, const Field& v);

// X^b norm of the lattice realization of q (default b = -1/2).
double q_norm_X(const ConductivityModel& m, const ZetaVector& zeta, double b = -0.5);

// sup over sampled unit directions y of | grad log g - grad log g(. - h y) |_{L2}^2,
// shifts applied spectrally.
double modulus_of_continuity(const ConductivityModel& m, double h, int sample_count, std::uint64_t seed = 7);

}  // namespace cgolab
