#pragma once

#include <array>
#include <cmath>

#include "cgolab/errors.hpp"

namespace cgolab {

inline constexpr int kJetCap = 17;  // coefficients 0..16

//==============================================================================
// Jet
// Truncated power series in one variable with double coefficients. Used for
// exact derivatives of symbols; c[j] is the series coefficient, so the j-th
// derivative is j! * c[j].
//==============================================================================
class Jet {
  public:
    explicit Jet(int len) : len_(len) {
        if (len < 1 || len > kJetCap) throw parameter_error("Jet: length out of range");
    }

    static Jet constant(double v, int len) {
        Jet j(len);
        j.c_[0] = v;
        return j;
    }
    static Jet variable(double x0, int len) {
        Jet j(len);
        j.c_[0] = x0;
        if (len > 1) j.c_[1] = 1.0;
        return j;
    }

    int length() const { return len_; }
    double operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
    double& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }

    Jet& operator+=(const Jet& o) {
        for (int i = 0; i < len_; ++i) c_[static_cast<std::size_t>(i)] += o[i];
        return *this;
    }
    Jet& operator*=(double s) {
        for (int i = 0; i < len_; ++i) c_[static_cast<std::size_t>(i)] *= s;
        return *this;
    }

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator*(double s, Jet a) { return a *= s; }

    friend Jet operator*(const Jet& a, const Jet& b) {
        Jet r(a.len_);
        for (int i = 0; i < a.len_; ++i) {
            double s = 0.0;
            for (int j = 0; j <= i; ++j) s += a[j] * b[i - j];
            r[i] = s;
        }
        return r;
    }

    // this^alpha for a series with positive constant term, via the standard
    // recurrence from g h' = alpha g' h.
    Jet pow(double alpha) const {
        if (!(c_[0] > 0.0)) throw numeric_error("Jet::pow: non-positive constant term");
        Jet h(len_);
        h[0] = std::pow(c_[0], alpha);
        for (int m = 1; m < len_; ++m) {
            double s = 0.0;
            for (int j = 1; j <= m; ++j) s += (alpha * j - (m - j)) * (*this)[j] * h[m - j];
            h[m] = s / (m * c_[0]);
        }
        return h;
    }

    // Values of the derivatives d^j/dx^j at the expansion point, j = 0..len-1.
    std::array<double, kJetCap> derivatives() const {
        std::array<double, kJetCap> d{};
        double fact = 1.0;
        for (int j = 0; j < len_; ++j) {
            if (j > 0) fact *= j;
            d[static_cast<std::size_t>(j)] = fact * c_[static_cast<std::size_t>(j)];
        }
        return d;
    }

  private:
    int len_;
    std::array<double, kJetCap> c_{};
};

}  // namespace cgolab
