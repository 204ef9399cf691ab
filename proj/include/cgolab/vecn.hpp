#pragma once

#include <array>
#include <cmath>
#include <initializer_list>
#include <string>

#include "cgolab/errors.hpp"

namespace cgolab {

inline constexpr int kMaxDim = 4;

// Small real vector of runtime dimension n <= kMaxDim.
struct VecN {
    int n = 0;
    std::array<double, kMaxDim> c{};

    VecN() = default;
    explicit VecN(int dim) : n(dim) {
        if (dim < 1 || dim > kMaxDim) throw parameter_error("VecN: dimension out of range");
    }
    VecN(std::initializer_list<double> xs) : n(static_cast<int>(xs.size())) {
        if (n < 1 || n > kMaxDim) throw parameter_error("VecN: dimension out of range");
        int i = 0;
        for (double x : xs) c[static_cast<std::size_t>(i++)] = x;
    }

    double& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
    double operator[](int i) const { return c[static_cast<std::size_t>(i)]; }

    static VecN zero(int dim) { return VecN(dim); }
    static VecN axis(int dim, int k, double v = 1.0) {
        VecN e(dim);
        e[k] = v;
        return e;
    }

    VecN& operator+=(const VecN& o) {
        for (int i = 0; i < n; ++i) c[static_cast<std::size_t>(i)] += o[i];
        return *this;
    }
    VecN& operator-=(const VecN& o) {
        for (int i = 0; i < n; ++i) c[static_cast<std::size_t>(i)] -= o[i];
        return *this;
    }
    VecN& operator*=(double s) {
        for (int i = 0; i < n; ++i) c[static_cast<std::size_t>(i)] *= s;
        return *this;
    }
};

inline VecN operator+(VecN a, const VecN& b) { return a += b; }
inline VecN operator-(VecN a, const VecN& b) { return a -= b; }
inline VecN operator*(double s, VecN a) { return a *= s; }

inline double dot(const VecN& a, const VecN& b) {
    double s = 0.0;
    for (int i = 0; i < a.n; ++i) s += a[i] * b[i];
    return s;
}

inline double norm_sq(const VecN& a) { return dot(a, a); }
inline double norm(const VecN& a) { return std::sqrt(norm_sq(a)); }

inline VecN normalized(const VecN& a) {
    double m = norm(a);
    if (m == 0.0) throw parameter_error("normalized: zero vector");
    VecN r = a;
    r *= 1.0 / m;
    return r;
}

inline std::string to_string(const VecN& a) {
    std::string s = "(";
    for (int i = 0; i < a.n; ++i) {
        if (i) s += ", ";
        s += std::to_string(a[i]);
    }
    return s + ")";
}

}  // namespace cgolab
