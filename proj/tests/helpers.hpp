#pragma once

#include <cmath>

#include "cgolab/field.hpp"
#include "cgolab/rng.hpp"

namespace cgolab::testing {

inline Field random_field(const GridSpec& g, std::uint64_t seed) {
    Rng rng(seed);
    Field f = Field::physical(g);
    for (auto& v : f.values()) v = cplx(rng.gaussian(), rng.gaussian());
    return f;
}

inline double rel_diff(const Field& a, const Field& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += std::norm(a[i] - b[i]);
        den += std::norm(a[i]);
    }
    return den > 0 ? std::sqrt(num / den) : std::sqrt(num);
}

}  // namespace cgolab::testing
