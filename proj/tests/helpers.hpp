#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "qpft/core.hpp"
#include "qpft/oracle.hpp"

namespace testing {

using qpft::cplx;

// [lo, hi) with m samples per axis.
inline qpft::Grid box_grid(double lo, double hi, std::size_t m, std::size_t dims = 1) {
    std::vector<qpft::Axis> axes(dims, qpft::Axis{lo, (hi - lo) / static_cast<double>(m), m});
    return qpft::Grid(axes);
}

inline qpft::Params params1(double a, double b, double c, double d, double e) {
    return qpft::Params::validate({{a, b, c, d, e}});
}

// |b| ∈ [0.5, 2] with random sign on b off by default, |a|,|c| ≤ 0.5, |d|,|e| ≤ 1.
inline qpft::Params random_params(std::mt19937_64& rng, std::size_t dims, bool signed_b = false) {
    std::uniform_real_distribution<double> ac(-0.5, 0.5), de(-1.0, 1.0), bm(0.5, 2.0), coin(0.0, 1.0);
    std::vector<qpft::Quintuple> q;
    for (std::size_t k = 0; k < dims; ++k) {
        double b = bm(rng);
        if (signed_b && coin(rng) < 0.5) b = -b;
        q.push_back({ac(rng), b, ac(rng), de(rng), de(rng)});
    }
    return qpft::Params::validate(q);
}

inline qpft::oracle::GaussianSpec gaussian(std::vector<double> center, std::vector<double> width, cplx amp = 1.0) {
    return {std::move(center), std::move(width), amp};
}

inline double max_rel_diff(const qpft::Field& a, const qpft::Field& b) {
    double m = 0, s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a.values[i] - b.values[i]));
        s = std::max(s, std::abs(b.values[i]));
    }
    return s > 0 ? m / s : m;
}

}  // namespace testing
