#pragma once

#include <functional>
#include <span>
#include <vector>

#include "qpft/core.hpp"

namespace qpft::oracle {

// f(x) = amplitude · Π_k e^{−p_k (x_k − μ_k)²}
struct GaussianSpec {
    std::vector<double> center;
    std::vector<double> width;
    cplx amplitude = 1.0;

    cplx operator()(std::span<const double> x) const;
};

Field sample_gaussian(const GaussianSpec& g, const Grid& grid);

// Exact transform of a Gaussian from the complex Gaussian integral.
cplx gaussian_qpft_closed(const GaussianSpec& g, const Params& p, std::span<const double> omega);
Field gaussian_qpft_closed(const GaussianSpec& g, const Params& p, const Grid& grid);

// O(points²) full kernel sum, no separability and no FFT.
Field brute_qpft(const Field& f, const Params& p, const Grid& out);

enum class Rule { riemann, trapezoid, adaptive };

struct QuadResult {
    cplx value;
    double error = 0;
};

// Sampled 1-D integrand with spacing `step`. The error is the Richardson gap
// against the same rule on every other sample.
QuadResult brute_quadrature(std::span<const cplx> samples, double step, Rule rule);

// Adaptive Gauss–Kronrod 7/15 on [lo, hi]. Throws QuadratureNonConvergence
// when the global estimate stays above max(abs_tol, rel_tol·|value|).
QuadResult adaptive_quadrature(const std::function<cplx(double)>& fn, double lo, double hi, double abs_tol = 1e-13,
                               double rel_tol = 1e-12, int max_intervals = 20000);

}  // namespace qpft::oracle
