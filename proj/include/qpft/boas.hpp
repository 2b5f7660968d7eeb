#pragma once

#include <vector>

#include "qpft/core.hpp"

namespace qpft {

// (Bf)(x) = e^{a,d}_{−1}(x) ∫_{x_1}^∞…∫_{x_N}^∞ e^{a,d}_1(t) f(t) dt by trapezoid
// suffix sums. Throws EdgeMass when more than 1e-8 of |f|² sits in the
// right-hand 5% shell.
Field boas_transform(const Field& f, const Params& p);

// Δ_x f = (−1)^N Π_k (∂_k + i(2a_k x_k + d_k)) f with spectral derivatives.
// Throws ResolutionError when a line carries more than 1e-10 of its energy in
// the top fifth of the discrete band.
Field delta_op(const Field& f, const Params& p);

// Π_k inf{|b_k ω_k| : |F(ω)| > 1e-8·max|F|}
double spectral_gap(const Field& F, const Params& p);

struct BoasState {
    Field base;
    std::vector<Field> iterates;  // B⁰f .. Bⁿf
    std::vector<double> norms;
};

struct BoasGrowth {
    double R_estimate = 0;
    double gamma_estimate = 0;
    double gamma_meas = 0;
    std::vector<double> norms;  // ‖Bⁿf‖₂, n = 0..n_done
    bool partial = false;       // iteration stopped at the 1e±12 norm guard
};

class NoSpectralGap : public Error {
public:
    NoSpectralGap(const std::string& what, std::vector<double> roots)
        : Error(Errc::no_spectral_gap, what), roots_(std::move(roots)) {}
    // (‖Bⁿf‖/‖f‖)^{1/n} for n = 1..n_max, from the transform side.
    const std::vector<double>& roots() const noexcept { return roots_; }

private:
    std::vector<double> roots_;
};

BoasGrowth boas_growth(const Field& f, const Params& p, int n_max, BoasState* state = nullptr);

}  // namespace qpft
