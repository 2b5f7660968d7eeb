#pragma once

#include <utility>
#include <vector>

#include "qpft/convolution.hpp"
#include "qpft/core.hpp"

namespace qpft {

// λφ + k ⊙ φ = p, with ⊙ a type1 or type3 convolution.
struct ConvolutionEquation {
    cplx lambda;
    Field kernel;
    Field rhs;
    ConvKind kind;
    Params params;
};

struct EquationSolution {
    Field phi;
    double residual = 0;  // ‖λφ + k⊙φ − p‖₂ / ‖p‖₂
    double min_symbol = 0;
};

// φ = Q⁻¹(Qp / S), S = λ + Ω·Qk; with reg > 0 the division becomes conj(S)/(|S|² + reg²).
EquationSolution solve_convolution_equation(const ConvolutionEquation& eq, double regularization);

struct FilterSpec {
    std::vector<std::pair<double, double>> passband;  // [ξ_k, η_k]
    double rolloff = 0;                               // raised-cosine width, 0 = hard edge
    double floor = 0;                                 // stopband gain
};

Field design_filter(const FilterSpec& spec, const Params& p, const Grid& freq);
// r_out = Q⁻¹(mask · Q r_in), with Q on the mask's grid and r_out on r_in's grid.
Field apply_filter(const Field& r_in, const Field& mask, const Params& p);

double snr_db(const Field& clean, const Field& observed);

}  // namespace qpft
