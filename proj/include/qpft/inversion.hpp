#pragma once

#include <span>

#include "qpft/core.hpp"

namespace qpft {

// h_{Λ,λ}(ω) = C_{−Λ}/(2π)^{N/2} · e^{a,d}_{−1}(ω) · Π_k 2λ/(λ² + b_k²ω_k²)
cplx mollifier_closed(const Params& p, double lambda, std::span<const double> omega);
Field mollifier_closed(const Params& p, double lambda, const Grid& grid);

// ∫ H_λ(x) e^{c,e}_1(x) K_{−Λ}(x, ω) dx, H_λ(x) = Π e^{−λ|x_k|}, by adaptive
// Gauss–Kronrod on each axis (the integrand factorizes).
cplx mollifier_quadrature(const Params& p, double lambda, std::span<const double> omega);

// Fraction of the Lorentzian mass Π 2λ/(λ²+b²ω²) that lies inside the grid.
double mollifier_coverage(const Params& p, double lambda, const Grid& grid);

// (C_Λ/(2π)^{N/2}) Σ h(ω) e^{a,d}_1(ω) Δω over |ω_k| ≤ half_width·λ/|b_k| with
// spacing step·λ/|b_k|, summed axis by axis without materializing the grid.
struct UnitMass {
    cplx mass;
    double coverage = 0;
};
UnitMass mollifier_unit_mass(const Params& p, double lambda, double half_width, double step);

// Discrete ‖h‖_p^p with the (2π)^{−N/2} measure, and the bound |C_{−Λ}|^{p−2}/λ^{pN−N}.
double mollifier_lp(const Params& p, double lambda, double power, const Grid& grid);
double mollifier_lp_bound(const Params& p, double lambda, double power);

// f ⊗_{Λ,1} h_{Λ,λ} with the mollifier sampled on f's grid.
Field approx_identity_apply(const Field& f, const Params& p, double mollifier_lambda);

// Relative residual of  (Q_{Λ'} f) ⊗_{Λ̃,λ} (Q_{Λ'} g) = Q_{Λ'}(e^{a,d}_{λ²} f g),
// Λ' = λ²Λ and Λ̃ = (−c, −b, −a, −e, −d), all transforms on the default grid.
double product_theorem_check(const Field& f, const Field& g, const Params& p, double lambda);

}  // namespace qpft
