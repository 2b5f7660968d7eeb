#pragma once

#include <span>
#include <vector>

#include "qpft/core.hpp"
#include "qpft/transform.hpp"

namespace qpft {

enum class ConvType { plain, type1, type2, type2_dual, type3 };

struct ConvKind {
    ConvType type = ConvType::type1;
    double lambda = 1.0;  // type3 only
};

ConvType parse_conv_type(const std::string& name);
const char* conv_type_name(ConvType t);

// (f ⋆ g)(x) = (2π)^{−N/2} ∫ f(τ) g(x − τ) dτ, linear convolution via zero-padded
// FFT, cropped to f's extent at the offset that best aligns with f's grid.
Field conv_plain(const Field& f, const Field& g, Diagnostics* diag = nullptr);

// C_Λ e^{−iΣa_k x_k²} [(f e^{iΣa_k x_k²}) ⋆ (g e^{iΣa_k x_k²})]
Field conv_type1(const Field& f, const Field& g, const Params& p, Diagnostics* diag = nullptr);

// Π√(b_k/(πi)) ∫ f(τ) g(√2x − τ) e^{iΣ 2a_k(x_k/√2 − τ_k)² + i(√2−1)d_k x_k} dτ, sampled on f's grid.
Field conv_type2(const Field& f, const Field& g, const Params& p, Diagnostics* diag = nullptr);
// Π√(i b_k/π) ∫ F(v) G(√2ω − v) e^{−iΣ 2c_k(ω_k/√2 − v_k)² − i(√2−1)e_k ω_k} dv, sampled on F's grid.
Field dual_type2(const Field& F, const Field& G, const Params& p, Diagnostics* diag = nullptr);

// |λ|^N C_Λ e^{a,d}_{−λ²}(x) [(e^{a,d}_{λ²} f) ⋆ (e^{a,d}_{λ²} g)](x)
Field conv_type3(const Field& f, const Field& g, const Params& p, double lambda, Diagnostics* diag = nullptr);

Field convolve(const ConvKind& kind, const Field& f, const Field& g, const Params& p, Diagnostics* diag = nullptr);

struct SpectralSymbol {
    ConvKind kind;
    Params params;
    // Arguments of the transforms multiplying the symbol are ω·arg_scale
    // (1 except for type2, whose factors are evaluated at ω/√2).
    double arg_scale = 1.0;

    cplx operator()(std::span<const double> omega) const;
    Field sample(const Grid& grid) const;
};

SpectralSymbol spectral_symbol(const ConvKind& kind, const Params& p);

// Shifts samples by whole cells (positive moves content towards larger x), zero fill.
Field translate(const Field& f, std::span<const long> cells);
// E^{at}_{λ²}(x) g(x) with E^{at}_{λ²}(x) = e^{2iλ² Σ a_k x_k t_k}
Field modulate_at(const Field& g, const Params& p, double lambda, std::span<const double> t);

// Spectral derivative along `axis` (periodic extension of the sampled line).
// `high_band` receives the energy fraction above 0.8 of the Nyquist wavenumber.
Field spectral_derivative(const Field& f, std::size_t axis, double* high_band = nullptr);
// Multiplies by the coordinate along `axis`.
Field times_coordinate(const Field& f, std::size_t axis);

// Relative L² residual of
//   ∂_k(f ⊗ g) = 2a_k iλ² [(x_k f) ⊗ g − x_k (f ⊗ g)] + (∂_k f) ⊗ g,  ⊗ = type3 at λ.
double derivative_identity_check(const Field& f, const Field& g, const Params& p, double lambda, std::size_t axis);

}  // namespace qpft
