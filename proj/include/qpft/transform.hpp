#pragma once

#include <string>
#include <vector>

#include "qpft/core.hpp"

namespace qpft {

struct Diagnostics {
    std::vector<std::string> warnings;
    double edge_energy = 0;      // fraction of |f|² in the outer 5% shell of the input
    double discarded_tail = 0;   // energy fraction dropped when cropping a linear convolution
};

enum class Path { direct, fast };

struct TransformPlan {
    Params params;
    Grid in_grid, out_grid;
    Path path = Path::fast;
    std::vector<bool> commensurate;  // |b|ΔxΔωM = 2π within 1e-9, per axis
};

TransformPlan make_plan(const Params& p, const Grid& in, const Grid& out, Path path);

// ω-grid with Δω_k = 2π/(|b_k|Δx_k M_k) and origin −⌊M_k/2⌋Δω_k.
Grid default_frequency_grid(const Grid& x, const Params& p);
// Same construction in the other direction, for the inverse transform.
Grid default_space_grid(const Grid& w, const Params& p);

Field qpft_direct(const Field& f, const Params& p, const Grid& out, Diagnostics* diag = nullptr);
Field qpft_fast(const Field& f, const Params& p, const Grid& out, bool allow_bluestein = true,
                Diagnostics* diag = nullptr);
Field forward(const Field& f, const Params& p, const Grid& out, Path path = Path::fast, Diagnostics* diag = nullptr);
Field forward(const Field& f, const Params& p, Path path = Path::fast);

// f(x) = ∫ F(ω) K_{−Λ}(ω, x) dω by the same quadrature as the forward path.
Field iqpft(const Field& F, const Params& p, const Grid& out, Path path = Path::fast, Diagnostics* diag = nullptr);
Field iqpft(const Field& F, const Params& p, Path path = Path::fast);

double parseval_residual(const Field& f, const Params& p, const Grid& out);

// Fraction of |f|² lying in the outer `shell` of any axis.
double edge_energy(const Field& f, double shell = 0.05);
// Same, restricted to the high-index end of each axis.
double right_edge_energy(const Field& f, double shell = 0.05);

}  // namespace qpft
