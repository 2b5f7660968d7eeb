#include "qpft/applications.hpp"

#include <cmath>

#include "qpft/transform.hpp"

namespace qpft {

EquationSolution solve_convolution_equation(const ConvolutionEquation& eq, double reg) {
    if (eq.kind.type != ConvType::type1 && eq.kind.type != ConvType::type3)
        throw Error(Errc::unsupported_kind, "the solver supports type1 and type3 kernels only");
    if (!eq.kernel.grid.same_as(eq.rhs.grid)) throw Error(Errc::grid_mismatch, "kernel and rhs grids differ");
    if (reg < 0) throw Error(Errc::invalid_argument, "regularization must be non-negative");
    require_dims(eq.params, eq.rhs.grid);

    const Params tp = eq.kind.type == ConvType::type3 ? eq.params.scaled(eq.kind.lambda) : eq.params;
    const SpectralSymbol omega = spectral_symbol(eq.kind, eq.params);
    const Grid wg = default_frequency_grid(eq.rhs.grid, tp);
    const Field K = qpft_fast(eq.kernel, tp, wg);
    Field P = qpft_fast(eq.rhs, tp, wg);

    std::vector<double> w(wg.dims());
    double min_s = INFINITY;
    for (std::size_t i = 0; i < P.size(); ++i) {
        wg.coords(i, w);
        const cplx S = eq.lambda + omega(w) * K.values[i];
        min_s = std::min(min_s, std::abs(S));
        if (reg == 0) {
            if (std::abs(S) < 1e-12)
                throw Error(Errc::singular_symbol, "|S(omega)| < 1e-12 on the grid and no regularization given");
            P.values[i] /= S;
        } else {
            P.values[i] *= std::conj(S) / (std::norm(S) + reg * reg);
        }
    }
    EquationSolution sol{iqpft(P, tp, eq.rhs.grid), 0, min_s};
    sol.phi.require_finite();

    Field lhs = convolve(eq.kind, eq.kernel, sol.phi, eq.params);
    for (std::size_t i = 0; i < lhs.size(); ++i) lhs.values[i] += eq.lambda * sol.phi.values[i];
    const double np = norm2(eq.rhs);
    sol.residual = np > 0 ? rel_l2(lhs, eq.rhs) : norm2(lhs);
    return sol;
}

Field design_filter(const FilterSpec& spec, const Params& p, const Grid& freq) {
    require_dims(p, freq);
    if (spec.passband.size() != freq.dims()) throw Error(Errc::dim_mismatch, "passband dimension mismatch");
    if (!(spec.floor >= 0 && spec.floor < 1)) throw Error(Errc::invalid_argument, "floor must lie in [0, 1)");
    if (spec.rolloff < 0) throw Error(Errc::invalid_argument, "rolloff width must be non-negative");
    for (std::size_t k = 0; k < freq.dims(); ++k) {
        const auto [lo, hi] = spec.passband[k];
        const Axis& a = freq.axis(k);
        if (!(lo < hi)) throw Error(Errc::invalid_argument, "passband needs xi < eta on every axis");
        if (hi < a.origin || lo > a.last())
            throw Error(Errc::empty_passband, "passband misses the frequency span on axis " + std::to_string(k + 1));
    }
    Field mask(freq, Domain::frequency);
    std::vector<double> w(freq.dims());
    std::size_t inside = 0;
    for (std::size_t i = 0; i < mask.size(); ++i) {
        freq.coords(i, w);
        double gain = 1.0;
        bool in = true;
        for (std::size_t k = 0; k < w.size(); ++k) {
            const auto [lo, hi] = spec.passband[k];
            const double dist = w[k] < lo ? lo - w[k] : (w[k] > hi ? w[k] - hi : 0.0);
            if (dist == 0) continue;
            in = false;
            if (spec.rolloff > 0 && dist < spec.rolloff)
                gain *= 0.5 * (1 + std::cos(pi * dist / spec.rolloff));
            else
                gain = 0;
        }
        if (in) ++inside;
        mask.values[i] = spec.floor + (1 - spec.floor) * gain;
    }
    if (inside == 0) throw Error(Errc::empty_passband, "no frequency grid point falls inside the passband");
    return mask;
}

Field apply_filter(const Field& r_in, const Field& mask, const Params& p) {
    require_dims(p, r_in.grid);
    const Grid& wg = mask.grid;
    if (wg.dims() != r_in.grid.dims()) throw Error(Errc::grid_mismatch, "mask and signal differ in dimension");
    const auto plan = make_plan(p, r_in.grid, wg, Path::fast);
    for (std::size_t k = 0; k < wg.dims(); ++k)
        if (!plan.commensurate[k])
            throw Error(Errc::grid_mismatch, "mask grid is not the reciprocal grid of the signal on axis " +
                                                 std::to_string(k + 1));
    Field R = qpft_fast(r_in, p, wg);
    for (std::size_t i = 0; i < R.size(); ++i) R.values[i] *= mask.values[i];
    return iqpft(R, p, r_in.grid);
}

double snr_db(const Field& clean, const Field& observed) {
    if (clean.size() != observed.size()) throw Error(Errc::grid_mismatch, "snr: size mismatch");
    double s = 0, n = 0;
    for (std::size_t i = 0; i < clean.size(); ++i) {
        s += std::norm(clean.values[i]);
        n += std::norm(observed.values[i] - clean.values[i]);
    }
    return 10.0 * std::log10(s / n);
}

}  // namespace qpft
