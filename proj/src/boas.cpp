#include "qpft/boas.hpp"

#include <cmath>

#include "qpft/convolution.hpp"
#include "qpft/fft.hpp"
#include "qpft/transform.hpp"

namespace qpft {

namespace {

Field apply_b(const Field& f, const Params& p) {
    std::vector<double> x(f.grid.dims());
    std::vector<cplx> u = f.values;
    for (std::size_t i = 0; i < u.size(); ++i) {
        f.grid.coords(i, x);
        u[i] *= std::polar(1.0, chirp_phase(1.0, ChirpKind::ad, p, x));
    }
    const auto shape = f.grid.shape();
    for (std::size_t k = 0; k < shape.size(); ++k) {
        const double h = f.grid.axis(k).step;
        u = map_axis(u, shape, k, shape[k], [h](std::span<const cplx> in, std::span<cplx> out) {
            const std::size_t M = in.size();
            CompensatedSum re, im;
            out[M - 1] = 0;
            for (std::size_t j = M - 1; j-- > 0;) {
                const cplx seg = 0.5 * h * (in[j] + in[j + 1]);
                re.add(seg.real());
                im.add(seg.imag());
                out[j] = {re.value(), im.value()};
            }
        });
    }
    for (std::size_t i = 0; i < u.size(); ++i) {
        f.grid.coords(i, x);
        u[i] *= std::polar(1.0, chirp_phase(-1.0, ChirpKind::ad, p, x));
    }
    return Field(f.grid, std::move(u), Domain::space);
}

}  // namespace

Field boas_transform(const Field& f, const Params& p) {
    require_dims(p, f.grid);
    f.require_finite();
    const double edge = right_edge_energy(f);
    if (edge > 1e-8)
        throw Error(Errc::edge_mass, "right-edge energy " + std::to_string(edge) + " exceeds 1e-8");
    return apply_b(f, p);
}

Field delta_op(const Field& f, const Params& p) {
    require_dims(p, f.grid);
    f.require_finite();
    Field g = f;
    std::vector<double> x(f.grid.dims());
    for (std::size_t k = 0; k < p.dims(); ++k) {
        double high = 0;
        Field dg = spectral_derivative(g, k, &high);
        if (high > 1e-10)
            throw Error(Errc::resolution, "axis " + std::to_string(k + 1) + ": " + std::to_string(high) +
                                              " of the energy is near Nyquist; refine the grid");
        for (std::size_t i = 0; i < g.size(); ++i) {
            f.grid.coords(i, x);
            dg.values[i] += cplx(0.0, 2.0 * p[k].a * x[k] + p[k].d) * g.values[i];
        }
        g = std::move(dg);
    }
    if (p.dims() % 2 == 1)
        for (auto& v : g.values) v = -v;
    return g;
}

double spectral_gap(const Field& F, const Params& p) {
    require_dims(p, F.grid);
    const double thr = 1e-8 * max_abs(F);
    std::vector<double> inf(p.dims(), INFINITY), w(p.dims());
    for (std::size_t i = 0; i < F.size(); ++i) {
        if (!(std::abs(F.values[i]) > thr)) continue;
        F.grid.coords(i, w);
        for (std::size_t k = 0; k < p.dims(); ++k) inf[k] = std::min(inf[k], std::abs(p[k].b * w[k]));
    }
    double g = 1.0;
    for (double v : inf) g *= v;
    return g;
}

BoasGrowth boas_growth(const Field& f, const Params& p, int n_max, BoasState* state) {
    if (n_max < 1 || n_max > 12) throw Error(Errc::invalid_argument, "n_max must lie in 1..12");
    require_dims(p, f.grid);
    f.require_finite();
    const Field F = qpft_fast(f, p, default_frequency_grid(f.grid, p));
    BoasGrowth out;
    out.gamma_meas = spectral_gap(F, p);

    bool gap = true;
    const double thr = 1e-8 * max_abs(F);
    std::vector<double> w(p.dims());
    for (std::size_t i = 0; i < F.size() && gap; ++i) {
        if (!(std::abs(F.values[i]) > thr)) continue;
        F.grid.coords(i, w);
        for (std::size_t k = 0; k < p.dims(); ++k)
            if (std::abs(w[k]) <= F.grid.axis(k).step * (1 + 1e-9)) gap = false;
    }
    if (!gap) {
        // Norms of Bⁿf from the transform side, ‖Q(Bⁿf)‖ = ‖Qf / Π(ib_kω_k)ⁿ‖,
        // over the points off the ω_k = 0 hyperplanes.
        std::vector<double> roots;
        double base = 0;
        for (const auto& v : F.values) base += std::norm(v);
        for (int n = 1; n <= n_max; ++n) {
            double s = 0;
            for (std::size_t i = 0; i < F.size(); ++i) {
                F.grid.coords(i, w);
                double sym = 1.0;
                for (std::size_t k = 0; k < p.dims(); ++k) sym *= std::abs(p[k].b * w[k]);
                if (sym == 0) continue;
                s += std::norm(F.values[i]) / std::pow(sym, 2.0 * n);
            }
            roots.push_back(std::pow(std::sqrt(s / base), 1.0 / n));
        }
        throw NoSpectralGap("transform support reaches the origin; the growth rate diverges", std::move(roots));
    }

    Field u = boas_transform(f, p);
    out.norms.push_back(norm2(f));
    if (state) {
        state->base = f;
        state->iterates = {f};
    }
    for (int n = 1; n <= n_max; ++n) {
        if (n > 1) u = apply_b(u, p);
        const double nu = norm2(u);
        if (!(nu <= 1e12 && nu >= 1e-12)) {
            out.partial = true;
            break;
        }
        out.norms.push_back(nu);
        if (state) state->iterates.push_back(u);
    }
    if (state) state->norms = out.norms;

    const int n_done = static_cast<int>(out.norms.size()) - 1;
    if (n_done < 1) throw Error(Errc::zero_signal, "no usable iterates for the growth fit");
    const int first = n_done >= 3 ? (n_done + 1) / 2 : 0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int cnt = n_done - first + 1;
    for (int n = first; n <= n_done; ++n) {
        const double y = std::log(out.norms[static_cast<std::size_t>(n)]);
        sx += n;
        sy += y;
        sxx += static_cast<double>(n) * n;
        sxy += n * y;
    }
    const double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    out.R_estimate = std::exp(slope);
    out.gamma_estimate = 1.0 / out.R_estimate;
    return out;
}

}  // namespace qpft
