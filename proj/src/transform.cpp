#include "qpft/transform.hpp"

#include <cmath>
#include <limits>

#include "qpft/fft.hpp"

namespace qpft {

namespace {

const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * pi);

double commensurate_gap(const Quintuple& q, const Axis& in, const Axis& out) {
    const double t = std::abs(q.b) * in.step * out.step * static_cast<double>(in.count);
    return std::abs(t - 2.0 * pi) / (2.0 * pi);
}

void check_input(const Field& f, const Params& p, const Grid& out, Diagnostics* diag) {
    require_dims(p, f.grid);
    require_dims(p, out);
    f.require_finite();
    if (diag) {
        diag->edge_energy = edge_energy(f);
        if (diag->edge_energy > 1e-10)
            diag->warnings.push_back("input edge energy " + std::to_string(diag->edge_energy) +
                                     " exceeds 1e-10; the signal may be truncated");
    }
}

void line_direct(const Quintuple& q, cplx root, const Axis& in, const Axis& out, std::span<const cplx> f,
                 std::span<cplx> F) {
    const cplx pref = root * inv_sqrt_2pi * in.step;
    for (std::size_t m = 0; m < out.count; ++m) {
        const double w = out(m);
        cplx acc = 0;
        for (std::size_t n = 0; n < in.count; ++n) {
            const double x = in(n);
            CompensatedSum s;
            s.add(q.a * x * x);
            s.add(q.b * x * w);
            s.add(q.c * w * w);
            s.add(q.d * x);
            s.add(q.e * w);
            acc += f[n] * std::polar(1.0, s.value());
        }
        F[m] = pref * acc;
    }
}

void line_fast(const Quintuple& q, cplx root, const Axis& in, const Axis& out, std::span<const cplx> f,
               std::span<cplx> F) {
    const double w0 = out.origin, x0 = in.origin;
    std::vector<cplx> u(in.count);
    for (std::size_t n = 0; n < in.count; ++n) {
        const double x = in(n);
        CompensatedSum s;
        s.add(q.a * x * x);
        s.add(q.d * x);
        s.add(q.b * w0 * x);
        u[n] = f[n] * std::polar(1.0, s.value());
    }
    const double beta = q.b * in.step * out.step;
    const double twopi_over_m = 2.0 * pi / static_cast<double>(in.count);
    const double tight = 64 * std::numeric_limits<double>::epsilon();
    std::vector<cplx> y;
    if (in.count == out.count && std::abs(std::abs(beta) - twopi_over_m) <= tight * twopi_over_m) {
        y = std::move(u);
        fft(y, beta > 0);
    } else {
        y = chirp_z(u, beta, out.count);
    }
    const cplx pref = root * inv_sqrt_2pi * in.step;
    for (std::size_t m = 0; m < out.count; ++m) {
        const double w = out(m);
        CompensatedSum s;
        s.add(q.c * w * w);
        s.add(q.e * w);
        s.add(q.b * x0 * (static_cast<double>(m) * out.step));
        F[m] = pref * std::polar(1.0, s.value()) * y[m];
    }
}

// Separable sweep: one 1-D transform per axis.
Field sweep(const Field& f, const Params& p, const Grid& out, Path path, Domain tag) {
    std::vector<std::size_t> shape = f.grid.shape();
    std::vector<cplx> v = f.values;
    for (std::size_t k = 0; k < p.dims(); ++k) {
        const Axis &ain = f.grid.axis(k), &aout = out.axis(k);
        const Quintuple& q = p[k];
        const cplx root = p.root(k);
        v = map_axis(v, shape, k, aout.count, [&](std::span<const cplx> li, std::span<cplx> lo) {
            if (path == Path::direct)
                line_direct(q, root, ain, aout, li, lo);
            else
                line_fast(q, root, ain, aout, li, lo);
        });
        shape[k] = aout.count;
    }
    return Field(out, std::move(v), tag);
}

Grid reciprocal_grid(const Grid& g, const Params& p) {
    require_dims(p, g);
    std::vector<Axis> axes;
    for (std::size_t k = 0; k < g.dims(); ++k) {
        const Axis& a = g.axis(k);
        const double step = 2.0 * pi / (std::abs(p[k].b) * a.step * static_cast<double>(a.count));
        axes.push_back({-static_cast<double>(a.count / 2) * step, step, a.count});
    }
    return Grid(std::move(axes));
}

}  // namespace

TransformPlan make_plan(const Params& p, const Grid& in, const Grid& out, Path path) {
    require_dims(p, in);
    require_dims(p, out);
    TransformPlan plan{p, in, out, path, {}};
    for (std::size_t k = 0; k < p.dims(); ++k)
        plan.commensurate.push_back(in.axis(k).count == out.axis(k).count &&
                                    commensurate_gap(p[k], in.axis(k), out.axis(k)) <= 1e-9);
    return plan;
}

Grid default_frequency_grid(const Grid& x, const Params& p) { return reciprocal_grid(x, p); }
Grid default_space_grid(const Grid& w, const Params& p) { return reciprocal_grid(w, p); }

Field qpft_direct(const Field& f, const Params& p, const Grid& out, Diagnostics* diag) {
    check_input(f, p, out, diag);
    return sweep(f, p, out, Path::direct, Domain::frequency);
}

Field qpft_fast(const Field& f, const Params& p, const Grid& out, bool allow_bluestein, Diagnostics* diag) {
    check_input(f, p, out, diag);
    if (!allow_bluestein) {
        auto plan = make_plan(p, f.grid, out, Path::fast);
        for (std::size_t k = 0; k < p.dims(); ++k)
            if (!plan.commensurate[k])
                throw Error(Errc::incommensurate_grid,
                            "axis " + std::to_string(k + 1) + " is not commensurate and chirp-z is disabled");
    }
    return sweep(f, p, out, Path::fast, Domain::frequency);
}

Field forward(const Field& f, const Params& p, const Grid& out, Path path, Diagnostics* diag) {
    return path == Path::direct ? qpft_direct(f, p, out, diag) : qpft_fast(f, p, out, true, diag);
}

Field forward(const Field& f, const Params& p, Path path) {
    return forward(f, p, default_frequency_grid(f.grid, p), path);
}

Field iqpft(const Field& F, const Params& p, const Grid& out, Path path, Diagnostics* diag) {
    const Params dual = p.swapped();
    check_input(F, dual, out, diag);
    return sweep(F, dual, out, path, Domain::space);
}

Field iqpft(const Field& F, const Params& p, Path path) {
    return iqpft(F, p, default_space_grid(F.grid, p), path);
}

double parseval_residual(const Field& f, const Params& p, const Grid& out) {
    const double nf = norm2(f);
    if (nf == 0) throw Error(Errc::zero_signal, "parseval_residual: zero signal");
    const double nF = norm2(qpft_fast(f, p, out));
    return std::abs(nf * nf - nF * nF) / (nf * nf);
}

namespace {

double shell_energy(const Field& f, double shell, bool right_only) {
    const auto shape = f.grid.shape();
    std::vector<std::size_t> width;
    for (auto m : shape) width.push_back(static_cast<std::size_t>(std::ceil(shell * static_cast<double>(m))));
    double total = 0, edge = 0;
    std::vector<std::size_t> idx(shape.size(), 0);
    for (std::size_t i = 0; i < f.size(); ++i) {
        std::size_t r = i;
        bool in_shell = false;
        for (std::size_t k = shape.size(); k-- > 0;) {
            idx[k] = r % shape[k];
            r /= shape[k];
            if (idx[k] + width[k] >= shape[k] || (!right_only && idx[k] < width[k])) in_shell = true;
        }
        const double e = std::norm(f.values[i]);
        total += e;
        if (in_shell) edge += e;
    }
    return total == 0 ? 0.0 : edge / total;
}

}  // namespace

double edge_energy(const Field& f, double shell) { return shell_energy(f, shell, false); }
double right_edge_energy(const Field& f, double shell) { return shell_energy(f, shell, true); }

}  // namespace qpft
