#include "qpft/convolution.hpp"

#include <algorithm>
#include <cmath>

#include "qpft/fft.hpp"

namespace qpft {

ConvType parse_conv_type(const std::string& name) {
    if (name == "plain") return ConvType::plain;
    if (name == "type1") return ConvType::type1;
    if (name == "type2") return ConvType::type2;
    if (name == "type2-dual") return ConvType::type2_dual;
    if (name == "type3") return ConvType::type3;
    throw Error(Errc::invalid_argument, "unknown convolution kind '" + name + "'");
}

const char* conv_type_name(ConvType t) {
    switch (t) {
        case ConvType::plain: return "plain";
        case ConvType::type1: return "type1";
        case ConvType::type2: return "type2";
        case ConvType::type2_dual: return "type2-dual";
        case ConvType::type3: return "type3";
    }
    return "?";
}

namespace {

const double sqrt2 = std::sqrt(2.0);

struct FullConv {
    Grid grid;
    std::vector<cplx> values;  // unnormalized discrete linear convolution
};

FullConv linear_conv(const Field& f, const Field& g) {
    if (f.grid.dims() != g.grid.dims()) throw Error(Errc::dim_mismatch, "convolution operands differ in dimension");
    const std::size_t n = f.grid.dims();
    std::vector<std::size_t> sf = f.grid.shape(), sg = g.grid.shape(), full(n), pad(n);
    std::vector<Axis> axes;
    for (std::size_t k = 0; k < n; ++k) {
        const Axis &a = f.grid.axis(k), &b = g.grid.axis(k);
        if (std::abs(a.step - b.step) > 1e-12 * a.step)
            throw Error(Errc::step_mismatch, "axis " + std::to_string(k + 1) + ": steps " + std::to_string(a.step) +
                                                 " and " + std::to_string(b.step) + " differ");
        full[k] = sf[k] + sg[k] - 1;
        pad[k] = next_pow2(full[k]);
        axes.push_back({a.origin + b.origin, a.step, full[k]});
    }
    std::size_t total = 1;
    for (auto p : pad) total *= p;
    auto embed = [&](const Field& src, const std::vector<std::size_t>& shape) {
        std::vector<cplx> out(total);
        std::vector<std::size_t> idx(n);
        for (std::size_t i = 0; i < src.size(); ++i) {
            std::size_t r = i, flat = 0, mul = 1;
            for (std::size_t k = n; k-- > 0;) {
                idx[k] = r % shape[k];
                r /= shape[k];
            }
            for (std::size_t k = n; k-- > 0;) {
                flat += idx[k] * mul;
                mul *= pad[k];
            }
            out[flat] = src.values[i];
        }
        return out;
    };
    std::vector<cplx> A = embed(f, sf), B = embed(g, sg);
    fftn(A, pad, false);
    fftn(B, pad, false);
    for (std::size_t i = 0; i < total; ++i) A[i] *= B[i];
    fftn(A, pad, true);
    const double scale = 1.0 / static_cast<double>(total);
    Grid fg(axes);
    std::vector<cplx> v(fg.size());
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < v.size(); ++i) {
        std::size_t r = i, flat = 0, mul = 1;
        for (std::size_t k = n; k-- > 0;) {
            idx[k] = r % full[k];
            r /= full[k];
        }
        for (std::size_t k = n; k-- > 0;) {
            flat += idx[k] * mul;
            mul *= pad[k];
        }
        v[i] = A[flat] * scale;
    }
    return {fg, std::move(v)};
}

// Crops the full convolution to f's point count, starting at the cell closest to f's origin.
Field crop(const FullConv& c, const Grid& like, Domain tag, Diagnostics* diag) {
    const std::size_t n = like.dims();
    std::vector<std::size_t> start(n), full = c.grid.shape();
    std::vector<Axis> axes;
    for (std::size_t k = 0; k < n; ++k) {
        const Axis &fa = c.grid.axis(k), &la = like.axis(k);
        const double off = std::round((la.origin - fa.origin) / fa.step);
        const double maxs = static_cast<double>(fa.count - la.count);
        start[k] = static_cast<std::size_t>(std::clamp(off, 0.0, maxs));
        axes.push_back({fa(start[k]), fa.step, la.count});
    }
    Field out(Grid(axes), tag);
    double total = 0, kept = 0;
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < c.values.size(); ++i) total += std::norm(c.values[i]);
    for (std::size_t i = 0; i < out.size(); ++i) {
        std::size_t r = i;
        for (std::size_t k = n; k-- > 0;) {
            idx[k] = r % like.axis(k).count + start[k];
            r /= like.axis(k).count;
        }
        std::size_t flat = 0;
        for (std::size_t k = 0; k < n; ++k) flat = flat * full[k] + idx[k];
        out.values[i] = c.values[flat];
        kept += std::norm(out.values[i]);
    }
    if (diag) diag->discarded_tail = total > 0 ? std::max(0.0, (total - kept) / total) : 0.0;
    return out;
}

template <class PhaseFn>
Field times_phase(const Field& f, PhaseFn&& phase) {
    Field out = f;
    std::vector<double> x(f.grid.dims());
    for (std::size_t i = 0; i < f.size(); ++i) {
        f.grid.coords(i, x);
        out.values[i] *= std::polar(1.0, phase(std::span<const double>(x)));
    }
    return out;
}

double quad_phase(const Params& p, std::span<const double> x, bool use_c, double scale) {
    CompensatedSum s;
    for (std::size_t k = 0; k < x.size(); ++k) s.add(scale * (use_c ? p[k].c : p[k].a) * x[k] * x[k]);
    return s.value();
}

void check_operands(const Field& f, const Field& g, const Params* p) {
    if (f.grid.dims() != g.grid.dims()) throw Error(Errc::dim_mismatch, "convolution operands differ in dimension");
    if (p) require_dims(*p, f.grid);
    f.require_finite();
    g.require_finite();
}

double conv_norm(std::size_t n) { return std::pow(2.0 * pi, -0.5 * static_cast<double>(n)); }

// Band-limited (periodic Dirichlet) interpolation along one axis.
std::vector<cplx> resample_axis(const std::vector<cplx>& v, std::span<const std::size_t> shape, std::size_t axis,
                                const std::vector<double>& targets) {
    const std::size_t P = shape[axis];
    const bool even = P % 2 == 0;
    const double dP = static_cast<double>(P);
    return map_axis(v, shape, axis, targets.size(), [&](std::span<const cplx> in, std::span<cplx> out) {
        for (std::size_t m = 0; m < targets.size(); ++m) {
            const double t = targets[m];
            if (t < -0.5 || t > dP - 0.5) {
                out[m] = 0;
                continue;
            }
            const double tr = std::round(t);
            if (std::abs(t - tr) < 1e-12) {
                out[m] = in[static_cast<std::size_t>(tr)];
                continue;
            }
            const double st = std::sin(pi * t);
            cplx acc = 0;
            for (std::size_t j = 0; j < P; ++j) {
                const double s = pi * (t - static_cast<double>(j)) / dP;
                const double den = even ? dP * std::tan(s) : dP * std::sin(s);
                const double sj = (j % 2 == 0) ? st : -st;
                acc += in[j] * (sj / den);
            }
            out[m] = acc;
        }
    });
}

// Evaluates the full convolution at √2·x for x on `like`.
Field sample_at_sqrt2(const FullConv& c, const Grid& like, Domain tag) {
    const std::size_t n = like.dims();
    std::vector<std::size_t> shape = c.grid.shape();
    std::vector<cplx> v = c.values;
    bool outside = false;
    for (std::size_t k = 0; k < n; ++k) {
        const Axis &ca = c.grid.axis(k), &la = like.axis(k);
        std::vector<double> t(la.count);
        for (std::size_t j = 0; j < la.count; ++j) {
            t[j] = (sqrt2 * la(j) - ca.origin) / ca.step;
            if (t[j] < -0.5 || t[j] > static_cast<double>(ca.count) - 0.5) outside = true;
        }
        v = resample_axis(v, shape, k, t);
        shape[k] = la.count;
    }
    if (outside) {
        // Targets past the computed span are taken as zero; that is only sound
        // when the convolution has already died out at its boundary.
        double peak = 0, edge = 0;
        const auto full = c.grid.shape();
        std::vector<std::size_t> idx(n);
        for (std::size_t i = 0; i < c.values.size(); ++i) {
            std::size_t r = i;
            bool rim = false;
            for (std::size_t k = n; k-- > 0;) {
                idx[k] = r % full[k];
                r /= full[k];
                const std::size_t w = std::max<std::size_t>(1, full[k] / 50);
                if (idx[k] < w || idx[k] + w >= full[k]) rim = true;
            }
            const double a = std::abs(c.values[i]);
            peak = std::max(peak, a);
            if (rim) edge = std::max(edge, a);
        }
        if (edge > 1e-8 * peak)
            throw Error(Errc::interpolation_overrun,
                        "sqrt(2)-scaled arguments leave the convolution span while its boundary still carries mass");
    }
    return Field(like, std::move(v), tag);
}

}  // namespace

Field conv_plain(const Field& f, const Field& g, Diagnostics* diag) {
    check_operands(f, g, nullptr);
    FullConv c = linear_conv(f, g);
    const double s = f.grid.cell_volume() * conv_norm(f.grid.dims());
    for (auto& v : c.values) v *= s;
    return crop(c, f.grid, f.domain, diag);
}

Field conv_type1(const Field& f, const Field& g, const Params& p, Diagnostics* diag) {
    check_operands(f, g, &p);
    auto pre = [&](std::span<const double> x) { return quad_phase(p, x, false, 1.0); };
    Field h = conv_plain(times_phase(f, pre), times_phase(g, pre), diag);
    const cplx C = p.c_lambda();
    h = times_phase(h, [&](std::span<const double> x) { return quad_phase(p, x, false, -1.0); });
    for (auto& v : h.values) v *= C;
    return h;
}

Field conv_type3(const Field& f, const Field& g, const Params& p, double lambda, Diagnostics* diag) {
    if (lambda == 0.0 || !std::isfinite(lambda)) throw Error(Errc::zero_lambda, "type3 convolution needs lambda != 0");
    check_operands(f, g, &p);
    const double l2 = lambda * lambda;
    auto pre = [&](std::span<const double> x) { return chirp_phase(l2, ChirpKind::ad, p, x); };
    Field h = conv_plain(times_phase(f, pre), times_phase(g, pre), diag);
    h = times_phase(h, [&](std::span<const double> x) { return chirp_phase(-l2, ChirpKind::ad, p, x); });
    const cplx C = std::pow(std::abs(lambda), static_cast<double>(p.dims())) * p.c_lambda();
    for (auto& v : h.values) v *= C;
    return h;
}

Field conv_type2(const Field& f, const Field& g, const Params& p, Diagnostics* diag) {
    check_operands(f, g, &p);
    auto pre = [&](std::span<const double> x) { return quad_phase(p, x, false, 1.0); };
    FullConv c = linear_conv(times_phase(f, pre), times_phase(g, pre));
    const double vol = f.grid.cell_volume();
    for (auto& v : c.values) v *= vol;
    Field h = sample_at_sqrt2(c, f.grid, Domain::space);
    cplx P = 1.0;
    for (std::size_t k = 0; k < p.dims(); ++k) P *= std::sqrt(cplx(p[k].b) / cplx(0.0, pi));
    h = times_phase(h, [&](std::span<const double> x) {
        CompensatedSum s;
        for (std::size_t k = 0; k < x.size(); ++k) {
            s.add((sqrt2 - 1.0) * p[k].d * x[k]);
            s.add(-p[k].a * x[k] * x[k]);
        }
        return s.value();
    });
    for (auto& v : h.values) v *= P;
    if (diag) diag->discarded_tail = 0;
    return h;
}

Field dual_type2(const Field& F, const Field& G, const Params& p, Diagnostics* diag) {
    check_operands(F, G, &p);
    auto pre = [&](std::span<const double> w) { return quad_phase(p, w, true, -1.0); };
    FullConv c = linear_conv(times_phase(F, pre), times_phase(G, pre));
    const double vol = F.grid.cell_volume();
    for (auto& v : c.values) v *= vol;
    Field h = sample_at_sqrt2(c, F.grid, Domain::frequency);
    cplx P = 1.0;
    for (std::size_t k = 0; k < p.dims(); ++k) P *= std::sqrt(cplx(0.0, p[k].b) / pi);
    h = times_phase(h, [&](std::span<const double> w) {
        CompensatedSum s;
        for (std::size_t k = 0; k < w.size(); ++k) {
            s.add(-(sqrt2 - 1.0) * p[k].e * w[k]);
            s.add(p[k].c * w[k] * w[k]);
        }
        return s.value();
    });
    for (auto& v : h.values) v *= P;
    if (diag) diag->discarded_tail = 0;
    return h;
}

Field convolve(const ConvKind& kind, const Field& f, const Field& g, const Params& p, Diagnostics* diag) {
    switch (kind.type) {
        case ConvType::plain: return conv_plain(f, g, diag);
        case ConvType::type1: return conv_type1(f, g, p, diag);
        case ConvType::type2: return conv_type2(f, g, p, diag);
        case ConvType::type2_dual: return dual_type2(f, g, p, diag);
        case ConvType::type3: return conv_type3(f, g, p, kind.lambda, diag);
    }
    throw Error(Errc::unsupported_kind, "unknown convolution kind");
}

cplx SpectralSymbol::operator()(std::span<const double> w) const {
    if (w.size() != params.dims()) throw Error(Errc::dim_mismatch, "symbol point dimension mismatch");
    switch (kind.type) {
        case ConvType::type1: return std::polar(1.0, -chirp_phase(1.0, ChirpKind::ce, params, w));
        case ConvType::type3:
            return std::polar(1.0, -kind.lambda * kind.lambda * chirp_phase(1.0, ChirpKind::ce, params, w));
        case ConvType::type2: {
            CompensatedSum s;
            for (std::size_t k = 0; k < w.size(); ++k) s.add((1.0 - sqrt2) * params[k].e * w[k]);
            return std::polar(1.0, s.value());
        }
        default: throw Error(Errc::unsupported_kind, "no multiplicative symbol for this kind");
    }
}

Field SpectralSymbol::sample(const Grid& grid) const {
    require_dims(params, grid);
    Field out(grid, Domain::frequency);
    std::vector<double> w(grid.dims());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid.coords(i, w);
        out.values[i] = (*this)(w);
    }
    return out;
}

SpectralSymbol spectral_symbol(const ConvKind& kind, const Params& p) {
    switch (kind.type) {
        case ConvType::type1: return {kind, p, 1.0};
        case ConvType::type3:
            if (kind.lambda == 0.0) throw Error(Errc::zero_lambda, "type3 symbol needs lambda != 0");
            return {kind, p, 1.0};
        case ConvType::type2: return {kind, p, 1.0 / sqrt2};
        default:
            throw Error(Errc::unsupported_kind,
                        std::string(conv_type_name(kind.type)) + " has no pure multiplicative spectral symbol");
    }
}

Field translate(const Field& f, std::span<const long> cells) {
    const std::size_t n = f.grid.dims();
    if (cells.size() != n) throw Error(Errc::dim_mismatch, "translate: shift dimension mismatch");
    const auto shape = f.grid.shape();
    Field out(f.grid, f.domain);
    std::vector<long> idx(n);
    for (std::size_t i = 0; i < f.size(); ++i) {
        std::size_t r = i;
        bool inside = true;
        for (std::size_t k = n; k-- > 0;) {
            idx[k] = static_cast<long>(r % shape[k]) + cells[k];
            r /= shape[k];
            if (idx[k] < 0 || idx[k] >= static_cast<long>(shape[k])) inside = false;
        }
        if (!inside) continue;
        std::size_t flat = 0;
        for (std::size_t k = 0; k < n; ++k) flat = flat * shape[k] + static_cast<std::size_t>(idx[k]);
        out.values[flat] = f.values[i];
    }
    return out;
}

Field modulate_at(const Field& g, const Params& p, double lambda, std::span<const double> t) {
    require_dims(p, g.grid);
    const double l2 = lambda * lambda;
    return times_phase(g, [&](std::span<const double> x) {
        CompensatedSum s;
        for (std::size_t k = 0; k < x.size(); ++k) s.add(2.0 * l2 * p[k].a * x[k] * t[k]);
        return s.value();
    });
}

Field spectral_derivative(const Field& f, std::size_t axis, double* high_band) {
    if (axis >= f.grid.dims()) throw Error(Errc::dim_mismatch, "derivative axis out of range");
    const auto shape = f.grid.shape();
    const std::size_t M = shape[axis];
    const double h = f.grid.axis(axis).step;
    double total = 0, high = 0;
    std::vector<cplx> v = map_axis(f.values, shape, axis, M, [&](std::span<const cplx> in, std::span<cplx> out) {
        std::vector<cplx> line(in.begin(), in.end());
        fft(line, false);
        for (std::size_t m = 0; m < M; ++m) {
            long mm = static_cast<long>(m);
            if (2 * m > M) mm -= static_cast<long>(M);
            const double e = std::norm(line[m]);
            total += e;
            if (10 * std::abs(mm) > 4 * static_cast<long>(M)) high += e;
            double kappa = 2.0 * pi * static_cast<double>(mm) / (static_cast<double>(M) * h);
            if (M % 2 == 0 && 2 * m == M) kappa = 0;
            line[m] *= cplx(0.0, kappa);
        }
        fft(line, true);
        for (std::size_t m = 0; m < M; ++m) out[m] = line[m] / static_cast<double>(M);
    });
    if (high_band) *high_band = total > 0 ? high / total : 0.0;
    return Field(f.grid, std::move(v), f.domain);
}

Field times_coordinate(const Field& f, std::size_t axis) {
    Field out = f;
    std::vector<double> x(f.grid.dims());
    for (std::size_t i = 0; i < f.size(); ++i) {
        f.grid.coords(i, x);
        out.values[i] *= x[axis];
    }
    return out;
}

double derivative_identity_check(const Field& f, const Field& g, const Params& p, double lambda, std::size_t axis) {
    const Field fg = conv_type3(f, g, p, lambda);
    const Field lhs = spectral_derivative(fg, axis);
    Field rhs = conv_type3(spectral_derivative(f, axis), g, p, lambda);
    const Field xf_g = conv_type3(times_coordinate(f, axis), g, p, lambda);
    const Field x_fg = times_coordinate(fg, axis);
    const cplx coef(0.0, 2.0 * p[axis].a * lambda * lambda);
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs.values[i] += coef * (xf_g.values[i] - x_fg.values[i]);
    return rel_l2(lhs, rhs);
}

}  // namespace qpft
