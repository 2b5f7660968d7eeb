#include "qpft/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace qpft::oracle {

cplx GaussianSpec::operator()(std::span<const double> x) const {
    double s = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double t = x[k] - center[k];
        s += width[k] * t * t;
    }
    return amplitude * std::exp(-s);
}

Field sample_gaussian(const GaussianSpec& g, const Grid& grid) {
    if (g.center.size() != grid.dims() || g.width.size() != grid.dims())
        throw Error(Errc::dim_mismatch, "gaussian spec dimension does not match grid");
    Field f(grid, Domain::space);
    std::vector<double> x(grid.dims());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid.coords(i, x);
        f.values[i] = g(x);
    }
    return f;
}

cplx gaussian_qpft_closed(const GaussianSpec& g, const Params& p, std::span<const double> omega) {
    if (omega.size() != p.dims() || g.center.size() != p.dims() || g.width.size() != p.dims())
        throw Error(Errc::dim_mismatch, "gaussian_qpft_closed: dimension mismatch");
    cplx r = g.amplitude;
    for (std::size_t k = 0; k < p.dims(); ++k) {
        const auto& q = p[k];
        const double w = omega[k], mu = g.center[k];
        if (!(g.width[k] > 0)) throw Error(Errc::invalid_argument, "gaussian width must be positive");
        // x = y + μ:  e^{i(aμ² + (bω+d)μ)} ∫ e^{−αy² + iβy} dy,  α = p − ia,  β = 2aμ + bω + d
        const cplx alpha(g.width[k], -q.a);
        const double beta = 2 * q.a * mu + q.b * w + q.d;
        const double outer = q.c * w * w + q.e * w + q.a * mu * mu + (q.b * w + q.d) * mu;
        const cplx integral = std::sqrt(pi / alpha) * std::exp(-beta * beta / (4.0 * alpha));
        r *= p.root(k) / std::sqrt(2 * pi) * std::polar(1.0, outer) * integral;
    }
    return r;
}

Field gaussian_qpft_closed(const GaussianSpec& g, const Params& p, const Grid& grid) {
    Field F(grid, Domain::frequency);
    std::vector<double> w(grid.dims());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid.coords(i, w);
        F.values[i] = gaussian_qpft_closed(g, p, w);
    }
    return F;
}

Field brute_qpft(const Field& f, const Params& p, const Grid& out) {
    require_dims(p, f.grid);
    require_dims(p, out);
    Field F(out, Domain::frequency);
    const double vol = f.grid.cell_volume();
    std::vector<double> w(p.dims()), x(p.dims());
    for (std::size_t m = 0; m < out.size(); ++m) {
        out.coords(m, w);
        cplx acc = 0;
        for (std::size_t n = 0; n < f.size(); ++n) {
            f.grid.coords(n, x);
            acc += kernel_eval(p, w, x) * f.values[n];
        }
        F.values[m] = acc * vol;
    }
    return F;
}

namespace {

cplx rule_sum(std::span<const cplx> s, double h, Rule rule, std::size_t stride) {
    cplx acc = 0;
    std::size_t last = 0;
    for (std::size_t i = 0; i < s.size(); i += stride) {
        acc += s[i];
        last = i;
    }
    if (rule == Rule::trapezoid) acc -= 0.5 * (s.front() + s[last]);
    return acc * h * static_cast<double>(stride);
}

// Gauss–Kronrod 7/15 nodes and weights on [−1, 1].
constexpr double xgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                           0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                           0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                           0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double wgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                           0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                           0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                           0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                          0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Piece {
    double lo, hi;
    cplx value;
    double error;
    bool operator<(const Piece& o) const { return error < o.error; }
};

Piece gk15(const std::function<cplx(double)>& fn, double lo, double hi) {
    const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
    const cplx fc = fn(c);
    cplx kron = fc * wgk[7], gauss = fc * wg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * xgk[j];
        const cplx s = fn(c - dx) + fn(c + dx);
        kron += wgk[j] * s;
        if (j % 2 == 1) gauss += wg[j / 2] * s;
    }
    kron *= h;
    gauss *= h;
    return {lo, hi, kron, std::abs(kron - gauss)};
}

}  // namespace

QuadResult brute_quadrature(std::span<const cplx> samples, double step, Rule rule) {
    if (samples.empty()) return {0.0, 0.0};
    if (rule == Rule::adaptive)
        throw Error(Errc::invalid_argument, "adaptive quadrature needs a callable integrand");
    for (const auto& v : samples)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw Error(Errc::non_finite, "integrand is not finite");
    const cplx fine = rule_sum(samples, step, rule, 1);
    double err = 0;
    if (samples.size() >= 3 && (samples.size() - 1) % 2 == 0) err = std::abs(fine - rule_sum(samples, step, rule, 2));
    return {fine, err};
}

QuadResult adaptive_quadrature(const std::function<cplx(double)>& fn, double lo, double hi, double abs_tol,
                               double rel_tol, int max_intervals) {
    std::priority_queue<Piece> heap;
    Piece first = gk15(fn, lo, hi);
    cplx total = first.value;
    double err = first.error;
    heap.push(first);
    int intervals = 1;
    while (!std::isfinite(err) || err > std::max(abs_tol, rel_tol * std::abs(total))) {
        if (intervals >= max_intervals || !std::isfinite(std::abs(total)))
            throw Error(Errc::quadrature_nonconvergence,
                        "adaptive quadrature did not converge: error estimate " + std::to_string(err));
        Piece worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        Piece l = gk15(fn, worst.lo, mid), r = gk15(fn, mid, worst.hi);
        total += l.value + r.value - worst.value;
        err += l.error + r.error - worst.error;
        heap.push(l);
        heap.push(r);
        ++intervals;
    }
    // Re-sum to shed drift from the incremental updates.
    cplx sum = 0;
    double e = 0;
    while (!heap.empty()) {
        sum += heap.top().value;
        e += heap.top().error;
        heap.pop();
    }
    return {sum, e};
}

}  // namespace qpft::oracle
