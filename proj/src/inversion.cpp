#include "qpft/inversion.hpp"

#include <cmath>

#include "qpft/convolution.hpp"
#include "qpft/oracle.hpp"
#include "qpft/transform.hpp"

namespace qpft {

namespace {

void require_positive(double lambda) {
    if (!(lambda > 0) || !std::isfinite(lambda))
        throw Error(Errc::non_positive_lambda, "mollifier lambda must be positive");
}

const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * pi);

}  // namespace

cplx mollifier_closed(const Params& p, double lambda, std::span<const double> omega) {
    require_positive(lambda);
    if (omega.size() != p.dims()) throw Error(Errc::dim_mismatch, "mollifier point dimension mismatch");
    double lorentz = 1.0;
    for (std::size_t k = 0; k < p.dims(); ++k) {
        const double bw = p[k].b * omega[k];
        lorentz *= 2.0 * lambda / (lambda * lambda + bw * bw);
    }
    const double norm = std::pow(2.0 * pi, -0.5 * static_cast<double>(p.dims()));
    return p.c_neg_lambda() * norm * std::polar(1.0, chirp_phase(-1.0, ChirpKind::ad, p, omega)) * lorentz;
}

Field mollifier_closed(const Params& p, double lambda, const Grid& grid) {
    require_positive(lambda);
    require_dims(p, grid);
    Field h(grid, Domain::space);
    std::vector<double> w(grid.dims());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid.coords(i, w);
        h.values[i] = mollifier_closed(p, lambda, w);
    }
    return h;
}

cplx mollifier_quadrature(const Params& p, double lambda, std::span<const double> omega) {
    require_positive(lambda);
    if (omega.size() != p.dims()) throw Error(Errc::dim_mismatch, "mollifier point dimension mismatch");
    const double X = 40.0 / lambda;
    const double tail = 2.0 * std::exp(-lambda * X) / lambda;
    if (tail > 1e-10)
        throw Error(Errc::quadrature_nonconvergence, "mollifier tail estimate " + std::to_string(tail) + " exceeds 1e-10");
    const Params neg = p.negated();
    cplx result = 1.0;
    for (std::size_t k = 0; k < p.dims(); ++k) {
        const Quintuple q = p[k], qn = neg[k];
        const cplx rn = neg.root(k);
        const double w = omega[k];
        auto integrand = [&](double x) {
            const double ce = q.c * x * x + q.e * x;
            // K_{−Λ} with the integration variable in the first slot.
            return std::exp(-lambda * std::abs(x)) * std::polar(1.0, ce) * kernel1(qn, rn, x, w);
        };
        const auto left = oracle::adaptive_quadrature(integrand, -X, 0.0, 1e-13, 1e-12, 200000);
        const auto right = oracle::adaptive_quadrature(integrand, 0.0, X, 1e-13, 1e-12, 200000);
        result *= left.value + right.value;
    }
    return result;
}

double mollifier_coverage(const Params& p, double lambda, const Grid& grid) {
    require_positive(lambda);
    require_dims(p, grid);
    double frac = 1.0;
    for (std::size_t k = 0; k < p.dims(); ++k) {
        const Axis& a = grid.axis(k);
        const double s = std::abs(p[k].b) / lambda;
        const double lo = a.origin - 0.5 * a.step, hi = a.last() + 0.5 * a.step;
        frac *= (std::atan(s * hi) - std::atan(s * lo)) / pi;
    }
    return frac;
}

UnitMass mollifier_unit_mass(const Params& p, double lambda, double half_width, double step) {
    require_positive(lambda);
    if (!(half_width > 0) || !(step > 0)) throw Error(Errc::invalid_argument, "unit mass: bad grid factors");
    cplx mass = 1.0;
    double coverage = 1.0;
    for (std::size_t k = 0; k < p.dims(); ++k) {
        const Quintuple& q = p[k];
        const double dw = step * lambda / std::abs(q.b);
        const long J = static_cast<long>(std::floor(half_width / step));
        const cplx pref = p.root(k) * inv_sqrt_2pi * p.root_neg(k) * inv_sqrt_2pi * dw;
        // The chirp e^{a,d}_{−1} in h cancels against e^{a,d}_1 pointwise.
        CompensatedSum s;
        for (long j = -J; j <= J; ++j) {
            const double bw = q.b * static_cast<double>(j) * dw;
            s.add(2.0 * lambda / (lambda * lambda + bw * bw));
        }
        mass *= pref * s.value();
        const double W = (static_cast<double>(J) + 0.5) * step;
        coverage *= 2.0 * std::atan(W) / pi;
    }
    return {mass, coverage};
}

double mollifier_lp(const Params& p, double lambda, double power, const Grid& grid) {
    const Field h = mollifier_closed(p, lambda, grid);
    double s = 0;
    for (const auto& v : h.values) s += std::pow(std::abs(v), power);
    return s * grid.cell_volume() * std::pow(2.0 * pi, -0.5 * static_cast<double>(p.dims()));
}

double mollifier_lp_bound(const Params& p, double lambda, double power) {
    require_positive(lambda);
    const double n = static_cast<double>(p.dims());
    return std::pow(std::abs(p.c_neg_lambda()), power - 2.0) / std::pow(lambda, power * n - n);
}

Field approx_identity_apply(const Field& f, const Params& p, double mollifier_lambda) {
    const Field h = mollifier_closed(p, mollifier_lambda, f.grid);
    Field out = conv_type3(f, h, p, 1.0);
    out.domain = Domain::space;
    return out;
}

double product_theorem_check(const Field& f, const Field& g, const Params& p, double lambda) {
    if (!f.grid.same_as(g.grid)) throw Error(Errc::grid_mismatch, "product theorem needs f and g on one grid");
    const Params scaled = p.scaled(lambda);
    const Grid wg = default_frequency_grid(f.grid, scaled);
    const Field F = qpft_fast(f, scaled, wg), G = qpft_fast(g, scaled, wg);
    const Field lhs = conv_type3(F, G, p.swapped(), lambda);
    Field fg = f;
    std::vector<double> x(f.grid.dims());
    for (std::size_t i = 0; i < fg.size(); ++i) {
        f.grid.coords(i, x);
        fg.values[i] *= g.values[i] * std::polar(1.0, chirp_phase(lambda * lambda, ChirpKind::ad, p, x));
    }
    const Field rhs = qpft_fast(fg, scaled, wg);
    return rel_l2(lhs, rhs);
}

}  // namespace qpft
