#include "qpft/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qpft {

const char* errc_name(Errc c) noexcept {
    switch (c) {
        case Errc::ok: return "Ok";
        case Errc::zero_coupling: return "ZeroCoupling";
        case Errc::empty_params: return "EmptyParams";
        case Errc::dim_mismatch: return "DimMismatch";
        case Errc::zero_lambda: return "ZeroLambda";
        case Errc::non_finite: return "NonFinite";
        case Errc::incommensurate_grid: return "IncommensurateGrid";
        case Errc::zero_signal: return "ZeroSignal";
        case Errc::step_mismatch: return "StepMismatch";
        case Errc::interpolation_overrun: return "InterpolationOverrun";
        case Errc::unsupported_kind: return "UnsupportedKind";
        case Errc::non_positive_lambda: return "NonPositiveLambda";
        case Errc::quadrature_nonconvergence: return "QuadratureNonConvergence";
        case Errc::edge_mass: return "EdgeMass";
        case Errc::resolution: return "ResolutionError";
        case Errc::no_spectral_gap: return "NoSpectralGap";
        case Errc::singular_symbol: return "SingularSymbol";
        case Errc::empty_passband: return "EmptyPassband";
        case Errc::grid_mismatch: return "GridMismatch";
        case Errc::invalid_argument: return "InvalidArgument";
        case Errc::io: return "IoError";
    }
    return "Unknown";
}

bool errc_is_numeric(Errc c) noexcept {
    switch (c) {
        case Errc::non_finite:
        case Errc::interpolation_overrun:
        case Errc::quadrature_nonconvergence:
        case Errc::edge_mass:
        case Errc::resolution:
        case Errc::no_spectral_gap:
        case Errc::singular_symbol:
            return true;
        default:
            return false;
    }
}

void CompensatedSum::add(double v) noexcept {
    double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
        comp_ += (sum_ - t) + v;
    else
        comp_ += (v - t) + sum_;
    sum_ = t;
}

namespace {

const cplx minus_i{0.0, -1.0};
const cplx plus_i{0.0, 1.0};

}  // namespace

Params Params::validate(std::vector<Quintuple> raw) {
    if (raw.empty()) throw Error(Errc::empty_params, "parameter list is empty");
    Params p;
    for (std::size_t k = 0; k < raw.size(); ++k) {
        const auto& q = raw[k];
        for (double v : {q.a, q.b, q.c, q.d, q.e})
            if (!std::isfinite(v))
                throw Error(Errc::non_finite, "non-finite parameter on axis " + std::to_string(k + 1));
        if (std::abs(q.b) < 1e-12)
            throw Error(Errc::zero_coupling, "ZeroCoupling(" + std::to_string(k + 1) + "): |b| < 1e-12");
        if (q.b < 0)
            p.warnings_.push_back("axis " + std::to_string(k + 1) +
                                  ": negative b; constants use the principal square-root branch");
        p.root_.push_back(std::sqrt(cplx(q.b) * minus_i));
        p.root_neg_.push_back(std::sqrt(cplx(q.b) * plus_i));
    }
    p.q_ = std::move(raw);
    return p;
}

Params validate_params(std::vector<Quintuple> raw) { return Params::validate(std::move(raw)); }

Params Params::negated() const {
    auto q = q_;
    for (auto& x : q) x = {-x.a, -x.b, -x.c, -x.d, -x.e};
    return validate(std::move(q));
}

Params Params::scaled(double lambda) const {
    if (lambda == 0.0 || !std::isfinite(lambda)) throw Error(Errc::zero_lambda, "scale factor must be nonzero");
    const double s = lambda * lambda;
    auto q = q_;
    for (auto& x : q) x = {s * x.a, s * x.b, s * x.c, s * x.d, s * x.e};
    return validate(std::move(q));
}

Params Params::swapped() const {
    auto q = q_;
    for (auto& x : q) x = {-x.c, -x.b, -x.a, -x.e, -x.d};
    return validate(std::move(q));
}

Params scale_params(const Params& p, double lambda) { return p.scaled(lambda); }

cplx Params::c_lambda() const {
    cplx r = 1.0;
    for (auto v : root_) r *= v;
    return r;
}

cplx Params::c_neg_lambda() const {
    cplx r = 1.0;
    for (auto v : root_neg_) r *= v;
    return r;
}

Grid::Grid(std::vector<Axis> axes) : axes_(std::move(axes)) {
    if (axes_.empty()) throw Error(Errc::invalid_argument, "grid needs at least one axis");
    for (const auto& a : axes_) {
        if (a.count == 0) throw Error(Errc::invalid_argument, "grid axis has zero points");
        if (!(a.step > 0) || !std::isfinite(a.step) || !std::isfinite(a.origin))
            throw Error(Errc::invalid_argument, "grid axis step must be positive and finite");
    }
}

std::vector<std::size_t> Grid::shape() const {
    std::vector<std::size_t> s;
    for (const auto& a : axes_) s.push_back(a.count);
    return s;
}

std::size_t Grid::size() const noexcept {
    if (axes_.empty()) return 0;
    std::size_t n = 1;
    for (const auto& a : axes_) n *= a.count;
    return n;
}

double Grid::cell_volume() const noexcept {
    double v = 1.0;
    for (const auto& a : axes_) v *= a.step;
    return v;
}

void Grid::coords(std::size_t flat, std::span<double> out) const {
    for (std::size_t k = axes_.size(); k-- > 0;) {
        const auto& a = axes_[k];
        out[k] = a(flat % a.count);
        flat /= a.count;
    }
}

bool Grid::same_as(const Grid& o, double rel_tol) const {
    if (dims() != o.dims()) return false;
    for (std::size_t k = 0; k < dims(); ++k) {
        const auto &a = axes_[k], &b = o.axes_[k];
        if (a.count != b.count) return false;
        if (std::abs(a.step - b.step) > rel_tol * a.step) return false;
        if (std::abs(a.origin - b.origin) > rel_tol * a.step * static_cast<double>(a.count)) return false;
    }
    return true;
}

Field::Field(Grid g, Domain d) : grid(std::move(g)), values(grid.size()), domain(d) {}

Field::Field(Grid g, std::vector<cplx> v, Domain d) : grid(std::move(g)), values(std::move(v)), domain(d) {
    if (values.size() != grid.size())
        throw Error(Errc::dim_mismatch, "field has " + std::to_string(values.size()) + " values for " +
                                            std::to_string(grid.size()) + " grid points");
}

void Field::require_finite() const {
    for (const auto& v : values)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw Error(Errc::non_finite, "field contains NaN or Inf");
}

double norm2(const Field& f) {
    double s = 0;
    for (const auto& v : f.values) s += std::norm(v);
    return std::sqrt(s * f.grid.cell_volume());
}

double rel_l2(const Field& a, const Field& b) {
    if (a.size() != b.size()) throw Error(Errc::dim_mismatch, "rel_l2: size mismatch");
    double num = 0, den = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += std::norm(a.values[i] - b.values[i]);
        den += std::norm(b.values[i]);
    }
    if (den == 0) return num == 0 ? 0.0 : INFINITY;
    return std::sqrt(num / den);
}

double max_abs(const Field& f) {
    double m = 0;
    for (const auto& v : f.values) m = std::max(m, std::abs(v));
    return m;
}

void require_dims(const Params& p, const Grid& g) {
    if (p.dims() != g.dims())
        throw Error(Errc::dim_mismatch, "parameters have " + std::to_string(p.dims()) + " axes, grid has " +
                                            std::to_string(g.dims()));
}

double chirp_phase(double lambda, ChirpKind which, const Params& p, std::span<const double> x) {
    CompensatedSum s;
    for (std::size_t k = 0; k < p.dims(); ++k) {
        const auto& q = p[k];
        const double quad = which == ChirpKind::ad ? q.a : q.c;
        const double lin = which == ChirpKind::ad ? q.d : q.e;
        s.add(lambda * quad * x[k] * x[k]);
        s.add(lambda * lin * x[k]);
    }
    return s.value();
}

Field chirp(double lambda, ChirpKind which, const Params& p, const Grid& grid) {
    require_dims(p, grid);
    Field out(grid, Domain::space);
    std::vector<double> x(grid.dims());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid.coords(i, x);
        out.values[i] = std::polar(1.0, chirp_phase(lambda, which, p, x));
    }
    return out;
}

namespace {

void add_kernel_phase(CompensatedSum& s, const Quintuple& q, double w, double x) {
    s.add(q.a * x * x);
    s.add(q.b * x * w);
    s.add(q.c * w * w);
    s.add(q.d * x);
    s.add(q.e * w);
}

const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * pi);

}  // namespace

cplx kernel1(const Quintuple& q, cplx root, double omega, double x) {
    CompensatedSum s;
    add_kernel_phase(s, q, omega, x);
    return root * inv_sqrt_2pi * std::polar(1.0, s.value());
}

cplx kernel_eval(const Params& p, std::span<const double> omega, std::span<const double> x) {
    if (omega.size() != p.dims() || x.size() != p.dims())
        throw Error(Errc::dim_mismatch, "kernel_eval: point dimension does not match parameters");
    CompensatedSum s;
    cplx pref = 1.0;
    for (std::size_t k = 0; k < p.dims(); ++k) {
        add_kernel_phase(s, p[k], omega[k], x[k]);
        pref *= p.root(k) * inv_sqrt_2pi;
    }
    return pref * std::polar(1.0, s.value());
}

}  // namespace qpft
