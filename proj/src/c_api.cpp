#define QPFT_BUILDING
#include "qpft/qpft.h"

#include <cstdlib>
#include <cstring>
#include <json.hpp>

#include "qpft/applications.hpp"
#include "qpft/boas.hpp"
#include "qpft/convolution.hpp"
#include "qpft/inversion.hpp"
#include "qpft/oracle.hpp"
#include "qpft/transform.hpp"
#include "qpft/verify.hpp"

struct qpft_params {
    qpft::Params p;
};
struct qpft_grid {
    qpft::Grid g;
};
struct qpft_field {
    qpft::Field f;
};

static_assert(static_cast<int>(qpft::Errc::io) == QPFT_E_IO);
static_assert(sizeof(qpft::cplx) == 2 * sizeof(double));

namespace {

thread_local std::string last_error;

template <class Fn>
qpft_status guard(Fn&& fn) {
    try {
        last_error.clear();
        fn();
        return QPFT_OK;
    } catch (const qpft::Error& e) {
        last_error = e.what();
        return static_cast<qpft_status>(e.code());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return QPFT_E_INTERNAL;
    } catch (const std::exception& e) {
        last_error = e.what();
        return QPFT_E_INTERNAL;
    }
}

void need(const void* ptr, const char* what) {
    if (!ptr) throw qpft::Error(qpft::Errc::invalid_argument, std::string(what) + " is null");
}

qpft::ConvKind conv_kind(qpft_conv_type t, double lambda) {
    switch (t) {
        case QPFT_CONV_PLAIN: return {qpft::ConvType::plain, lambda};
        case QPFT_CONV_TYPE1: return {qpft::ConvType::type1, lambda};
        case QPFT_CONV_TYPE2: return {qpft::ConvType::type2, lambda};
        case QPFT_CONV_TYPE2_DUAL: return {qpft::ConvType::type2_dual, lambda};
        case QPFT_CONV_TYPE3: return {qpft::ConvType::type3, lambda};
    }
    throw qpft::Error(qpft::Errc::unsupported_kind, "unknown convolution type");
}

qpft::oracle::GaussianSpec gaussian_spec(std::size_t dims, const double* center, const double* width,
                                         const double* amplitude) {
    need(center, "center");
    need(width, "width");
    qpft::oracle::GaussianSpec s{{center, center + dims}, {width, width + dims}, 1.0};
    if (amplitude) s.amplitude = {amplitude[0], amplitude[1]};
    for (double w : s.width)
        if (!(w > 0)) throw qpft::Error(qpft::Errc::invalid_argument, "Gaussian widths must be positive");
    return s;
}

void emit(qpft::Field f, qpft_field** out) {
    need(out, "out");
    *out = new qpft_field{std::move(f)};
}

}  // namespace

extern "C" {

const char* qpft_last_error(void) { return last_error.c_str(); }

const char* qpft_status_name(qpft_status s) {
    if (s == QPFT_E_INTERNAL) return "Internal";
    return qpft::errc_name(static_cast<qpft::Errc>(s));
}

int qpft_status_is_numeric(qpft_status s) {
    return s == QPFT_E_INTERNAL ? 0 : qpft::errc_is_numeric(static_cast<qpft::Errc>(s));
}

qpft_status qpft_params_create(const double* q, size_t dims, qpft_params** out) {
    return guard([&] {
        need(out, "out");
        if (dims > 0) need(q, "quintuples");
        std::vector<qpft::Quintuple> raw;
        for (size_t k = 0; k < dims; ++k) raw.push_back({q[5 * k], q[5 * k + 1], q[5 * k + 2], q[5 * k + 3], q[5 * k + 4]});
        *out = new qpft_params{qpft::Params::validate(std::move(raw))};
    });
}

void qpft_params_free(qpft_params* p) { delete p; }
size_t qpft_params_dims(const qpft_params* p) { return p ? p->p.dims() : 0; }

qpft_status qpft_params_get(const qpft_params* p, size_t axis, double q[5]) {
    return guard([&] {
        need(p, "params");
        need(q, "quintuple");
        if (axis >= p->p.dims()) throw qpft::Error(qpft::Errc::dim_mismatch, "axis out of range");
        const auto& x = p->p[axis];
        q[0] = x.a, q[1] = x.b, q[2] = x.c, q[3] = x.d, q[4] = x.e;
    });
}

size_t qpft_params_warning_count(const qpft_params* p) { return p ? p->p.warnings().size() : 0; }
const char* qpft_params_warning(const qpft_params* p, size_t i) {
    return p && i < p->p.warnings().size() ? p->p.warnings()[i].c_str() : nullptr;
}

qpft_status qpft_grid_create(const double* origin, const double* step, const size_t* count, size_t dims,
                             qpft_grid** out) {
    return guard([&] {
        need(out, "out");
        need(origin, "origin");
        need(step, "step");
        need(count, "count");
        std::vector<qpft::Axis> axes;
        for (size_t k = 0; k < dims; ++k) axes.push_back({origin[k], step[k], count[k]});
        *out = new qpft_grid{qpft::Grid(std::move(axes))};
    });
}

void qpft_grid_free(qpft_grid* g) { delete g; }
size_t qpft_grid_dims(const qpft_grid* g) { return g ? g->g.dims() : 0; }
size_t qpft_grid_size(const qpft_grid* g) { return g ? g->g.size() : 0; }

qpft_status qpft_grid_axis(const qpft_grid* g, size_t axis, double* origin, double* step, size_t* count) {
    return guard([&] {
        need(g, "grid");
        if (axis >= g->g.dims()) throw qpft::Error(qpft::Errc::dim_mismatch, "axis out of range");
        const auto& a = g->g.axis(axis);
        if (origin) *origin = a.origin;
        if (step) *step = a.step;
        if (count) *count = a.count;
    });
}

qpft_status qpft_default_frequency_grid(const qpft_grid* x, const qpft_params* p, qpft_grid** out) {
    return guard([&] {
        need(x, "grid");
        need(p, "params");
        need(out, "out");
        *out = new qpft_grid{qpft::default_frequency_grid(x->g, p->p)};
    });
}

qpft_status qpft_default_space_grid(const qpft_grid* w, const qpft_params* p, qpft_grid** out) {
    return guard([&] {
        need(w, "grid");
        need(p, "params");
        need(out, "out");
        *out = new qpft_grid{qpft::default_space_grid(w->g, p->p)};
    });
}

qpft_status qpft_field_create(const qpft_grid* g, qpft_domain domain, const double* values, qpft_field** out) {
    return guard([&] {
        need(g, "grid");
        qpft::Field f(g->g, domain == QPFT_FREQUENCY ? qpft::Domain::frequency : qpft::Domain::space);
        if (values)
            for (size_t i = 0; i < f.size(); ++i) f.values[i] = {values[2 * i], values[2 * i + 1]};
        f.require_finite();
        emit(std::move(f), out);
    });
}

void qpft_field_free(qpft_field* f) { delete f; }
size_t qpft_field_size(const qpft_field* f) { return f ? f->f.size() : 0; }
qpft_domain qpft_field_domain(const qpft_field* f) {
    return f && f->f.domain == qpft::Domain::frequency ? QPFT_FREQUENCY : QPFT_SPACE;
}
const double* qpft_field_data(const qpft_field* f) {
    return f ? reinterpret_cast<const double*>(f->f.values.data()) : nullptr;
}

qpft_status qpft_field_grid(const qpft_field* f, qpft_grid** out) {
    return guard([&] {
        need(f, "field");
        need(out, "out");
        *out = new qpft_grid{f->f.grid};
    });
}

qpft_status qpft_transform(const qpft_field* f, const qpft_params* p, const qpft_grid* out_grid, qpft_path path,
                           int inverse, qpft_field** out, qpft_diagnostics* diag) {
    return guard([&] {
        need(f, "field");
        need(p, "params");
        const auto pa = path == QPFT_PATH_DIRECT ? qpft::Path::direct : qpft::Path::fast;
        qpft::Grid grid = out_grid ? out_grid->g
                                   : (inverse ? qpft::default_space_grid(f->f.grid, p->p)
                                              : qpft::default_frequency_grid(f->f.grid, p->p));
        qpft::Diagnostics d;
        qpft::Field r = inverse ? qpft::iqpft(f->f, p->p, grid, pa, &d) : qpft::forward(f->f, p->p, grid, pa, &d);
        if (diag) *diag = {d.edge_energy, d.discarded_tail, d.warnings.size()};
        emit(std::move(r), out);
    });
}

qpft_status qpft_parseval_residual(const qpft_field* f, const qpft_params* p, const qpft_grid* out_grid,
                                   double* residual) {
    return guard([&] {
        need(f, "field");
        need(p, "params");
        need(residual, "residual");
        *residual = qpft::parseval_residual(f->f, p->p,
                                            out_grid ? out_grid->g : qpft::default_frequency_grid(f->f.grid, p->p));
    });
}

qpft_status qpft_edge_energy(const qpft_field* f, double shell, double* fraction) {
    return guard([&] {
        need(f, "field");
        need(fraction, "fraction");
        *fraction = qpft::edge_energy(f->f, shell);
    });
}

qpft_status qpft_convolve(qpft_conv_type type, double lambda, const qpft_field* f, const qpft_field* g,
                          const qpft_params* p, qpft_field** out, double* discarded_tail) {
    return guard([&] {
        need(f, "f");
        need(g, "g");
        qpft::Diagnostics d;
        qpft::Field r = [&] {
            if (type == QPFT_CONV_PLAIN) return qpft::conv_plain(f->f, g->f, &d);
            need(p, "params");
            return qpft::convolve(conv_kind(type, lambda), f->f, g->f, p->p, &d);
        }();
        if (discarded_tail) *discarded_tail = d.discarded_tail;
        emit(std::move(r), out);
    });
}

qpft_status qpft_mollifier_closed(const qpft_params* p, double lambda, const qpft_grid* g, qpft_field** out) {
    return guard([&] {
        need(p, "params");
        need(g, "grid");
        emit(qpft::mollifier_closed(p->p, lambda, g->g), out);
    });
}

qpft_status qpft_mollifier_quadrature(const qpft_params* p, double lambda, const double* omega, double value[2]) {
    return guard([&] {
        need(p, "params");
        need(omega, "omega");
        need(value, "value");
        const auto v = qpft::mollifier_quadrature(p->p, lambda, std::span(omega, p->p.dims()));
        value[0] = v.real(), value[1] = v.imag();
    });
}

qpft_status qpft_mollifier_unit_mass(const qpft_params* p, double lambda, double half_width, double step,
                                     double mass[2], double* coverage) {
    return guard([&] {
        need(p, "params");
        need(mass, "mass");
        const auto m = qpft::mollifier_unit_mass(p->p, lambda, half_width, step);
        mass[0] = m.mass.real(), mass[1] = m.mass.imag();
        if (coverage) *coverage = m.coverage;
    });
}

qpft_status qpft_approx_identity(const qpft_field* f, const qpft_params* p, double lambda, qpft_field** out) {
    return guard([&] {
        need(f, "field");
        need(p, "params");
        emit(qpft::approx_identity_apply(f->f, p->p, lambda), out);
    });
}

qpft_status qpft_product_theorem_residual(const qpft_field* f, const qpft_field* g, const qpft_params* p,
                                          double lambda, double* residual) {
    return guard([&] {
        need(f, "f");
        need(g, "g");
        need(p, "params");
        need(residual, "residual");
        *residual = qpft::product_theorem_check(f->f, g->f, p->p, lambda);
    });
}

qpft_status qpft_boas_transform(const qpft_field* f, const qpft_params* p, qpft_field** out) {
    return guard([&] {
        need(f, "field");
        need(p, "params");
        emit(qpft::boas_transform(f->f, p->p), out);
    });
}

qpft_status qpft_delta(const qpft_field* f, const qpft_params* p, qpft_field** out) {
    return guard([&] {
        need(f, "field");
        need(p, "params");
        emit(qpft::delta_op(f->f, p->p), out);
    });
}

qpft_status qpft_boas_growth_run(const qpft_field* f, const qpft_params* p, int n_max, qpft_boas_growth* out) {
    return guard([&] {
        need(f, "field");
        need(p, "params");
        need(out, "out");
        *out = {};
        try {
            const auto g = qpft::boas_growth(f->f, p->p, n_max);
            out->R = g.R_estimate;
            out->gamma = g.gamma_estimate;
            out->gamma_meas = g.gamma_meas;
            out->count = std::min<size_t>(g.norms.size(), QPFT_BOAS_MAX + 1);
            std::copy_n(g.norms.begin(), out->count, out->norms);
            out->partial = g.partial;
        } catch (const qpft::NoSpectralGap& e) {
            out->root_count = std::min<size_t>(e.roots().size(), QPFT_BOAS_MAX);
            std::copy_n(e.roots().begin(), out->root_count, out->roots);
            throw;
        }
    });
}

qpft_status qpft_solve(const double lambda[2], const qpft_field* kernel, const qpft_field* rhs, qpft_conv_type type,
                       double conv_lambda, const qpft_params* p, double regularization, qpft_field** phi,
                       double* residual, double* min_symbol) {
    return guard([&] {
        need(lambda, "lambda");
        need(kernel, "kernel");
        need(rhs, "rhs");
        need(p, "params");
        qpft::ConvolutionEquation eq{{lambda[0], lambda[1]}, kernel->f, rhs->f, conv_kind(type, conv_lambda), p->p};
        auto sol = qpft::solve_convolution_equation(eq, regularization);
        if (residual) *residual = sol.residual;
        if (min_symbol) *min_symbol = sol.min_symbol;
        emit(std::move(sol.phi), phi);
    });
}

qpft_status qpft_filter_design(const double* lo, const double* hi, size_t dims, double rolloff, double floor,
                               const qpft_params* p, const qpft_grid* freq, qpft_field** mask) {
    return guard([&] {
        need(lo, "lo");
        need(hi, "hi");
        need(p, "params");
        need(freq, "grid");
        qpft::FilterSpec spec{{}, rolloff, floor};
        for (size_t k = 0; k < dims; ++k) spec.passband.emplace_back(lo[k], hi[k]);
        emit(qpft::design_filter(spec, p->p, freq->g), mask);
    });
}

qpft_status qpft_filter_apply(const qpft_field* r, const qpft_field* mask, const qpft_params* p, qpft_field** out) {
    return guard([&] {
        need(r, "signal");
        need(mask, "mask");
        need(p, "params");
        emit(qpft::apply_filter(r->f, mask->f, p->p), out);
    });
}

qpft_status qpft_snr_db(const qpft_field* clean, const qpft_field* observed, double* db) {
    return guard([&] {
        need(clean, "clean");
        need(observed, "observed");
        need(db, "db");
        *db = qpft::snr_db(clean->f, observed->f);
    });
}

qpft_status qpft_gaussian(const qpft_grid* g, const double* center, const double* width, const double amplitude[2],
                          qpft_field** out) {
    return guard([&] {
        need(g, "grid");
        emit(qpft::oracle::sample_gaussian(gaussian_spec(g->g.dims(), center, width, amplitude), g->g), out);
    });
}

qpft_status qpft_gaussian_spectrum(const qpft_grid* w, const double* center, const double* width,
                                   const double amplitude[2], const qpft_params* p, qpft_field** out) {
    return guard([&] {
        need(w, "grid");
        need(p, "params");
        qpft::require_dims(p->p, w->g);
        emit(qpft::oracle::gaussian_qpft_closed(gaussian_spec(w->g.dims(), center, width, amplitude), p->p, w->g),
             out);
    });
}

qpft_status qpft_verify(const char* suite, char** json, int* all_pass) {
    return guard([&] {
        need(suite, "suite");
        need(json, "json");
        const auto checks = qpft::run_verify(suite);
        nlohmann::json arr = nlohmann::json::array();
        bool ok = true;
        for (const auto& c : checks) {
            arr.push_back({{"suite", c.suite},
                           {"name", c.name},
                           {"value", c.value},
                           {"threshold", c.threshold},
                           {"relation", c.at_least ? ">=" : "<"},
                           {"pass", c.pass}});
            ok = ok && c.pass;
        }
        const std::string s = nlohmann::json{{"suite", suite}, {"pass", ok}, {"checks", arr}}.dump(2);
        char* buf = static_cast<char*>(std::malloc(s.size() + 1));
        if (!buf) throw std::bad_alloc();
        std::memcpy(buf, s.c_str(), s.size() + 1);
        *json = buf;
        if (all_pass) *all_pass = ok;
    });
}

void qpft_string_free(char* s) { std::free(s); }

}  // extern "C"
