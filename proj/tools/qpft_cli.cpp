#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <sstream>

#include "qpft/qpft.h"
#include "signal_file.hpp"

namespace {

using nlohmann::json;
using cplx = std::complex<double>;
using qpft_cli::AxisSpec;
using qpft_cli::Signal;

constexpr int exit_ok = 0, exit_validation = 2, exit_numeric = 3;

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A failing library call; carries the report gathered so far.
struct LibraryError : std::runtime_error {
    qpft_status status;
    json report;
    LibraryError(qpft_status s, json r)
        : std::runtime_error(std::string(qpft_status_name(s)) + ": " + qpft_last_error()), status(s), report(std::move(r)) {}
};

void check(qpft_status s, const json& partial = json::object()) {
    if (s != QPFT_OK) throw LibraryError(s, partial);
}

struct Deleter {
    void operator()(qpft_params* p) const { qpft_params_free(p); }
    void operator()(qpft_grid* g) const { qpft_grid_free(g); }
    void operator()(qpft_field* f) const { qpft_field_free(f); }
};
using ParamsPtr = std::unique_ptr<qpft_params, Deleter>;
using GridPtr = std::unique_ptr<qpft_grid, Deleter>;
using FieldPtr = std::unique_ptr<qpft_field, Deleter>;

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

double number(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
        return v;
    } catch (const std::logic_error&) {
        throw ValidationError("cannot parse " + what + " value '" + s + "'");
    }
}

std::vector<double> numbers(const std::string& s, const std::string& what) {
    std::vector<double> out;
    for (const auto& t : split(s, ',')) out.push_back(number(t, what));
    return out;
}

std::vector<std::array<double, 5>> parse_params(const std::string& s) {
    std::vector<std::array<double, 5>> out;
    for (const auto& q : split(s, ';')) {
        const auto v = numbers(q, "--params");
        if (v.size() != 5) throw ValidationError("--params needs five comma-separated numbers per axis, got '" + q + "'");
        out.push_back({v[0], v[1], v[2], v[3], v[4]});
    }
    if (out.empty()) throw ValidationError("--params is empty");
    return out;
}

// lo:hi:M per axis (semicolon-separated); a single spec is repeated over `dims` axes.
std::vector<AxisSpec> parse_grid(const std::string& s, std::size_t dims) {
    std::vector<AxisSpec> axes;
    for (const auto& a : split(s, ';')) {
        const auto parts = split(a, ':');
        if (parts.size() != 3) throw ValidationError("--grid expects lo:hi:M, got '" + a + "'");
        const double lo = number(parts[0], "--grid"), hi = number(parts[1], "--grid");
        const double m = number(parts[2], "--grid");
        if (!(hi > lo) || m < 1 || m != std::floor(m)) throw ValidationError("--grid needs lo < hi and integer M >= 1");
        axes.push_back({lo, (hi - lo) / m, static_cast<std::size_t>(m)});
    }
    if (axes.size() == 1 && dims > 1) axes.assign(dims, axes[0]);
    if (dims != 0 && axes.size() != dims) throw ValidationError("--grid has the wrong number of axes");
    return axes;
}

std::vector<double> per_axis(const std::string& s, std::size_t dims, const std::string& what) {
    auto v = numbers(s, what);
    if (v.size() == 1 && dims > 1) v.assign(dims, v[0]);
    if (v.size() != dims) throw ValidationError(what + " needs one value or one per axis");
    return v;
}

ParamsPtr make_params(const std::vector<std::array<double, 5>>& q) {
    std::vector<double> flat;
    for (const auto& x : q) flat.insert(flat.end(), x.begin(), x.end());
    qpft_params* p = nullptr;
    check(qpft_params_create(flat.data(), q.size(), &p));
    return ParamsPtr(p);
}

GridPtr make_grid(const std::vector<AxisSpec>& axes) {
    std::vector<double> o, s;
    std::vector<size_t> c;
    for (const auto& a : axes) {
        o.push_back(a.origin);
        s.push_back(a.step);
        c.push_back(a.count);
    }
    qpft_grid* g = nullptr;
    check(qpft_grid_create(o.data(), s.data(), c.data(), axes.size(), &g));
    return GridPtr(g);
}

std::vector<AxisSpec> axes_of(const qpft_grid* g) {
    std::vector<AxisSpec> out(qpft_grid_dims(g));
    for (std::size_t k = 0; k < out.size(); ++k) check(qpft_grid_axis(g, k, &out[k].origin, &out[k].step, &out[k].count));
    return out;
}

FieldPtr field_from(const Signal& s) {
    auto g = make_grid(s.axes);
    qpft_field* f = nullptr;
    check(qpft_field_create(g.get(), s.domain == "frequency" ? QPFT_FREQUENCY : QPFT_SPACE, s.data.data(), &f));
    return FieldPtr(f);
}

Signal signal_from(const qpft_field* f, const std::vector<std::array<double, 5>>& params) {
    qpft_grid* g = nullptr;
    check(qpft_field_grid(f, &g));
    GridPtr gp(g);
    Signal s;
    s.axes = axes_of(g);
    s.domain = qpft_field_domain(f) == QPFT_FREQUENCY ? "frequency" : "space";
    s.params = params;
    const double* d = qpft_field_data(f);
    s.data.assign(d, d + 2 * qpft_field_size(f));
    return s;
}

Signal read(const std::string& path) {
    try {
        return qpft_cli::read_signal(path);
    } catch (const qpft_cli::FileError& e) {
        throw ValidationError(e.what());
    }
}

double l2(const qpft_field* f) {
    qpft_grid* g = nullptr;
    check(qpft_field_grid(f, &g));
    double vol = 1;
    for (const auto& a : axes_of(g)) vol *= a.step;
    qpft_grid_free(g);
    const double* d = qpft_field_data(f);
    double s = 0;
    for (std::size_t i = 0; i < 2 * qpft_field_size(f); ++i) s += d[i] * d[i];
    return std::sqrt(s * vol);
}

double rel_l2(const qpft_field* a, const qpft_field* b) {
    if (qpft_field_size(a) != qpft_field_size(b)) throw ValidationError("fields differ in size");
    const double *x = qpft_field_data(a), *y = qpft_field_data(b);
    double num = 0, den = 0;
    for (std::size_t i = 0; i < 2 * qpft_field_size(a); ++i) {
        num += (x[i] - y[i]) * (x[i] - y[i]);
        den += y[i] * y[i];
    }
    return den > 0 ? std::sqrt(num / den) : std::sqrt(num);
}

json argmax_coords(const qpft_field* f) {
    qpft_grid* g = nullptr;
    check(qpft_field_grid(f, &g));
    const auto axes = axes_of(g);
    qpft_grid_free(g);
    const double* d = qpft_field_data(f);
    std::size_t best = 0;
    double bv = -1;
    for (std::size_t i = 0; i < qpft_field_size(f); ++i) {
        const double v = std::hypot(d[2 * i], d[2 * i + 1]);
        if (v > bv) bv = v, best = i;
    }
    json c = json::array();
    std::vector<double> x(axes.size());
    std::size_t r = best;
    for (std::size_t k = axes.size(); k-- > 0;) {
        x[k] = axes[k].origin + static_cast<double>(r % axes[k].count) * axes[k].step;
        r /= axes[k].count;
    }
    for (double v : x) c.push_back(v);
    return {{"coords", c}, {"abs", bv}};
}

// Shared options of every subcommand.
struct Common {
    std::string report_path, csv_path, params;
    bool csv_signal = false;

    void attach(CLI::App* app, bool with_params = true) {
        app->add_option("--report", report_path, "also write the JSON report to this file");
        app->add_option("--csv", csv_path, "write the report flattened to key,value CSV");
        app->add_flag("--csv-signal", csv_signal, "write signal outputs as CSV instead of f64le");
        if (with_params) app->add_option("--params", params, "a,b,c,d,e per axis, axes joined by ';'");
    }
    qpft_cli::Encoding encoding() const { return csv_signal ? qpft_cli::Encoding::csv : qpft_cli::Encoding::f64le; }
    std::vector<std::array<double, 5>> resolve(const Signal* from) const {
        if (!params.empty()) return parse_params(params);
        if (from && !from->params.empty()) return from->params;
        throw ValidationError("--params is required (the input file carries none)");
    }
};

void flatten(const json& j, const std::string& prefix, std::string& out) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), out);
    } else {
        out += prefix + "," + (j.is_string() ? j.get<std::string>() : j.dump()) + "\n";
    }
}

void publish(const Common& c, const json& report) {
    const std::string text = report.dump(2) + "\n";
    std::cout << text;
    if (!c.report_path.empty()) qpft_cli::write_atomic(c.report_path, text);
    if (!c.csv_path.empty()) {
        std::string csv = "key,value\n";
        flatten(report, "", csv);
        qpft_cli::write_atomic(c.csv_path, csv);
    }
}

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

qpft_conv_type conv_type(const std::string& k) {
    if (k == "plain") return QPFT_CONV_PLAIN;
    if (k == "type1") return QPFT_CONV_TYPE1;
    if (k == "type2") return QPFT_CONV_TYPE2;
    if (k == "type2-dual") return QPFT_CONV_TYPE2_DUAL;
    if (k == "type3") return QPFT_CONV_TYPE3;
    throw ValidationError("unknown --kind '" + k + "'");
}

// Space signal whose transform is a Gaussian bump (in ω, or in |ω| when symmetric).
FieldPtr spectral_bump(const qpft_params* p, const qpft_grid* xg, const std::vector<double>& center, double sigma,
                       cplx amp, bool symmetric) {
    qpft_grid* wg = nullptr;
    check(qpft_default_frequency_grid(xg, p, &wg));
    GridPtr wgp(wg);
    const auto axes = axes_of(wg);
    std::size_t n = 1;
    for (const auto& a : axes) n *= a.count;
    std::vector<double> v(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t r = i;
        double r2 = 0;
        for (std::size_t k = axes.size(); k-- > 0;) {
            double w = axes[k].origin + static_cast<double>(r % axes[k].count) * axes[k].step;
            r /= axes[k].count;
            if (symmetric) w = std::abs(w);
            r2 += (w - center[k]) * (w - center[k]);
        }
        const cplx z = amp * std::exp(-0.5 * r2 / (sigma * sigma));
        v[2 * i] = z.real();
        v[2 * i + 1] = z.imag();
    }
    qpft_field* F = nullptr;
    check(qpft_field_create(wg, QPFT_FREQUENCY, v.data(), &F));
    FieldPtr Fp(F);
    qpft_field* f = nullptr;
    check(qpft_transform(F, p, xg, QPFT_PATH_FAST, 1, &f, nullptr));
    return FieldPtr(f);
}

FieldPtr combine(const qpft_field* a, cplx s, const qpft_field* b) {
    qpft_grid* g = nullptr;
    check(qpft_field_grid(a, &g));
    GridPtr gp(g);
    const double *x = qpft_field_data(a), *y = qpft_field_data(b);
    std::vector<double> v(2 * qpft_field_size(a));
    for (std::size_t i = 0; i < qpft_field_size(a); ++i) {
        const cplx z = cplx(x[2 * i], x[2 * i + 1]) + s * cplx(y[2 * i], y[2 * i + 1]);
        v[2 * i] = z.real();
        v[2 * i + 1] = z.imag();
    }
    qpft_field* f = nullptr;
    check(qpft_field_create(g, qpft_field_domain(a), v.data(), &f));
    return FieldPtr(f);
}

cplx parse_complex(const std::string& s, const std::string& what) {
    const auto v = numbers(s, what);
    if (v.size() == 1) return v[0];
    if (v.size() == 2) return {v[0], v[1]};
    throw ValidationError(what + " expects re or re,im");
}

json params_json(const std::vector<std::array<double, 5>>& q) { return q; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quadratic phase Fourier transform toolkit"};
    app.require_subcommand(1);
    std::function<void()> action;

    // gen
    auto* gen = app.add_subcommand("gen", "generate a test signal");
    gen->require_subcommand(1);
    struct {
        Common c;
        std::string grid, center = "0", width = "0.5", amp = "1", out = "signal.qsig";
        std::size_t dims = 1;
    } gg;
    auto* gen_g = gen->add_subcommand("gaussian", "amp·Π exp(−p_k (x_k − μ_k)²)");
    gg.c.attach(gen_g, false);
    gen_g->add_option("--dims", gg.dims)->check(CLI::Range(1, 8));
    gen_g->add_option("--p", gg.width, "width p per axis");
    gen_g->add_option("--center", gg.center);
    gen_g->add_option("--amp", gg.amp, "re or re,im");
    gen_g->add_option("--grid", gg.grid, "lo:hi:M[;lo:hi:M...]")->required();
    gen_g->add_option("-o,--out", gg.out, "default signal.qsig");
    gen_g->callback([&] {
        action = [&] {
            const auto axes = parse_grid(gg.grid, gg.dims);
            const auto w = per_axis(gg.width, axes.size(), "--p"), mu = per_axis(gg.center, axes.size(), "--center");
            const cplx a = parse_complex(gg.amp, "--amp");
            const double amp[2] = {a.real(), a.imag()};
            auto g = make_grid(axes);
            qpft_field* f = nullptr;
            check(qpft_gaussian(g.get(), mu.data(), w.data(), amp, &f));
            FieldPtr fp(f);
            qpft_cli::write_signal(gg.out, signal_from(f, {}), gg.c.encoding());
            publish(gg.c, {{"command", "gen gaussian"}, {"output", gg.out}, {"norm", l2(f)}, {"points", qpft_field_size(f)}});
        };
    });

    struct {
        Common c;
        std::string grid, center = "1.5", out;
        double sigma = 0.25;
        std::string amp = "1";
        bool symmetric = false;
    } gb;
    auto* gen_b = gen->add_subcommand("spectral-bump", "signal whose transform is a Gaussian bump");
    gb.c.attach(gen_b);
    gen_b->add_option("--grid", gb.grid)->required();
    gen_b->add_option("--center", gb.center, "bump centre in ω per axis");
    gen_b->add_option("--sigma", gb.sigma)->check(CLI::PositiveNumber);
    gen_b->add_option("--amp", gb.amp);
    gen_b->add_flag("--symmetric", gb.symmetric, "bump in |ω| (spectral gap around the origin)");
    gen_b->add_option("-o,--out", gb.out)->required();
    gen_b->callback([&] {
        action = [&] {
            const auto q = gb.c.resolve(nullptr);
            auto p = make_params(q);
            const auto axes = parse_grid(gb.grid, q.size());
            auto g = make_grid(axes);
            auto f = spectral_bump(p.get(), g.get(), per_axis(gb.center, q.size(), "--center"), gb.sigma,
                                   parse_complex(gb.amp, "--amp"), gb.symmetric);
            qpft_cli::write_signal(gb.out, signal_from(f.get(), q), gb.c.encoding());
            publish(gb.c, {{"command", "gen spectral-bump"}, {"output", gb.out}, {"norm", l2(f.get())}});
        };
    });

    struct {
        Common c;
        std::string grid, signal_center = "1", noise_center = "-2.5", out, clean;
        double sigma = 0.2, noise_ratio = 10;
    } gm;
    auto* gen_m = gen->add_subcommand("noisy-mix", "in-band signal plus out-of-band noise, both spectral bumps");
    gm.c.attach(gen_m);
    gen_m->add_option("--grid", gm.grid)->required();
    gen_m->add_option("--signal-center", gm.signal_center);
    gen_m->add_option("--noise-center", gm.noise_center);
    gen_m->add_option("--sigma", gm.sigma)->check(CLI::PositiveNumber);
    gen_m->add_option("--noise-ratio", gm.noise_ratio, "noise/signal energy ratio")->check(CLI::NonNegativeNumber);
    gen_m->add_option("-o,--out", gm.out)->required();
    gen_m->add_option("--clean", gm.clean, "also write the noise-free component");
    gen_m->callback([&] {
        action = [&] {
            const auto q = gm.c.resolve(nullptr);
            auto p = make_params(q);
            auto g = make_grid(parse_grid(gm.grid, q.size()));
            auto f = spectral_bump(p.get(), g.get(), per_axis(gm.signal_center, q.size(), "--signal-center"), gm.sigma,
                                   1.0, false);
            auto n = spectral_bump(p.get(), g.get(), per_axis(gm.noise_center, q.size(), "--noise-center"), gm.sigma,
                                   std::sqrt(gm.noise_ratio), false);
            auto mix = combine(f.get(), 1.0, n.get());
            qpft_cli::write_signal(gm.out, signal_from(mix.get(), q), gm.c.encoding());
            if (!gm.clean.empty()) qpft_cli::write_signal(gm.clean, signal_from(f.get(), q), gm.c.encoding());
            double snr = 0;
            check(qpft_snr_db(f.get(), mix.get(), &snr));
            publish(gm.c, {{"command", "gen noisy-mix"}, {"output", gm.out}, {"snr_db", snr}});
        };
    });

    // transform
    struct {
        Common c;
        std::string in = "signal.qsig", out = "spectrum.qsig", grid;
        bool inverse = false, direct = false;
    } tr;
    auto* trc = app.add_subcommand("transform", "forward or inverse transform");
    tr.c.attach(trc);
    trc->add_option("-i,--in", tr.in, "default signal.qsig");
    trc->add_option("-o,--out", tr.out, "default spectrum.qsig");
    trc->add_option("--out-grid", tr.grid, "lo:hi:M per axis; default is the reciprocal grid");
    trc->add_flag("--inverse", tr.inverse);
    trc->add_flag("--direct", tr.direct, "quadrature path instead of chirp-FFT-chirp");
    trc->callback([&] {
        action = [&] {
            const Signal s = read(tr.in);
            const auto q = tr.c.resolve(&s);
            auto p = make_params(q);
            auto f = field_from(s);
            GridPtr og;
            if (!tr.grid.empty()) og = make_grid(parse_grid(tr.grid, q.size()));
            const auto t0 = std::chrono::steady_clock::now();
            qpft_field* F = nullptr;
            qpft_diagnostics d{};
            check(qpft_transform(f.get(), p.get(), og.get(), tr.direct ? QPFT_PATH_DIRECT : QPFT_PATH_FAST, tr.inverse,
                                 &F, &d));
            FieldPtr Fp(F);
            const double ms = ms_since(t0);
            json r = {{"command", "transform"},
                      {"inverse", tr.inverse},
                      {"path", tr.direct ? "direct" : "fast"},
                      {"params", params_json(q)},
                      {"input_norm", l2(f.get())},
                      {"output_norm", l2(F)},
                      {"edge_energy", d.edge_energy},
                      {"warnings", d.warning_count},
                      {"argmax", argmax_coords(F)},
                      {"timing_ms", ms}};
            if (!tr.inverse && l2(f.get()) > 0) {
                double res = 0;
                check(qpft_parseval_residual(f.get(), p.get(), og.get(), &res));
                r["parseval_residual"] = res;
            }
            for (std::size_t i = 0; i < qpft_params_warning_count(p.get()); ++i)
                std::cerr << "warning: " << qpft_params_warning(p.get(), i) << "\n";
            qpft_cli::write_signal(tr.out, signal_from(F, q), tr.c.encoding());
            publish(tr.c, r);
        };
    });

    // convolve
    struct {
        Common c;
        std::string f, g, out, kind = "type1";
        double lambda = 1;
    } cv;
    auto* cvc = app.add_subcommand("convolve", "plain, type1, type2, type2-dual or type3 convolution");
    cv.c.attach(cvc);
    cvc->add_option("-i,--in,-f", cv.f)->required();
    cvc->add_option("-g,--with", cv.g)->required();
    cvc->add_option("-o,--out", cv.out)->required();
    cvc->add_option("--kind", cv.kind)->check(CLI::IsMember({"plain", "type1", "type2", "type2-dual", "type3"}));
    cvc->add_option("--lambda", cv.lambda, "type3 scale");
    cvc->callback([&] {
        action = [&] {
            const Signal a = read(cv.f), b = read(cv.g);
            const qpft_conv_type t = conv_type(cv.kind);
            std::vector<std::array<double, 5>> q;
            ParamsPtr p;
            if (t != QPFT_CONV_PLAIN) {
                q = cv.c.resolve(&a);
                p = make_params(q);
            }
            auto fa = field_from(a), fb = field_from(b);
            const auto t0 = std::chrono::steady_clock::now();
            qpft_field* r = nullptr;
            double tail = 0;
            check(qpft_convolve(t, cv.lambda, fa.get(), fb.get(), p.get(), &r, &tail));
            FieldPtr rp(r);
            qpft_cli::write_signal(cv.out, signal_from(r, q), cv.c.encoding());
            publish(cv.c, {{"command", "convolve"},
                           {"kind", cv.kind},
                           {"lambda", cv.lambda},
                           {"output_norm", l2(r)},
                           {"discarded_tail", tail},
                           {"timing_ms", ms_since(t0)}});
        };
    });

    // filter
    struct {
        Common c;
        std::string in, out, passband, clean;
        double rolloff = 0, floor = 0;
    } fl;
    auto* flc = app.add_subcommand("filter", "multiplicative spectral mask");
    fl.c.attach(flc);
    flc->add_option("-i,--in", fl.in)->required();
    flc->add_option("-o,--out", fl.out)->required();
    flc->add_option("--passband", fl.passband, "xi:eta per axis, joined by ','")->required();
    flc->add_option("--rolloff", fl.rolloff, "raised-cosine width, 0 = hard")->check(CLI::NonNegativeNumber);
    flc->add_option("--floor", fl.floor, "stopband gain in [0, 1)");
    flc->add_option("--clean", fl.clean, "reference signal for the SNR report");
    flc->callback([&] {
        action = [&] {
            const Signal s = read(fl.in);
            const auto q = fl.c.resolve(&s);
            auto p = make_params(q);
            auto f = field_from(s);
            std::vector<double> lo, hi;
            for (const auto& band : split(fl.passband, ',')) {
                const auto parts = split(band, ':');
                if (parts.size() != 2) throw ValidationError("--passband expects xi:eta per axis");
                lo.push_back(number(parts[0], "--passband"));
                hi.push_back(number(parts[1], "--passband"));
            }
            if (lo.size() != q.size()) throw ValidationError("--passband needs one interval per axis");
            qpft_grid* sg = nullptr;
            check(qpft_field_grid(f.get(), &sg));
            GridPtr sgp(sg);
            qpft_grid* wg = nullptr;
            check(qpft_default_frequency_grid(sg, p.get(), &wg));
            GridPtr wgp(wg);
            qpft_field* mask = nullptr;
            check(qpft_filter_design(lo.data(), hi.data(), lo.size(), fl.rolloff, fl.floor, p.get(), wg, &mask));
            FieldPtr mp(mask);
            const auto t0 = std::chrono::steady_clock::now();
            qpft_field* out = nullptr;
            check(qpft_filter_apply(f.get(), mask, p.get(), &out));
            FieldPtr op(out);
            json r = {{"command", "filter"},
                      {"input_norm", l2(f.get())},
                      {"output_norm", l2(out)},
                      {"timing_ms", ms_since(t0)}};
            if (!fl.clean.empty()) {
                auto c = field_from(read(fl.clean));
                double in_db = 0, out_db = 0;
                check(qpft_snr_db(c.get(), f.get(), &in_db));
                check(qpft_snr_db(c.get(), out, &out_db));
                r["snr_in_db"] = in_db;
                r["snr_out_db"] = out_db;
                r["snr_gain_db"] = out_db - in_db;
            }
            qpft_cli::write_signal(fl.out, signal_from(out, q), fl.c.encoding());
            publish(fl.c, r);
        };
    });

    // solve
    struct {
        Common c;
        std::string kernel, rhs, out, kind = "type1", lambda_coeff = "1";
        double conv_lambda = 1, reg = 0;
        bool fixture = false;
    } sv;
    auto* svc = app.add_subcommand("solve", "solve λφ + k⊙φ = p by spectral division");
    sv.c.attach(svc);
    svc->add_option("-k,--kernel", sv.kernel);
    svc->add_option("-i,--rhs", sv.rhs);
    svc->add_option("-o,--out", sv.out);
    svc->add_option("--kind", sv.kind)->check(CLI::IsMember({"type1", "type3"}));
    svc->add_option("--lambda-coeff", sv.lambda_coeff, "λ as re or re,im");
    svc->add_option("--conv-lambda", sv.conv_lambda, "type3 scale");
    svc->add_option("--reg", sv.reg, "Tikhonov regularization")->check(CLI::NonNegativeNumber);
    svc->add_flag("--fixture", sv.fixture, "build a Gaussian forward-backward instance and report recovery");
    svc->callback([&] {
        action = [&] {
            const cplx lam = parse_complex(sv.lambda_coeff, "--lambda-coeff");
            const double lam2[2] = {lam.real(), lam.imag()};
            const qpft_conv_type t = conv_type(sv.kind);
            json r = {{"command", "solve"}, {"kind", sv.kind}, {"lambda_coeff", {lam.real(), lam.imag()}}, {"reg", sv.reg}};
            std::vector<std::array<double, 5>> q;
            FieldPtr k, rhs, truth;
            ParamsPtr p;
            if (sv.fixture) {
                q = sv.c.params.empty() ? std::vector<std::array<double, 5>>{{0.1, 1.2, -0.2, 0.3, 0.1}}
                                        : parse_params(sv.c.params);
                p = make_params(q);
                auto g = make_grid(std::vector<AxisSpec>(q.size(), AxisSpec{-12, 24.0 / 512, 512}));
                const std::vector<double> mu1(q.size(), 0.4), w1(q.size(), 0.6), mu2(q.size(), -0.2), w2(q.size(), 4.0);
                const double a1[2] = {1, 0.3}, a2[2] = {0.8, -0.2};
                qpft_field *phi = nullptr, *kk = nullptr, *kphi = nullptr;
                check(qpft_gaussian(g.get(), mu1.data(), w1.data(), a1, &phi));
                truth.reset(phi);
                check(qpft_gaussian(g.get(), mu2.data(), w2.data(), a2, &kk));
                k.reset(kk);
                check(qpft_convolve(t, sv.conv_lambda, kk, phi, p.get(), &kphi, nullptr));
                FieldPtr kp(kphi);
                rhs = combine(kphi, lam, phi);
                r["fixture"] = true;
            } else {
                if (sv.kernel.empty() || sv.rhs.empty()) throw ValidationError("solve needs --kernel and --rhs, or --fixture");
                const Signal ks = read(sv.kernel), ps = read(sv.rhs);
                q = sv.c.resolve(&ps);
                p = make_params(q);
                k = field_from(ks);
                rhs = field_from(ps);
            }
            const auto t0 = std::chrono::steady_clock::now();
            qpft_field* phi = nullptr;
            double residual = 0, min_s = 0;
            check(qpft_solve(lam2, k.get(), rhs.get(), t, sv.conv_lambda, p.get(), sv.reg, &phi, &residual, &min_s), r);
            FieldPtr phip(phi);
            r["residual"] = residual;
            r["min_symbol"] = min_s;
            r["timing_ms"] = ms_since(t0);
            if (truth) r["recovery_error"] = rel_l2(phi, truth.get());
            if (!sv.out.empty()) qpft_cli::write_signal(sv.out, signal_from(phi, q), sv.c.encoding());
            publish(sv.c, r);
        };
    });

    // boas
    struct {
        Common c;
        std::string in, out;
        int iterations = 4;
    } bo;
    auto* boc = app.add_subcommand("boas", "Boas transform and growth-rate analysis");
    bo.c.attach(boc);
    boc->add_option("-i,--in", bo.in)->required();
    boc->add_option("-o,--out", bo.out, "write Bf");
    boc->add_option("--iterations", bo.iterations)->check(CLI::Range(1, QPFT_BOAS_MAX));
    boc->callback([&] {
        action = [&] {
            const Signal s = read(bo.in);
            const auto q = bo.c.resolve(&s);
            auto p = make_params(q);
            auto f = field_from(s);
            json r = {{"command", "boas"}, {"iterations", bo.iterations}};
            const auto t0 = std::chrono::steady_clock::now();
            qpft_boas_growth g{};
            const qpft_status st = qpft_boas_growth_run(f.get(), p.get(), bo.iterations, &g);
            if (st == QPFT_E_NO_SPECTRAL_GAP) {
                r["no_spectral_gap"] = true;
                r["norm_roots"] = std::vector<double>(g.roots, g.roots + g.root_count);
            }
            check(st, r);
            r["R_estimate"] = g.R;
            r["gamma_estimate"] = g.gamma;
            r["gamma_meas"] = g.gamma_meas;
            r["R_times_gamma_meas"] = g.R * g.gamma_meas;
            r["norms"] = std::vector<double>(g.norms, g.norms + g.count);
            r["partial"] = g.partial != 0;
            if (!bo.out.empty()) {
                qpft_field* bf = nullptr;
                check(qpft_boas_transform(f.get(), p.get(), &bf), r);
                FieldPtr bp(bf);
                qpft_cli::write_signal(bo.out, signal_from(bf, q), bo.c.encoding());
            }
            r["timing_ms"] = ms_since(t0);
            publish(bo.c, r);
        };
    });

    // verify
    struct {
        Common c;
        std::string suite = "all";
    } vf;
    int verify_exit = exit_ok;
    auto* vfc = app.add_subcommand("verify", "run the invariant suites");
    vf.c.attach(vfc, false);
    vfc->add_option("--suite", vf.suite)
        ->check(CLI::IsMember({"all", "transform", "convolution", "inversion", "boas", "applications"}));
    vfc->callback([&] {
        action = [&] {
            const auto t0 = std::chrono::steady_clock::now();
            char* text = nullptr;
            int pass = 0;
            check(qpft_verify(vf.suite.c_str(), &text, &pass));
            json r = json::parse(text);
            qpft_string_free(text);
            r["command"] = "verify";
            r["timing_ms"] = ms_since(t0);
            publish(vf.c, r);
            if (!pass) verify_exit = exit_numeric;
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_validation;
    }
    try {
        action();
        return verify_exit;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_validation;
    } catch (const qpft_cli::FileError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_validation;
    } catch (const LibraryError& e) {
        std::cerr << "error: " << e.what() << "\n";
        if (!e.report.empty()) {
            json r = e.report;
            r["error"] = qpft_status_name(e.status);
            r["message"] = qpft_last_error();
            std::cout << r.dump(2) << "\n";
        }
        return qpft_status_is_numeric(e.status) ? exit_numeric : exit_validation;
    }
}
