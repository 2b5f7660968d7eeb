#include "qpft/verify.hpp"

#include <cmath>
#include <random>

#include "qpft/applications.hpp"
#include "qpft/boas.hpp"
#include "qpft/convolution.hpp"
#include "qpft/inversion.hpp"
#include "qpft/oracle.hpp"
#include "qpft/transform.hpp"

namespace qpft {

namespace {

using oracle::GaussianSpec;

struct Sink {
    std::string suite;
    std::vector<Check>& out;

    void below(const std::string& name, double v, double thr) {
        out.push_back({suite, name, v, thr, false, std::isfinite(v) && v < thr});
    }
    void above(const std::string& name, double v, double thr) {
        out.push_back({suite, name, v, thr, true, std::isfinite(v) && v >= thr});
    }
};

Grid line(double lo, double hi, std::size_t m, std::size_t dims = 1) {
    return Grid(std::vector<Axis>(dims, Axis{lo, (hi - lo) / static_cast<double>(m), m}));
}

Params draw(std::mt19937_64& rng, std::size_t dims) {
    std::uniform_real_distribution<double> ac(-0.5, 0.5), de(-1, 1), b(0.5, 2);
    std::vector<Quintuple> q;
    for (std::size_t k = 0; k < dims; ++k) q.push_back({ac(rng), b(rng), ac(rng), de(rng), de(rng)});
    return Params::validate(q);
}

Field scaled_sum(const Field& a, cplx s, const Field& b) {
    Field out = a;
    for (std::size_t i = 0; i < a.size(); ++i) out.values[i] += s * b.values[i];
    return out;
}

void transform_suite(Sink s) {
    std::mt19937_64 rng(1);
    double rt = 0, pv = 0, fd = 0;
    for (int t = 0; t < 3; ++t) {
        const Params p = draw(rng, 1);
        const Grid g = line(-12, 12, 512);
        const Field f = oracle::sample_gaussian({{0.4}, {0.5}, 1.0}, g);
        const Grid w = default_frequency_grid(g, p);
        rt = std::max(rt, rel_l2(iqpft(forward(f, p), p, g), f));
        pv = std::max(pv, parseval_residual(f, p, w));
        const Grid g2 = line(-12, 12, 256);
        const Field f2 = oracle::sample_gaussian({{0.7}, {0.4}, cplx(1, 0.5)}, g2);
        const Grid w2 = default_frequency_grid(g2, p);
        fd = std::max(fd, rel_l2(qpft_fast(f2, p, w2, false), qpft_direct(f2, p, w2)));
    }
    s.below("round_trip_1d", rt, 1e-6);
    s.below("parseval_residual", pv, 1e-6);
    s.below("fast_vs_direct_1d", fd, 1e-10);

    const Params ft = Params::validate({{0, 1, 0, 0, 0}});
    const Grid g = line(-12, 12, 512);
    const GaussianSpec gs{{0.0}, {0.5}, 1.0};
    const Field F = qpft_fast(oracle::sample_gaussian(gs, g), ft, default_frequency_grid(g, ft));
    double err = 0;
    for (std::size_t i = 0; i < F.size(); ++i) {
        const double w = F.grid.axis(0)(i);
        err = std::max(err, std::abs(F.values[i] - std::polar(1.0, -pi / 4) * std::exp(-w * w / 2)));
    }
    s.below("fourier_reduction", err, 1e-8);
}

void convolution_suite(Sink s) {
    std::mt19937_64 rng(2);
    const Grid g = line(-16, 16, 1024);
    const GaussianSpec a{{0.2}, {1.0}, 1.0}, b{{-0.3}, {0.7}, cplx(1, -1)};
    const Field f = oracle::sample_gaussian(a, g), h = oracle::sample_gaussian(b, g);
    double r1 = 0, r3 = 0, r2 = 0, ctrl = INFINITY, comm = 0;
    for (int t = 0; t < 5; ++t) {
        const Params p = draw(rng, 1);
        const Grid w = default_frequency_grid(g, p);
        const Field lhs1 = qpft_fast(conv_type1(f, h, p), p, w);
        const Field lhs2 = qpft_fast(conv_type2(f, h, p), p, w);
        Field rhs1(w, Domain::frequency), good(w, Domain::frequency), bad(w, Domain::frequency);
        for (std::size_t i = 0; i < w.size(); ++i) {
            const double om[1] = {w.axis(0)(i)}, os[1] = {om[0] / std::sqrt(2.0)}, oh[1] = {om[0] / 2};
            const double ce = p[0].c * om[0] * om[0] + p[0].e * om[0];
            rhs1.values[i] = std::polar(1.0, -ce) * oracle::gaussian_qpft_closed(a, p, om) *
                             oracle::gaussian_qpft_closed(b, p, om);
            const cplx ph = std::polar(1.0, (1 - std::sqrt(2.0)) * p[0].e * om[0]);
            good.values[i] = ph * oracle::gaussian_qpft_closed(a, p, os) * oracle::gaussian_qpft_closed(b, p, os);
            bad.values[i] = ph * oracle::gaussian_qpft_closed(a, p, oh) * oracle::gaussian_qpft_closed(b, p, oh);
        }
        r1 = std::max(r1, rel_l2(lhs1, rhs1));
        const double rg = rel_l2(lhs2, good), rb = rel_l2(lhs2, bad);
        r2 = std::max(r2, rg);
        ctrl = std::min(ctrl, rb / rg);

        for (double lam : {0.5, 2.0}) {
            const Params ps = p.scaled(lam);
            const Grid ws = default_frequency_grid(g, ps);
            const Field lhs3 = qpft_fast(conv_type3(f, h, p, lam), ps, ws);
            Field rhs3(ws, Domain::frequency);
            for (std::size_t i = 0; i < ws.size(); ++i) {
                const double om[1] = {ws.axis(0)(i)};
                const double ce = p[0].c * om[0] * om[0] + p[0].e * om[0];
                rhs3.values[i] = std::polar(1.0, -lam * lam * ce) * oracle::gaussian_qpft_closed(a, ps, om) *
                                 oracle::gaussian_qpft_closed(b, ps, om);
            }
            r3 = std::max(r3, rel_l2(lhs3, rhs3));
        }
        comm = std::max(comm, max_abs(scaled_sum(conv_type3(f, h, p, 0.8), -1.0, conv_type3(h, f, p, 0.8))));
    }
    s.below("type1_identity", r1, 1e-6);
    s.below("type3_identity", r3, 1e-6);
    s.below("type2_identity_sqrt2", r2, 1e-5);
    s.above("type2_halved_control_ratio", ctrl, 1e3);
    s.below("type3_commutativity", comm, 1e-12);
}

void inversion_suite(Sink s) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> om(-3, 3), lam(0.5, 2);
    double q = 0;
    for (int t = 0; t < 20; ++t) {
        const Params p = draw(rng, 1);
        const double l = lam(rng), w[1] = {om(rng)};
        q = std::max(q, std::abs(mollifier_closed(p, l, w) - mollifier_quadrature(p, l, w)));
    }
    s.below("mollifier_closed_vs_quadrature", q, 1e-8);

    const Params p = Params::validate({{0.3, 1.2, -0.1, 0.5, 0.2}});
    s.below("mollifier_unit_mass", std::abs(mollifier_unit_mass(p, 1.0, 2e6, 0.25).mass - 1.0), 1e-6);

    double sc = 0;
    for (int t = 0; t < 10; ++t) {
        const Params r = draw(rng, 1);
        const double l = 0.3 + 0.2 * t, w[1] = {om(rng)}, ws[1] = {w[0] / l};
        const cplx rhs =
            std::polar(1.0, chirp_phase(-1, ChirpKind::ad, r, w) + chirp_phase(1, ChirpKind::ad, r, ws)) / l *
            mollifier_closed(r, 1.0, ws);
        const cplx lhs = mollifier_closed(r, l, w);
        sc = std::max(sc, std::abs(lhs - rhs) / std::abs(lhs));
    }
    s.below("mollifier_scaling_law", sc, 1e-10);

    const Params ai = Params::validate({{0.05, 1, 0.2, 0.1, -0.3}});
    const Grid g = line(-40, 40, 8000);
    const Field f = oracle::sample_gaussian({{0.5}, {0.125}, 1.0}, g);
    double prev = INFINITY, worst_step = 0;
    for (double l : {1.0, 0.5, 0.25, 0.1}) {
        const double e = rel_l2(approx_identity_apply(f, ai, l), f);
        if (std::isfinite(prev)) worst_step = std::max(worst_step, e / prev);
        prev = e;
    }
    s.below("approx_identity_error_lambda_0.1", prev, 0.05);
    s.below("approx_identity_step_ratio", worst_step, 1.0);

    const Grid gp = line(-12, 12, 512);
    const Field f1 = oracle::sample_gaussian({{0.3}, {0.8}, 1.0}, gp);
    const Field f2 = oracle::sample_gaussian({{-0.2}, {1.1}, cplx(0.4, 1)}, gp);
    const Params pp = draw(rng, 1);
    s.below("product_theorem", std::max(product_theorem_check(f1, f2, pp, 1.0), product_theorem_check(f1, f2, pp, 0.5)),
            1e-5);
}

Field bump_signal(const Params& p, double L, double h, double center, double sigma) {
    const Grid xg = line(-L, L, static_cast<std::size_t>(std::llround(2 * L / h)));
    const Grid wg = default_frequency_grid(xg, p);
    Field F(wg, Domain::frequency);
    for (std::size_t i = 0; i < F.size(); ++i) {
        const double r = (std::abs(wg.axis(0)(i)) - center) / sigma;
        F.values[i] = std::exp(-0.5 * r * r);
    }
    return iqpft(F, p, xg);
}

void boas_suite(Sink s) {
    const Params p = Params::validate({{0.1, 1.3, -0.2, 0.3, 0.4}});
    const Field f = bump_signal(p, 30, 0.005, 1.75, 0.25);
    const Field bf = boas_transform(f, p);
    const Grid wg = default_frequency_grid(f.grid, p);
    const Field BF = qpft_fast(bf, p, wg), F = qpft_fast(f, p, wg);
    double num = 0, den = 0;
    for (std::size_t i = 0; i < F.size(); ++i) {
        const double bw = p[0].b * wg.axis(0)(i);
        if (std::abs(bw) < 0.5) continue;
        const cplx e = F.values[i] / cplx(0, bw);
        num += std::norm(BF.values[i] - e);
        den += std::norm(e);
    }
    s.below("boas_spectral_identity", std::sqrt(num / den), 1e-4);
    s.below("delta_inverts_boas", rel_l2(delta_op(bf, p), f), 1e-4);

    const Params ft = Params::validate({{0, 1, 0, 0, 0}});
    const double sigma = 0.015;
    for (double c : {1.0, 2.0}) {
        const auto g = boas_growth(bump_signal(ft, 500, 0.05, c + 4.3 * sigma + 0.01, sigma), ft, 4);
        s.below("growth_R_gamma_gap_" + std::to_string(static_cast<int>(c)), std::abs(g.R_estimate * g.gamma_meas - 1),
                0.15);
    }
    double diverging = 0;
    try {
        boas_growth(oracle::sample_gaussian({{0.0}, {0.5}, 1.0}, line(-20, 20, 800)), ft, 8);
    } catch (const NoSpectralGap& e) {
        diverging = 1;
        for (std::size_t n = 1; n < e.roots().size(); ++n)
            if (!(e.roots()[n] > e.roots()[n - 1])) diverging = 0;
    }
    s.above("no_gap_diagnosed", diverging, 1);
}

void applications_suite(Sink s) {
    std::mt19937_64 rng(5);
    const Params p = draw(rng, 1);
    const Grid g = line(-12, 12, 512);
    const Field phi = oracle::sample_gaussian({{0.4}, {0.6}, cplx(1, 0.3)}, g);
    const Field k = oracle::sample_gaussian({{-0.2}, {4.0}, cplx(0.8, -0.2)}, g);
    const Field rhs = scaled_sum(conv_type1(k, phi, p), 1.0, phi);
    const auto sol = solve_convolution_equation({1.0, k, rhs, {ConvType::type1, 1.0}, p}, 0.0);
    s.below("solver_recovery", rel_l2(sol.phi, phi), 1e-5);
    s.below("solver_residual", sol.residual, 1e-5);

    const Params fp = Params::validate({{0.15, 1.2, -0.1, 0.3, 0.2}});
    const Grid xg = line(-30, 30, 1024);
    const Grid wg = default_frequency_grid(xg, fp);
    auto bump = [&](double c, double amp) {
        Field F(wg, Domain::frequency);
        for (std::size_t i = 0; i < F.size(); ++i) {
            const double r = (wg.axis(0)(i) - c) / 0.2;
            F.values[i] = amp * std::exp(-0.5 * r * r);
        }
        return iqpft(F, fp, xg);
    };
    const Field clean = bump(1.0, 1.0);
    const Field r = scaled_sum(clean, 1.0, bump(-2.5, std::sqrt(10.0)));
    const Field mask = design_filter({{{0.2, 1.8}}, 0, 0}, fp, wg);
    const Field out = apply_filter(r, mask, fp);
    const Field R = qpft_fast(r, fp, wg), O = qpft_fast(out, fp, wg);
    double err = 0;
    for (std::size_t i = 0; i < R.size(); ++i)
        if (mask.values[i].real() == 1.0) err = std::max(err, std::abs(O.values[i] - R.values[i]));
    s.below("passband_preservation", err / max_abs(R), 1e-9);
    s.above("snr_gain_db", snr_db(clean, out) - snr_db(clean, r), 10);
    s.below("hard_mask_idempotence", rel_l2(apply_filter(out, mask, fp), out), 1e-8);
}

}  // namespace

std::vector<Check> run_verify(const std::string& suite) {
    std::vector<Check> out;
    const bool all = suite == "all";
    bool known = all;
    auto run = [&](const char* name, void (*fn)(Sink)) {
        if (!all && suite != name) return;
        known = true;
        fn(Sink{name, out});
    };
    run("transform", transform_suite);
    run("convolution", convolution_suite);
    run("inversion", inversion_suite);
    run("boas", boas_suite);
    run("applications", applications_suite);
    if (!known) throw Error(Errc::invalid_argument, "unknown verify suite '" + suite + "'");
    return out;
}

}  // namespace qpft
