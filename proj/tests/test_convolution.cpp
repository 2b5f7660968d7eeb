#include <doctest.h>

#include "helpers.hpp"
#include "qpft/convolution.hpp"
#include "qpft/transform.hpp"

using namespace qpft;
using oracle::GaussianSpec;
using testing::box_grid;

namespace {

Field lin(cplx al, const Field& f, cplx be, const Field& g) {
    Field out = f;
    for (std::size_t i = 0; i < f.size(); ++i) out.values[i] = al * f.values[i] + be * g.values[i];
    return out;
}

// O(M²) reference for (f ⋆ g) on f's grid; both operands share the step and g
// is sampled on a grid whose origin is g_origin.
Field plain_oracle(const Field& f, const Field& g) {
    const Axis &fa = f.grid.axis(0), &ga = g.grid.axis(0);
    Field out(f.grid, Domain::space);
    for (std::size_t m = 0; m < fa.count; ++m) {
        const double x = fa(m);
        cplx s = 0;
        for (std::size_t n = 0; n < fa.count; ++n) {
            const double j = (x - fa(n) - ga.origin) / ga.step;
            const double jr = std::round(j);
            if (std::abs(j - jr) > 1e-6 || jr < 0 || jr >= static_cast<double>(ga.count)) continue;
            s += f.values[n] * g.values[static_cast<std::size_t>(jr)];
        }
        out.values[m] = s * fa.step / std::sqrt(2 * pi);
    }
    return out;
}

double phase_sum(const Params& p, std::span<const double> w, double ce_scale, double e_only) {
    double s = 0;
    for (std::size_t k = 0; k < w.size(); ++k) s += ce_scale * (p[k].c * w[k] * w[k] + p[k].e * w[k]) + e_only * p[k].e * w[k];
    return s;
}

// Q(f⊗g) against e^{−iΣ(cω²+eω)}·Qf·Qg from the closed-form Gaussian transforms.
double type1_residual(const GaussianSpec& gf, const GaussianSpec& gg, const Params& p, const Grid& grid) {
    Field f = oracle::sample_gaussian(gf, grid), g = oracle::sample_gaussian(gg, grid);
    auto wg = default_frequency_grid(grid, p);
    Field lhs = qpft_fast(conv_type1(f, g, p), p, wg);
    Field rhs(wg, Domain::frequency);
    std::vector<double> w(grid.dims());
    for (std::size_t i = 0; i < rhs.size(); ++i) {
        wg.coords(i, w);
        rhs.values[i] = std::polar(1.0, -phase_sum(p, w, 1, 0)) * oracle::gaussian_qpft_closed(gf, p, w) *
                        oracle::gaussian_qpft_closed(gg, p, w);
    }
    return rel_l2(lhs, rhs);
}

double type3_residual(const GaussianSpec& gf, const GaussianSpec& gg, const Params& p, double lambda,
                      const Grid& grid) {
    Field f = oracle::sample_gaussian(gf, grid), g = oracle::sample_gaussian(gg, grid);
    const Params ps = p.scaled(lambda);
    auto wg = default_frequency_grid(grid, ps);
    Field lhs = qpft_fast(conv_type3(f, g, p, lambda), ps, wg);
    Field rhs(wg, Domain::frequency);
    std::vector<double> w(grid.dims());
    for (std::size_t i = 0; i < rhs.size(); ++i) {
        wg.coords(i, w);
        rhs.values[i] = std::polar(1.0, -lambda * lambda * phase_sum(p, w, 1, 0)) *
                        oracle::gaussian_qpft_closed(gf, ps, w) * oracle::gaussian_qpft_closed(gg, ps, w);
    }
    return rel_l2(lhs, rhs);
}

// Q(f⊕g)(ω) against e^{i(1−√2)Σeω}·Qf(ω/s)·Qg(ω/s).
double type2_residual(const GaussianSpec& gf, const GaussianSpec& gg, const Params& p, const Grid& grid, double s) {
    Field f = oracle::sample_gaussian(gf, grid), g = oracle::sample_gaussian(gg, grid);
    auto wg = default_frequency_grid(grid, p);
    Field lhs = qpft_fast(conv_type2(f, g, p), p, wg);
    Field rhs(wg, Domain::frequency);
    std::vector<double> w(grid.dims()), ws(grid.dims());
    for (std::size_t i = 0; i < rhs.size(); ++i) {
        wg.coords(i, w);
        for (std::size_t k = 0; k < w.size(); ++k) ws[k] = w[k] / s;
        rhs.values[i] = std::polar(1.0, phase_sum(p, w, 0, 1 - std::sqrt(2.0))) *
                        oracle::gaussian_qpft_closed(gf, p, ws) * oracle::gaussian_qpft_closed(gg, p, ws);
    }
    return rel_l2(lhs, rhs);
}

}  // namespace

TEST_CASE("plain convolution: sifting, box-box triangle, commutativity") {
    auto grid = box_grid(-4, 4, 160);
    Field f = oracle::sample_gaussian(testing::gaussian({0.3}, {1.5}, cplx(1, -0.5)), grid);
    Field delta(grid, Domain::space);
    delta.values[80] = 1.0 / grid.axis(0).step;
    Field s = conv_plain(f, delta);
    for (std::size_t i = 0; i < f.size(); ++i)
        CHECK(std::abs(s.values[i] - f.values[i] / std::sqrt(2 * pi)) < 1e-13);

    Field box(grid, Domain::space);
    for (std::size_t i = 0; i < box.size(); ++i) {
        const double x = grid.axis(0)(i);
        if (x >= -0.5 && x < 0.5) box.values[i] = 1.0;
    }
    Field tri = conv_plain(box, box);
    CHECK(max_abs(tri) == doctest::Approx(1 / std::sqrt(2 * pi)).epsilon(1e-12));
    Field ref = plain_oracle(box, box);
    double err = 0;
    for (std::size_t i = 0; i < tri.size(); ++i) err = std::max(err, std::abs(tri.values[i] - ref.values[i]));
    CHECK(err < 1e-13);

    Field g = oracle::sample_gaussian(testing::gaussian({-0.4}, {3.0}, cplx(0.2, 1)), grid);
    CHECK(max_abs(lin(1, conv_plain(f, g), -1, conv_plain(g, f))) < 1e-12);

    Field other(box_grid(-4, 4, 100), Domain::space);
    CHECK_THROWS_AS(conv_plain(f, other), Error);
}

TEST_CASE("type1 with a = 0 is a scaled plain convolution") {
    auto p = testing::params1(0, 1.7, 0.3, 0.4, -0.2);
    auto grid = box_grid(-6, 6, 240);
    Field f = oracle::sample_gaussian(testing::gaussian({0.0}, {1.0}), grid);
    Field g = oracle::sample_gaussian(testing::gaussian({0.5}, {2.0}), grid);
    Field a = conv_type1(f, g, p), b = conv_plain(f, g);
    const cplx C = std::sqrt(cplx(1.7) / cplx(0, 1));
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a.values[i] - C * b.values[i]) < 1e-14);
}

TEST_CASE("type1 spectral identity over random parameter draws") {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 5; ++t) {
        auto p = testing::random_params(rng, 1);
        CHECK(type1_residual(testing::gaussian({0.3}, {0.8}), testing::gaussian({-0.5}, {1.4}, cplx(0.5, 1)), p,
                             box_grid(-16, 16, 1024)) < 1e-6);
    }
    auto p2 = testing::random_params(rng, 2);
    CHECK(type1_residual(testing::gaussian({0.3, -0.2}, {0.8, 1.1}), testing::gaussian({-0.5, 0.1}, {1.4, 0.9}), p2,
                         box_grid(-14, 14, 192, 2)) < 1e-6);
}

TEST_CASE("type3 spectral identity for several lambda") {
    std::mt19937_64 rng(77);
    for (int t = 0; t < 5; ++t) {
        auto p = testing::random_params(rng, 1);
        for (double lam : {0.5, 1.0, 2.0}) {
            CAPTURE(lam);
            CHECK(type3_residual(testing::gaussian({0.2}, {1.0}), testing::gaussian({-0.3}, {0.7}, cplx(1, -1)), p,
                                 lam, box_grid(-16, 16, 2048)) < 1e-6);
        }
    }
    auto p2 = testing::random_params(rng, 2);
    CHECK(type3_residual(testing::gaussian({0.3, -0.2}, {0.8, 1.1}), testing::gaussian({-0.5, 0.1}, {1.4, 0.9}), p2,
                         0.7, box_grid(-14, 14, 192, 2)) < 1e-6);
    CHECK_THROWS_AS(conv_type3(Field(box_grid(-1, 1, 8), Domain::space), Field(box_grid(-1, 1, 8), Domain::space),
                               p2, 0.0),
                    Error);
}

TEST_CASE("type2 identity picks the sqrt(2) argument over the halved one") {
    std::mt19937_64 rng(4242);
    for (int t = 0; t < 5; ++t) {
        auto p = testing::random_params(rng, 1);
        auto gf = testing::gaussian({0.2}, {1.0}), gg = testing::gaussian({-0.3}, {0.6}, cplx(0.4, 0.9));
        auto grid = box_grid(-16, 16, 1024);
        const double good = type2_residual(gf, gg, p, grid, std::sqrt(2.0));
        const double bad = type2_residual(gf, gg, p, grid, 2.0);
        CAPTURE(good);
        CAPTURE(bad);
        CHECK(good < 1e-5);
        CHECK(bad > 1e3 * good);
    }
}

TEST_CASE("type2 with a = d = 0 is a scaled plain convolution evaluated at sqrt(2)x") {
    auto p = testing::params1(0, 1.3, 0.2, 0, 0.5);
    auto grid = box_grid(-8, 8, 256);
    auto gf = testing::gaussian({0.0}, {1.0}), gg = testing::gaussian({0.0}, {1.0});
    Field h = conv_type2(oracle::sample_gaussian(gf, grid), oracle::sample_gaussian(gg, grid), p);
    // ∫e^{−τ²}e^{−(y−τ)²}dτ = √(π/2)e^{−y²/2} at y = √2x.
    const cplx P = std::sqrt(cplx(1.3) / cplx(0, pi));
    for (std::size_t i = 0; i < h.size(); ++i) {
        const double x = grid.axis(0)(i);
        CHECK(std::abs(h.values[i] - P * std::sqrt(pi / 2) * std::exp(-x * x)) < 1e-10);
    }
}

TEST_CASE("dual type2 identity") {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 5; ++t) {
        auto p = testing::random_params(rng, 1);
        auto gf = testing::gaussian({0.2}, {1.0}), gg = testing::gaussian({-0.3}, {0.6}, cplx(0.4, 0.9));
        auto xg = box_grid(-16, 16, 1024);
        auto wg = default_frequency_grid(xg, p);
        const double s2 = std::sqrt(2.0);
        Field u(xg, Domain::space);
        for (std::size_t i = 0; i < u.size(); ++i) {
            const double x = xg.axis(0)(i), xs[1] = {x / s2};
            u.values[i] = std::polar(1.0, (s2 - 1) * p[0].d * x) * gf(xs) * gg(xs);
        }
        Field lhs = qpft_fast(u, p, wg);
        Field F = oracle::gaussian_qpft_closed(gf, p, wg), G = oracle::gaussian_qpft_closed(gg, p, wg);
        CHECK(rel_l2(lhs, dual_type2(F, G, p)) < 1e-5);
    }
}

TEST_CASE("bilinearity of every kind") {
    std::mt19937_64 rng(12);
    auto p = testing::random_params(rng, 1);
    auto grid = box_grid(-10, 10, 400);
    Field f = oracle::sample_gaussian(testing::gaussian({0.1}, {0.9}), grid);
    Field h = oracle::sample_gaussian(testing::gaussian({-0.6}, {1.5}, cplx(0, 1)), grid);
    Field g = oracle::sample_gaussian(testing::gaussian({0.4}, {0.7}), grid);
    const cplx al(0.7, -0.3), be(-1.1, 0.5);
    for (auto type : {ConvType::plain, ConvType::type1, ConvType::type2, ConvType::type2_dual, ConvType::type3}) {
        CAPTURE(conv_type_name(type));
        ConvKind kind{type, 0.8};
        Field l = convolve(kind, lin(al, f, be, h), g, p);
        Field r = lin(al, convolve(kind, f, g, p), be, convolve(kind, h, g, p));
        CHECK(rel_l2(l, r) < 1e-12);
        Field l2 = convolve(kind, g, lin(al, f, be, h), p);
        Field r2 = lin(al, convolve(kind, g, f, p), be, convolve(kind, g, h, p));
        CHECK(rel_l2(l2, r2) < 1e-12);
    }
}

TEST_CASE("type3 algebra: commutativity, associativity, distributivity") {
    std::mt19937_64 rng(90);
    auto p = testing::random_params(rng, 1);
    const double lam = 0.8;
    auto grid = box_grid(-16, 16, 1024);
    Field f = oracle::sample_gaussian(testing::gaussian({0.5}, {1.2}), grid);
    Field g = oracle::sample_gaussian(testing::gaussian({-0.4}, {0.9}, cplx(1, 1)), grid);
    Field h = oracle::sample_gaussian(testing::gaussian({0.0}, {2.0}, cplx(0.3, -0.7)), grid);
    Field fg = conv_type3(f, g, p, lam), gf = conv_type3(g, f, p, lam);
    double err = 0;
    for (std::size_t i = 0; i < fg.size(); ++i) err = std::max(err, std::abs(fg.values[i] - gf.values[i]));
    CHECK(err < 1e-12);
    CHECK(rel_l2(conv_type3(fg, h, p, lam), conv_type3(f, conv_type3(g, h, p, lam), p, lam)) < 1e-8);
    CHECK(rel_l2(conv_type3(f, lin(1, g, 1, h), p, lam), lin(1, fg, 1, conv_type3(f, h, p, lam))) < 1e-8);
}

TEST_CASE("type3 translation identity for grid-aligned shifts") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 3; ++t) {
        auto p = testing::random_params(rng, 1);
        const double lam = 0.6 + 0.3 * t;
        auto grid = box_grid(-16, 16, 1024);
        Field f = oracle::sample_gaussian(testing::gaussian({0.5}, {1.2}), grid);
        Field g = oracle::sample_gaussian(testing::gaussian({-0.4}, {0.9}, cplx(1, 1)), grid);
        const long cells[1] = {40};
        const double shift[1] = {40 * grid.axis(0).step};
        Field lhs = translate(conv_type3(f, g, p, lam), cells);
        Field rhs = conv_type3(translate(f, cells), modulate_at(g, p, lam, shift), p, lam);
        CHECK(rel_l2(lhs, rhs) < 1e-8);
    }
}

TEST_CASE("derivative identity") {
    auto grid = box_grid(-12, 12, 512);
    Field f = oracle::sample_gaussian(testing::gaussian({0.3}, {1.0}), grid);
    Field g = oracle::sample_gaussian(testing::gaussian({-0.2}, {1.5}, cplx(0.5, 1)), grid);
    CHECK(derivative_identity_check(f, g, testing::params1(0, 1.2, 0.3, 0.4, 0.1), 0.9, 0) < 1e-7);
    CHECK(derivative_identity_check(f, g, testing::params1(1, 1, 0, 0, 0), 1.0, 0) < 1e-6);

    // The spectral derivative against a fourth-order finite difference.
    Field d = spectral_derivative(f, 0);
    const double h = grid.axis(0).step;
    for (std::size_t i = 2; i + 2 < f.size(); ++i) {
        const cplx fd = (-f.values[i + 2] + 8.0 * f.values[i + 1] - 8.0 * f.values[i - 1] + f.values[i - 2]) / (12 * h);
        CHECK(std::abs(fd - d.values[i]) < 1e-4);
    }

    std::mt19937_64 rng(19);
    auto p2 = testing::random_params(rng, 2);
    auto g2 = box_grid(-10, 10, 128, 2);
    Field f2 = oracle::sample_gaussian(testing::gaussian({0.3, -0.1}, {1.0, 0.8}), g2);
    Field h2 = oracle::sample_gaussian(testing::gaussian({-0.2, 0.2}, {1.4, 1.1}), g2);
    CHECK(derivative_identity_check(f2, h2, p2, 0.8, 1) < 1e-5);
}

TEST_CASE("spectral symbols") {
    auto p = testing::params1(0.3, 1.2, 0, 0.5, 0);
    auto grid = box_grid(-5, 5, 33);
    CHECK(max_abs(lin(1, spectral_symbol({ConvType::type1}, p).sample(grid), -1,
                      Field(grid, std::vector<cplx>(33, 1.0), Domain::frequency))) == 0.0);

    std::mt19937_64 rng(1);
    auto q = testing::random_params(rng, 2);
    Grid rg({{-3.1, 0.173, 17}, {-2.2, 0.291, 13}});
    Field s1 = spectral_symbol({ConvType::type1}, q).sample(rg);
    Field s3 = spectral_symbol({ConvType::type3, 1.0}, q).sample(rg);
    CHECK(max_abs(lin(1, s1, -1, s3)) < 1e-15);
    for (auto kind : {ConvKind{ConvType::type1}, ConvKind{ConvType::type2}, ConvKind{ConvType::type3, 0.6}}) {
        Field s = spectral_symbol(kind, q).sample(rg);
        for (auto v : s.values) CHECK(std::abs(std::abs(v) - 1.0) < 1e-15);
    }
    CHECK(spectral_symbol({ConvType::type2}, q).arg_scale == doctest::Approx(1 / std::sqrt(2.0)));
    for (auto t : {ConvType::plain, ConvType::type2_dual}) {
        try {
            spectral_symbol({t}, q);
            FAIL("expected UnsupportedKind");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::unsupported_kind);
        }
    }
}

TEST_CASE("type3 at unit lambda and d = 0 matches type1 up to a unit constant") {
    auto p = Params::validate({{0.3, 1.4, -0.2, 0, 0.6}});
    auto grid = box_grid(-10, 10, 400);
    Field f = oracle::sample_gaussian(testing::gaussian({0.5}, {1.2}), grid);
    Field g = oracle::sample_gaussian(testing::gaussian({-0.4}, {0.9}, cplx(1, 1)), grid);
    Field a = conv_type3(f, g, p, 1.0), b = conv_type1(f, g, p);
    std::vector<cplx> ratios;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::abs(b.values[i]) > 1e-8) ratios.push_back(a.values[i] / b.values[i]);
    cplx mean = 0;
    for (auto r : ratios) mean += r;
    mean /= static_cast<double>(ratios.size());
    double var = 0;
    for (auto r : ratios) var += std::norm(r - mean);
    var /= static_cast<double>(ratios.size());
    CHECK(var < 1e-10);
    CHECK(std::abs(std::abs(mean) - 1.0) < 1e-10);
}

TEST_CASE("type1 L1 bound on positive fields") {
    std::mt19937_64 rng(55);
    std::uniform_real_distribution<double> u(0, 1);
    auto grid = box_grid(-5, 5, 200);
    for (int t = 0; t < 5; ++t) {
        auto p = testing::random_params(rng, 1);
        Field f(grid, Domain::space), g(grid, Domain::space);
        for (std::size_t i = 60; i < 140; ++i) {
            f.values[i] = u(rng);
            g.values[i] = u(rng);
        }
        auto l1 = [&](const Field& v) {
            double s = 0;
            for (auto x : v.values) s += std::abs(x);
            return s * grid.cell_volume();
        };
        CHECK(l1(conv_type1(f, g, p)) <= std::sqrt(2 * pi * std::abs(p[0].b)) * l1(f) * l1(g));
    }
}

TEST_CASE("discarded tail is reported") {
    auto grid = box_grid(-3, 3, 120);
    Field f = oracle::sample_gaussian(testing::gaussian({2.0}, {4.0}), grid);
    Diagnostics d;
    conv_plain(f, f, &d);
    CHECK(d.discarded_tail > 0.1);
    conv_plain(oracle::sample_gaussian(testing::gaussian({0.0}, {4.0}), grid),
               oracle::sample_gaussian(testing::gaussian({0.0}, {4.0}), grid), &d);
    CHECK(d.discarded_tail < 1e-12);
}
