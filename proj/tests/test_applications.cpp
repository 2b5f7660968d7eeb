#include <doctest.h>

#include "helpers.hpp"
#include "qpft/applications.hpp"
#include "qpft/transform.hpp"

using namespace qpft;
using testing::box_grid;

namespace {

Field sum(const Field& a, cplx s, const Field& b) {
    Field out = a;
    for (std::size_t i = 0; i < a.size(); ++i) out.values[i] += s * b.values[i];
    return out;
}

// Space-domain signal whose transform is a Gaussian bump at `center` (per axis) on the default grid.
Field spectral_bump(const Grid& xg, const Params& p, std::vector<double> center, double sigma, cplx amp) {
    auto wg = default_frequency_grid(xg, p);
    Field F(wg, Domain::frequency);
    std::vector<double> w(xg.dims());
    for (std::size_t i = 0; i < F.size(); ++i) {
        wg.coords(i, w);
        double r2 = 0;
        for (std::size_t k = 0; k < w.size(); ++k) r2 += (w[k] - center[k]) * (w[k] - center[k]);
        F.values[i] = amp * std::exp(-0.5 * r2 / (sigma * sigma));
    }
    return iqpft(F, p, xg);
}

}  // namespace

TEST_CASE("solver forward-backward recovery") {
    std::mt19937_64 rng(71);
    auto g = box_grid(-12, 12, 512);
    for (int t = 0; t < 3; ++t) {
        auto p = testing::random_params(rng, 1);
        Field phi = oracle::sample_gaussian(testing::gaussian({0.4}, {0.6}, cplx(1, 0.3)), g);
        Field k = oracle::sample_gaussian(testing::gaussian({-0.2}, {4.0}, cplx(0.8, -0.2)), g);
        for (auto kind : {ConvKind{ConvType::type1}, ConvKind{ConvType::type3, 0.7}}) {
            const cplx lam(1.0, 0.2);
            Field rhs = sum(convolve(kind, k, phi, p), lam, phi);
            auto sol = solve_convolution_equation({lam, k, rhs, kind, p}, 0.0);
            CAPTURE(conv_type_name(kind.type));
            CHECK(rel_l2(sol.phi, phi) < 1e-5);
            CHECK(sol.residual < 1e-5);
            CHECK(sol.min_symbol > 0);
        }
    }
    auto p2 = testing::random_params(rng, 2);
    auto g2 = box_grid(-10, 10, 96, 2);
    Field phi2 = oracle::sample_gaussian(testing::gaussian({0.3, -0.4}, {0.7, 0.9}), g2);
    Field k2 = oracle::sample_gaussian(testing::gaussian({0.0, 0.1}, {3.0, 2.0}), g2);
    Field rhs2 = sum(conv_type1(k2, phi2, p2), 1.0, phi2);
    CHECK(rel_l2(solve_convolution_equation({1.0, k2, rhs2, {ConvType::type1}, p2}, 0.0).phi, phi2) < 1e-5);
}

TEST_CASE("solver with a zero kernel divides by lambda") {
    auto p = testing::params1(0.2, 1.1, -0.3, 0.1, 0.5);
    auto g = box_grid(-10, 10, 300);
    Field rhs = oracle::sample_gaussian(testing::gaussian({0.2}, {0.5}, cplx(0.5, 2)), g);
    const cplx lam(2.0, -1.0);
    auto sol = solve_convolution_equation({lam, Field(g, Domain::space), rhs, {ConvType::type1}, p}, 0.0);
    for (std::size_t i = 0; i < rhs.size(); ++i) CHECK(std::abs(sol.phi.values[i] - rhs.values[i] / lam) < 1e-13);
    CHECK(sol.min_symbol == doctest::Approx(std::abs(lam)));
}

TEST_CASE("singular symbol is refused without regularization") {
    auto p = testing::params1(0.1, 1.0, 0.2, 0.3, -0.1);
    auto g = box_grid(-10, 10, 256);
    const cplx lam = 1.0;
    Field k = oracle::sample_gaussian(testing::gaussian({0.0}, {1.0}), g);
    auto wg = default_frequency_grid(g, p);
    Field K = qpft_fast(k, p, wg);
    const std::size_t m0 = 140;
    const double w0[1] = {wg.axis(0)(m0)};
    const cplx alpha = -lam / (spectral_symbol({ConvType::type1}, p)(w0) * K.values[m0]);
    for (auto& v : k.values) v *= alpha;
    Field rhs = oracle::sample_gaussian(testing::gaussian({0.5}, {0.8}), g);
    ConvolutionEquation eq{lam, k, rhs, {ConvType::type1}, p};
    try {
        solve_convolution_equation(eq, 0.0);
        FAIL("expected SingularSymbol");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::singular_symbol);
    }
    auto sol = solve_convolution_equation(eq, 1e-3);
    CHECK(sol.min_symbol < 1e-12);
    CHECK(std::isfinite(sol.residual));
    CHECK(norm2(sol.phi) < 1e3 * norm2(rhs));
    CHECK_THROWS_AS(solve_convolution_equation({lam, k, rhs, {ConvType::type2}, p}, 0.0), Error);
}

TEST_CASE("filter design") {
    auto p = Params::validate({{0, 1, 0, 0, 0}, {0.1, 1.2, 0, 0, 0}});
    auto wg = default_frequency_grid(box_grid(-20, 20, 128, 2), p);
    FilterSpec hard{{{1, 2}, {-1, 1}}, 0, 0};
    Field m = design_filter(hard, p, wg);
    std::size_t count = 0;
    std::vector<double> w(2);
    for (std::size_t i = 0; i < m.size(); ++i) {
        wg.coords(i, w);
        const bool in = w[0] >= 1 && w[0] <= 2 && w[1] >= -1 && w[1] <= 1;
        CHECK(m.values[i] == cplx(in ? 1.0 : 0.0));
        count += in;
    }
    const double d0 = wg.axis(0).step, d1 = wg.axis(1).step;
    const double expect = (1 / d0) * (2 / d1);
    CHECK(std::abs(static_cast<double>(count) - expect) <= 2 / d0 + 1 / d1 + 4);

    FilterSpec soft = hard;
    soft.rolloff = 0.5;
    soft.floor = 0.1;
    Field ms = design_filter(soft, p, wg);
    for (std::size_t i = 0; i < ms.size(); ++i) {
        CHECK(ms.values[i].real() >= 0.1 - 1e-15);
        CHECK(ms.values[i].real() <= 1.0);
        if (m.values[i].real() == 1.0) CHECK(ms.values[i].real() == 1.0);
    }
    FilterSpec away{{{500, 600}, {-1, 1}}, 0, 0};
    try {
        design_filter(away, p, wg);
        FAIL("expected EmptyPassband");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::empty_passband);
    }
}

TEST_CASE("filter application") {
    auto p = testing::params1(0.15, 1.2, -0.1, 0.3, 0.2);
    auto xg = box_grid(-30, 30, 1024);
    auto wg = default_frequency_grid(xg, p);
    Field f = spectral_bump(xg, p, {1.0}, 0.2, 1.0);
    Field noise = spectral_bump(xg, p, {-2.5}, 0.2, std::sqrt(10.0));
    Field r = sum(f, 1.0, noise);
    CHECK(std::abs(norm2(noise) / norm2(f) - std::sqrt(10.0)) < 1e-3);

    FilterSpec spec{{{0.2, 1.8}}, 0, 0};
    Field mask = design_filter(spec, p, wg);
    Field out = apply_filter(r, mask, p);
    const double gain = snr_db(f, out) - snr_db(f, r);
    CAPTURE(gain);
    CHECK(gain > 10);

    Field R = qpft_fast(r, p, wg), O = qpft_fast(out, p, wg);
    double err = 0;
    for (std::size_t i = 0; i < R.size(); ++i)
        if (mask.values[i].real() == 1.0) err = std::max(err, std::abs(O.values[i] - R.values[i]));
    CHECK(err < 1e-9 * max_abs(R));
    CHECK(rel_l2(apply_filter(out, mask, p), out) < 1e-8);

    Field ones(wg, std::vector<cplx>(wg.size(), 1.0), Domain::frequency);
    CHECK(rel_l2(apply_filter(r, ones, p), r) < 1e-6);
    Field zeros(wg, Domain::frequency);
    CHECK(norm2(apply_filter(r, zeros, p)) < 1e-8 * norm2(r));

    Field off(Grid({{-1.0, 0.01, 1024}}), std::vector<cplx>(1024, 1.0), Domain::frequency);
    try {
        apply_filter(r, off, p);
        FAIL("expected GridMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::grid_mismatch);
    }
}
