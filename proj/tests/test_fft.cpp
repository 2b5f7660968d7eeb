#include <doctest.h>

#include <random>

#include "qpft/fft.hpp"

using namespace qpft;

namespace {

std::vector<cplx> naive_dft(const std::vector<cplx>& x, bool inverse) {
    const std::size_t n = x.size();
    std::vector<cplx> y(n);
    for (std::size_t m = 0; m < n; ++m)
        for (std::size_t k = 0; k < n; ++k)
            y[m] += x[k] * std::polar(1.0, (inverse ? 2 : -2) * pi * static_cast<double>((k * m) % n) /
                                               static_cast<double>(n));
    return y;
}

std::vector<cplx> noise(std::size_t n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> d;
    std::vector<cplx> x(n);
    for (auto& v : x) v = {d(rng), d(rng)};
    return x;
}

double max_err(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST_CASE("fft matches the naive DFT for power-of-two and other lengths") {
    for (std::size_t n : {1u, 2u, 8u, 64u, 3u, 7u, 100u, 243u}) {
        auto x = noise(n, static_cast<unsigned>(n));
        for (bool inv : {false, true}) {
            auto y = x;
            fft(y, inv);
            CHECK(max_err(y, naive_dft(x, inv)) < 1e-11 * static_cast<double>(n));
        }
    }
}

TEST_CASE("chirp_z equals the direct sum") {
    auto x = noise(37, 1);
    const double beta = 0.123;
    auto y = chirp_z(x, beta, 53);
    REQUIRE(y.size() == 53);
    double err = 0;
    for (std::size_t m = 0; m < 53; ++m) {
        cplx s = 0;
        for (std::size_t n = 0; n < 37; ++n) s += x[n] * std::polar(1.0, beta * static_cast<double>(n * m));
        err = std::max(err, std::abs(s - y[m]));
    }
    CHECK(err < 1e-11);
}

TEST_CASE("fftn round trip") {
    std::vector<std::size_t> shape{6, 8};
    auto x = noise(48, 3);
    auto y = x;
    fftn(y, shape, false);
    fftn(y, shape, true);
    for (auto& v : y) v /= 48.0;
    CHECK(max_err(x, y) < 1e-13);
}
