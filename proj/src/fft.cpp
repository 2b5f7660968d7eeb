#include "qpft/fft.hpp"

#include <cmath>
#include <cstdint>

namespace qpft {

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

namespace {

void radix2(std::vector<cplx>& x, bool inverse) {
    const std::size_t n = x.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }
    const double sgn = inverse ? 1.0 : -1.0;
    // Twiddles computed directly per stage to keep roundoff at one rounding each.
    std::vector<cplx> tw(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k)
        tw[k] = std::polar(1.0, sgn * 2.0 * pi * static_cast<double>(k) / static_cast<double>(n));
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2, stride = n / len;
        for (std::size_t s = 0; s < n; s += len)
            for (std::size_t k = 0; k < half; ++k) {
                cplx u = x[s + k];
                cplx v = x[s + k + half] * tw[k * stride];
                x[s + k] = u + v;
                x[s + k + half] = u - v;
            }
    }
}

void bluestein(std::vector<cplx>& x, bool inverse) {
    const std::size_t n = x.size();
    const std::size_t m = next_pow2(2 * n - 1);
    const double sgn = inverse ? 1.0 : -1.0;
    // w_k = e^{sgn·iπ k²/n}, with k² reduced mod 2n in exact integer arithmetic.
    std::vector<cplx> w(n);
    const std::uint64_t two_n = 2 * static_cast<std::uint64_t>(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::uint64_t kk = (static_cast<std::uint64_t>(k) * k) % two_n;
        w[k] = std::polar(1.0, sgn * pi * static_cast<double>(kk) / static_cast<double>(n));
    }
    std::vector<cplx> a(m), b(m);
    for (std::size_t k = 0; k < n; ++k) a[k] = x[k] * w[k];
    b[0] = std::conj(w[0]);
    for (std::size_t k = 1; k < n; ++k) b[k] = b[m - k] = std::conj(w[k]);
    radix2(a, false);
    radix2(b, false);
    for (std::size_t k = 0; k < m; ++k) a[k] *= b[k];
    radix2(a, true);
    const double scale = 1.0 / static_cast<double>(m);
    for (std::size_t k = 0; k < n; ++k) x[k] = a[k] * scale * w[k];
}

}  // namespace

void fft(std::vector<cplx>& x, bool inverse) {
    const std::size_t n = x.size();
    if (n <= 1) return;
    if ((n & (n - 1)) == 0)
        radix2(x, inverse);
    else
        bluestein(x, inverse);
}

std::vector<cplx> chirp_z(std::span<const cplx> x, double beta, std::size_t m_out) {
    const std::size_t n = x.size();
    std::vector<cplx> y(m_out);
    if (n == 0 || m_out == 0) return y;
    // nm = (n² + m² − (m−n)²)/2
    auto half_sq = [beta](std::int64_t j) {
        return std::polar(1.0, 0.5 * beta * static_cast<double>(j * j));
    };
    const std::size_t len = next_pow2(n + m_out - 1);
    std::vector<cplx> a(len), b(len);
    for (std::size_t k = 0; k < n; ++k) a[k] = x[k] * half_sq(static_cast<std::int64_t>(k));
    // b holds e^{−iβ j²/2} for j = −(n−1)..m_out−1, wrapped.
    for (std::size_t j = 0; j < m_out; ++j) b[j] = std::conj(half_sq(static_cast<std::int64_t>(j)));
    for (std::size_t j = 1; j < n; ++j) b[len - j] = std::conj(half_sq(static_cast<std::int64_t>(j)));
    radix2(a, false);
    radix2(b, false);
    for (std::size_t k = 0; k < len; ++k) a[k] *= b[k];
    radix2(a, true);
    const double scale = 1.0 / static_cast<double>(len);
    for (std::size_t m = 0; m < m_out; ++m)
        y[m] = a[m] * scale * half_sq(static_cast<std::int64_t>(m));
    return y;
}

void fftn(std::vector<cplx>& x, std::span<const std::size_t> shape, bool inverse) {
    for (std::size_t ax = 0; ax < shape.size(); ++ax) {
        x = map_axis(x, shape, ax, shape[ax], [inverse](std::span<const cplx> in, std::span<cplx> out) {
            std::vector<cplx> line(in.begin(), in.end());
            fft(line, inverse);
            std::copy(line.begin(), line.end(), out.begin());
        });
    }
}

}  // namespace qpft
