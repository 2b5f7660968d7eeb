#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qpft/core.hpp"

namespace qpft {

// Unnormalized DFT of any length: X_m = Σ x_n e^{∓2πi nm/M} (minus for forward).
// Power-of-two lengths use iterative radix-2, others Bluestein.
void fft(std::vector<cplx>& x, bool inverse = false);

// Chirp-z along a ray: y_m = Σ_n x_n e^{iβnm}, m = 0..m_out-1.
std::vector<cplx> chirp_z(std::span<const cplx> x, double beta, std::size_t m_out);

// N-dimensional unnormalized DFT over a row-major array.
void fftn(std::vector<cplx>& x, std::span<const std::size_t> shape, bool inverse = false);

std::size_t next_pow2(std::size_t n);

// Applies `fn(in_line, out_line)` to every line along `axis` and returns the
// reshaped array whose extent on that axis becomes `out_len`.
template <class Fn>
std::vector<cplx> map_axis(const std::vector<cplx>& in, std::span<const std::size_t> shape, std::size_t axis,
                           std::size_t out_len, Fn&& fn) {
    std::size_t outer = 1, inner = 1;
    for (std::size_t k = 0; k < axis; ++k) outer *= shape[k];
    for (std::size_t k = axis + 1; k < shape.size(); ++k) inner *= shape[k];
    const std::size_t m_in = shape[axis];
    std::vector<cplx> out(outer * out_len * inner);
    std::vector<cplx> line_in(m_in), line_out(out_len);
    for (std::size_t o = 0; o < outer; ++o)
        for (std::size_t i = 0; i < inner; ++i) {
            for (std::size_t j = 0; j < m_in; ++j) line_in[j] = in[(o * m_in + j) * inner + i];
            fn(std::span<const cplx>(line_in), std::span<cplx>(line_out));
            for (std::size_t m = 0; m < out_len; ++m) out[(o * out_len + m) * inner + i] = line_out[m];
        }
    return out;
}

}  // namespace qpft
