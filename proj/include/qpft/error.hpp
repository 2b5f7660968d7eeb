#pragma once

#include <stdexcept>
#include <string>

namespace qpft {

enum class Errc {
    ok = 0,
    zero_coupling,
    empty_params,
    dim_mismatch,
    zero_lambda,
    non_finite,
    incommensurate_grid,
    zero_signal,
    step_mismatch,
    interpolation_overrun,
    unsupported_kind,
    non_positive_lambda,
    quadrature_nonconvergence,
    edge_mass,
    resolution,
    no_spectral_gap,
    singular_symbol,
    empty_passband,
    grid_mismatch,
    invalid_argument,
    io,
};

const char* errc_name(Errc c) noexcept;

// True for failures of the numerics rather than of the inputs.
bool errc_is_numeric(Errc c) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace qpft
