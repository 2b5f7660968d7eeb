#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qpft/error.hpp"

namespace qpft {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double v) noexcept;
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

struct Quintuple {
    double a = 0, b = 1, c = 0, d = 0, e = 0;
    bool operator==(const Quintuple&) const = default;
};

// Per-axis kernel parameters Λ = (Λ_1, ..., Λ_N). Immutable after validation.
class Params {
public:
    static Params validate(std::vector<Quintuple> raw);

    std::size_t dims() const noexcept { return q_.size(); }
    const Quintuple& operator[](std::size_t k) const { return q_.at(k); }
    const std::vector<Quintuple>& axes() const noexcept { return q_; }

    // Every entry sign-flipped: the parameters of K_{-Λ}.
    Params negated() const;
    // All five entries multiplied by λ².
    Params scaled(double lambda) const;
    // (−c, −b, −a, −e, −d) per axis. A forward transform with these parameters
    // over the frequency variable is the inverse transform of Λ.
    Params swapped() const;

    // Principal roots √(b_k/i) and √(b_k i).
    cplx root(std::size_t k) const { return root_[k]; }
    cplx root_neg(std::size_t k) const { return root_neg_[k]; }
    // C_Λ = Π √(b_k/i), C_{−Λ} = Π √(b_k i).
    cplx c_lambda() const;
    cplx c_neg_lambda() const;

    const std::vector<std::string>& warnings() const noexcept { return warnings_; }

    bool operator==(const Params& o) const { return q_ == o.q_; }

private:
    std::vector<Quintuple> q_;
    std::vector<cplx> root_, root_neg_;
    std::vector<std::string> warnings_;
};

Params validate_params(std::vector<Quintuple> raw);
Params scale_params(const Params& p, double lambda);

struct Axis {
    double origin = 0;
    double step = 1;
    std::size_t count = 1;

    double operator()(std::size_t j) const noexcept { return origin + static_cast<double>(j) * step; }
    double last() const noexcept { return (*this)(count - 1); }
};

class Grid {
public:
    Grid() = default;
    explicit Grid(std::vector<Axis> axes);

    std::size_t dims() const noexcept { return axes_.size(); }
    const Axis& axis(std::size_t k) const { return axes_.at(k); }
    const std::vector<Axis>& axes() const noexcept { return axes_; }
    std::vector<std::size_t> shape() const;
    std::size_t size() const noexcept;
    double cell_volume() const noexcept;

    // Coordinates of the flat row-major index `flat` (last axis fastest).
    void coords(std::size_t flat, std::span<double> out) const;

    bool same_as(const Grid& o, double rel_tol = 1e-12) const;

private:
    std::vector<Axis> axes_;
};

enum class Domain { space, frequency };

struct Field {
    Grid grid;
    std::vector<cplx> values;
    Domain domain = Domain::space;

    Field() = default;
    Field(Grid g, Domain d);
    Field(Grid g, std::vector<cplx> v, Domain d);

    std::size_t size() const noexcept { return values.size(); }
    void require_finite() const;
};

// Weighted L² norm (cell-volume quadrature) and relative L² distance.
double norm2(const Field& f);
double rel_l2(const Field& a, const Field& b);
double max_abs(const Field& f);

void require_dims(const Params& p, const Grid& g);

enum class ChirpKind { ad, ce };

// e^{iλ Σ_k (a_k x_k² + d_k x_k)} (ad) or the c,e analogue (ce).
double chirp_phase(double lambda, ChirpKind which, const Params& p, std::span<const double> x);
Field chirp(double lambda, ChirpKind which, const Params& p, const Grid& grid);

// Single-axis kernel √(b/(2πi)) e^{i(a x² + b x ω + c ω² + d x + e ω)} given the principal root √(b/i).
cplx kernel1(const Quintuple& q, cplx root, double omega, double x);
cplx kernel_eval(const Params& p, std::span<const double> omega, std::span<const double> x);

}  // namespace qpft
