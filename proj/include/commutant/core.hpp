#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace commutant {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr const char* kVersion = "0.1.0";

// ---------------------------------------------------------------------------
// Errors

struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A flow trajectory left its declared domain box.
struct DomainExitError : std::runtime_error {
    double exit_time;
    explicit DomainExitError(double t)
        : std::runtime_error("trajectory left the domain box at t = " + std::to_string(t)),
          exit_time(t) {}
};

struct NonCommutingError : std::runtime_error {
    int i, j;
    double norm;
    NonCommutingError(int i_, int j_, double norm_)
        : std::runtime_error("generators " + std::to_string(i_) + " and " + std::to_string(j_) +
                             " do not commute (||[A_i,A_j]||_F = " + std::to_string(norm_) + ")"),
          i(i_), j(j_), norm(norm_) {}
};

struct DefectiveGeneratorError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RankDeficientError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Small shared helpers

inline bool is_finite(const Vector& v) { return v.allFinite(); }
inline bool is_finite(const Matrix& m) { return m.allFinite(); }

inline void require_finite(const Vector& v, const char* what) {
    if (!v.allFinite()) throw std::invalid_argument(std::string(what) + ": non-finite entries");
}

inline void require_dim(const Vector& v, Eigen::Index dim, const char* what) {
    if (v.size() != dim)
        throw DimensionError(std::string(what) + ": expected dim " + std::to_string(dim) +
                             ", got " + std::to_string(v.size()));
}

/// Central-difference step h = eps^(1/3) * max(1, ||p||_inf).
inline double default_fd_step(const Vector& p) {
    const double eps = std::numeric_limits<double>::epsilon();
    const double scale = p.size() > 0 ? std::max(1.0, p.lpNorm<Eigen::Infinity>()) : 1.0;
    return std::cbrt(eps) * scale;
}

// ---------------------------------------------------------------------------
// Axis-aligned domain box

struct Box {
    Vector lo, hi;

    Box() = default;
    Box(Vector lo_, Vector hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
        if (lo.size() != hi.size()) throw DimensionError("Box: lo/hi size mismatch");
        for (Eigen::Index i = 0; i < lo.size(); ++i)
            if (!(lo[i] <= hi[i])) throw std::invalid_argument("Box: lo > hi");
    }

    static Box cube(int dim, double a, double b) {
        return Box(Vector::Constant(dim, a), Vector::Constant(dim, b));
    }

    int dim() const { return static_cast<int>(lo.size()); }

    bool contains(const Vector& p) const {
        if (p.size() != lo.size()) return false;
        return (p.array() >= lo.array()).all() && (p.array() <= hi.array()).all();
    }

    Vector center() const { return 0.5 * (lo + hi); }

    /// Maps a unit-cube coordinate to the box.
    Vector from_unit(const Vector& u) const {
        return lo.array() + u.array() * (hi - lo).array();
    }
};

// ---------------------------------------------------------------------------
// Deterministic low-discrepancy sampling (additive Kronecker sequence).
// Used wherever the contracts call for fixed, seedless sample sets.

inline Vector kronecker_point(int index, int dim) {
    // R_d sequence: alphas from the unique positive root of x^(d+1) = x + 1.
    double g = 1.0;
    for (int it = 0; it < 64; ++it) g = std::pow(1.0 + g, 1.0 / (dim + 1));
    Vector u(dim);
    double a = 1.0;
    for (int j = 0; j < dim; ++j) {
        a /= g;
        double v = 0.5 + (index + 1) * a;
        u[j] = v - std::floor(v);
    }
    return u;
}

inline Vector kronecker_point(int index, const Box& box) {
    return box.from_unit(kronecker_point(index, box.dim()));
}

}  // namespace commutant
