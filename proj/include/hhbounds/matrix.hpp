#pragma once

#include <cmath>
#include <concepts>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "hhbounds/box.hpp"
#include "hhbounds/errors.hpp"
#include "hhbounds/hh.hpp"

namespace hhbounds {

// Real n x n matrix, entries stored row-major. A matrix is treated as the
// point (x_11, ..., x_1n, x_21, ..., x_nn) of R^{n^2}.
class SquareMatrix {
public:
    SquareMatrix(int n, std::vector<double> entries_row_major)
        : n_(n), entries_(std::move(entries_row_major)) {
        if (n < 1) throw InvariantError("matrix order must be >= 1");
        if (entries_.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
            throw DimensionError("matrix needs n^2 entries");
        for (double e : entries_)
            if (!std::isfinite(e)) throw InvariantError("matrix entry is not finite");
    }

    int n() const { return n_; }
    double at(int i, int j) const {
        return entries_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) +
                        static_cast<std::size_t>(j)];
    }
    std::span<const double> entries() const { return entries_; }

    friend bool operator==(const SquareMatrix& a, const SquareMatrix& b) {
        return a.n_ == b.n_ && a.entries_ == b.entries_;
    }

private:
    int n_;
    std::vector<double> entries_;
};

// Elementwise matrix interval [A, B] with a_ij < b_ij strictly.
class MatrixInterval {
public:
    MatrixInterval(SquareMatrix lower, SquareMatrix upper)
        : lower_(std::move(lower)), upper_(std::move(upper)) {
        if (lower_.n() != upper_.n())
            throw DimensionError("matrix interval endpoints must have equal order");
        for (std::size_t k = 0; k < lower_.entries().size(); ++k)
            if (!(lower_.entries()[k] < upper_.entries()[k]))
                throw InvariantError("matrix interval requires a_ij < b_ij strictly");
    }

    int n() const { return lower_.n(); }
    const SquareMatrix& lower() const { return lower_; }
    const SquareMatrix& upper() const { return upper_; }

private:
    SquareMatrix lower_;
    SquareMatrix upper_;
};

inline Vector flatten(const SquareMatrix& m) {
    return Vector(std::vector<double>(m.entries().begin(), m.entries().end()));
}

inline SquareMatrix unflatten(const Vector& v, int n) {
    if (v.dim() != n * n) throw DimensionError("unflatten needs a vector of length n^2");
    return SquareMatrix(n, std::vector<double>(v.coords().begin(), v.coords().end()));
}

// The 2x2 matrix product written on flattened vectors:
// (a,b,c,d)(u,v,x,y) = (au + bx, av + by, cu + dx, cv + dy).
inline Vector vec_product_2x2(const Vector& u, const Vector& v) {
    if (u.dim() != 4 || v.dim() != 4)
        throw DimensionError("vec_product_2x2 requires length-4 vectors");
    return Vector{u[0] * v[0] + u[1] * v[2], u[0] * v[1] + u[1] * v[3],
                  u[2] * v[0] + u[3] * v[2], u[2] * v[1] + u[3] * v[3]};
}

// [A, B] as the hypercuboid prod_ij [a_ij, b_ij] in R^{n^2}, row-major.
inline Box matrix_interval_to_box(const MatrixInterval& iv) {
    return Box(flatten(iv.lower()), flatten(iv.upper()));
}

template <typename F>
concept MatrixField = requires(const F& f, const SquareMatrix& m) {
    { f(m) } -> std::convertible_to<double>;
};

// Sandwich for a scalar-valued matrix function on a matrix interval:
// delegates to hh_sandwich on the flattened box, so corners range over all
// 2^{n^2} matrices with c_ij in {a_ij, b_ij}. Needs n^2 <= 24, i.e. n <= 4.
template <MatrixField F>
BoundsReport matrix_hh_sandwich(const F& f, const MatrixInterval& iv, const QuadratureRule& rule,
                                double tolerance, Direction direction = Direction::convex) {
    const int n = iv.n();
    Box box = matrix_interval_to_box(iv);
    auto g = [&](const Vector& v) { return f(unflatten(v, n)); };
    return hh_sandwich(g, box, rule, tolerance, direction);
}

}  // namespace hhbounds
