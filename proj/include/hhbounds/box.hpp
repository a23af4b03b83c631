#pragma once

#include <cmath>
#include <concepts>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hhbounds/errors.hpp"
#include "hhbounds/sampling.hpp"

namespace hhbounds {

// A point of R^n, n >= 1, all coordinates finite. Immutable.
class Vector {
public:
    explicit Vector(std::vector<double> coords) : coords_(std::move(coords)) {
        if (coords_.empty()) throw InvariantError("vector must have dimension >= 1");
        for (double c : coords_)
            if (!std::isfinite(c)) throw InvariantError("vector coordinate is not finite");
    }
    Vector(std::initializer_list<double> coords) : Vector(std::vector<double>(coords)) {}

    int dim() const { return static_cast<int>(coords_.size()); }
    double operator[](int i) const { return coords_[static_cast<std::size_t>(i)]; }
    std::span<const double> coords() const { return coords_; }

    friend bool operator==(const Vector& a, const Vector& b) { return a.coords_ == b.coords_; }

private:
    std::vector<double> coords_;
};

// Copy of v with coordinate i (0-based) replaced by value.
inline Vector with_coordinate(const Vector& v, int i, double value) {
    if (i < 0 || i >= v.dim()) throw DimensionError("coordinate index out of range");
    std::vector<double> c(v.coords().begin(), v.coords().end());
    c[static_cast<std::size_t>(i)] = value;
    return Vector(std::move(c));
}

// Hypercuboid [a, b] = prod_i [a_i, b_i], strictly a_i < b_i on every axis
// so that 1 / prod (b_i - a_i) is finite.
class Box {
public:
    Box(Vector lower, Vector upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
        if (lower_.dim() != upper_.dim())
            throw DimensionError("box endpoints must have equal dimension");
        for (int i = 0; i < lower_.dim(); ++i)
            if (!(lower_[i] < upper_[i]))
                throw InvariantError("box requires lower < upper strictly on every axis");
    }

    int dim() const { return lower_.dim(); }
    const Vector& lower() const { return lower_; }
    const Vector& upper() const { return upper_; }

private:
    Vector lower_;
    Vector upper_;
};

// Corner enumeration refuses beyond 2^24 corners.
inline constexpr int max_corner_dim = 24;

// Selects one of the 2^n corners: bit i false -> a_i, true -> b_i.
// Bit 0 is coordinate x1 (least significant).
class CornerMask {
public:
    CornerMask(int dim, std::uint32_t bits) : bits_(bits), dim_(dim) {
        if (dim < 1 || dim > max_corner_dim)
            throw DimensionError("corner mask dimension must be in [1, 24]");
        if (dim < 32 && bits >> dim)
            throw InvariantError("corner mask has bits beyond its dimension");
    }

    int dim() const { return dim_; }
    std::uint32_t bits() const { return bits_; }
    bool upper_at(int i) const { return (bits_ >> i) & 1u; }

    friend bool operator==(const CornerMask& a, const CornerMask& b) {
        return a.dim_ == b.dim_ && a.bits_ == b.bits_;
    }

private:
    std::uint32_t bits_;
    int dim_;
};

// Componentwise interpolation weights, every t_i in [0, 1].
class WeightParam {
public:
    explicit WeightParam(Vector t) : t_(std::move(t)) {
        for (int i = 0; i < t_.dim(); ++i)
            if (!(t_[i] >= 0.0 && t_[i] <= 1.0))
                throw InvariantError("interpolation weight must lie in [0, 1]");
    }
    WeightParam(std::initializer_list<double> t) : WeightParam(Vector(t)) {}

    int dim() const { return t_.dim(); }
    double operator[](int i) const { return t_[i]; }
    const Vector& t() const { return t_; }

private:
    Vector t_;
};

// x <= y in the product (componentwise) order. Partial: incomparable pairs
// are false in both directions.
inline bool product_order_leq(const Vector& x, const Vector& y) {
    if (x.dim() != y.dim()) throw DimensionError("product order requires equal dimensions");
    for (int i = 0; i < x.dim(); ++i)
        if (!(x[i] <= y[i])) return false;
    return true;
}

inline Vector corner(const Box& box, const CornerMask& mask) {
    if (mask.dim() != box.dim()) throw DimensionError("corner mask does not match box dimension");
    std::vector<double> c(static_cast<std::size_t>(box.dim()));
    for (int i = 0; i < box.dim(); ++i)
        c[static_cast<std::size_t>(i)] = mask.upper_at(i) ? box.upper()[i] : box.lower()[i];
    return Vector(std::move(c));
}

// Visits all 2^dim masks in increasing bit order: 00..0, 10..0, 01..0, 11..0, ...
// (coordinate x1 toggles fastest).
template <typename Fn>
void for_each_mask(int dim, Fn&& fn) {
    if (dim < 1) throw DimensionError("dimension must be >= 1");
    if (dim > max_corner_dim)
        throw BudgetError("corner enumeration limited to dimension 24 (2^24 corners)");
    const std::uint32_t count = 1u << dim;
    for (std::uint32_t bits = 0; bits < count; ++bits) fn(bits);
}

inline std::vector<std::pair<CornerMask, Vector>> corners(const Box& box) {
    std::vector<std::pair<CornerMask, Vector>> out;
    out.reserve(std::size_t{1} << box.dim());
    for_each_mask(box.dim(), [&](std::uint32_t bits) {
        CornerMask m(box.dim(), bits);
        out.emplace_back(m, corner(box, m));
    });
    return out;
}

// Componentwise t_i x_i + (1 - t_i) y_i.
inline Vector interpolate(const WeightParam& t, const Vector& x, const Vector& y) {
    if (t.dim() != x.dim() || x.dim() != y.dim())
        throw DimensionError("interpolate requires equal dimensions");
    std::vector<double> c(static_cast<std::size_t>(x.dim()));
    for (int i = 0; i < x.dim(); ++i)
        c[static_cast<std::size_t>(i)] = t[i] * x[i] + (1.0 - t[i]) * y[i];
    return Vector(std::move(c));
}

// prod_i p_i with p_i = t_i at a lower endpoint, 1 - t_i at an upper one.
// Over all masks these products form a partition of unity.
inline double corner_weight(const WeightParam& t, const CornerMask& mask) {
    if (t.dim() != mask.dim()) throw DimensionError("corner_weight requires equal dimensions");
    double w = 1.0;
    for (int i = 0; i < t.dim(); ++i) w *= mask.upper_at(i) ? (1.0 - t[i]) : t[i];
    return w;
}

inline Vector midpoint(const Box& box) {
    std::vector<double> c(static_cast<std::size_t>(box.dim()));
    for (int i = 0; i < box.dim(); ++i)
        c[static_cast<std::size_t>(i)] = (box.lower()[i] + box.upper()[i]) / 2.0;
    return Vector(std::move(c));
}

inline double volume(const Box& box) {
    double v = 1.0;
    for (int i = 0; i < box.dim(); ++i) v *= box.upper()[i] - box.lower()[i];
    return v;
}

template <typename F>
concept ScalarField = requires(const F& f, const Vector& v) {
    { f(v) } -> std::convertible_to<double>;
};

template <typename F>
concept SetPredicate = requires(const F& f, const Vector& v) {
    { f(v) } -> std::convertible_to<bool>;
};

inline Vector sample_point(Sampler& s, const Box& box) {
    std::vector<double> c(static_cast<std::size_t>(box.dim()));
    for (int i = 0; i < box.dim(); ++i)
        c[static_cast<std::size_t>(i)] = s.uniform(box.lower()[i], box.upper()[i]);
    return Vector(std::move(c));
}

inline WeightParam sample_weight(Sampler& s, int dim) {
    std::vector<double> t(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) t[static_cast<std::size_t>(i)] = s.unit();
    return WeightParam(Vector(std::move(t)));
}

struct SetWitness {
    Vector x;
    Vector y;
    Vector t;
    Vector outside;  // componentwise t x + (1 - t) y, not a member
};

struct SetVerdict {
    bool falsified = false;
    std::optional<SetWitness> witness;
    long trials_run = 0;
};

// Statistical falsifier for closure under componentwise interpolation:
// draws member points x, y and independent per-coordinate t, and checks
// t x + (1 - t) y stays in the set. Can only disprove, never prove.
template <SetPredicate M>
SetVerdict is_nfold_convex_set(const M& membership, const Box& bounding, long trials,
                               std::uint64_t rng_seed) {
    if (trials < 1) throw InvariantError("trials must be >= 1");
    Sampler s(rng_seed);
    constexpr long max_consecutive_rejections = 10000;
    long consecutive = 0;
    auto draw_member = [&]() -> Vector {
        for (;;) {
            Vector p = sample_point(s, bounding);
            if (membership(p)) {
                consecutive = 0;
                return p;
            }
            if (++consecutive >= max_consecutive_rejections)
                throw InconclusiveError(
                    "membership predicate never held within the sampling budget");
        }
    };
    for (long k = 0; k < trials; ++k) {
        Vector x = draw_member();
        Vector y = draw_member();
        WeightParam t = sample_weight(s, bounding.dim());
        Vector z = interpolate(t, x, y);
        if (!membership(z)) return {true, SetWitness{x, y, t.t(), z}, k + 1};
    }
    return {false, std::nullopt, trials};
}

}  // namespace hhbounds
