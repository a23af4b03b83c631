#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "hhbounds/box.hpp"
#include "hhbounds/errors.hpp"
#include "hhbounds/pairwise.hpp"
#include "hhbounds/sampling.hpp"
#include "hhbounds/verdict.hpp"

namespace hhbounds {

namespace detail {

// Deterministic lambda schedule: midpoint and endpoint values are the
// cheapest places to catch a convexity violation, so they are injected
// among the uniform draws.
inline double draw_lambda(Sampler& s, long k) {
    switch (k % 8) {
        case 0: return 0.5;
        case 1: return 0.0;
        case 2: return 1.0;
        default: return s.unit();
    }
}

}  // namespace detail

// RHS - LHS of the coordinatewise convexity inequality at one instance:
// LHS  = f(t x + (1 - t) y)  componentwise,
// RHS  = sum over the 2^n mixed corners c (c_i = x_i when bit i is false,
//        y_i when true) of corner_weight(t, mask) * f(c).
// Nonnegative whenever f is convex in each coordinate separately.
template <ScalarField F>
double defining_inequality_gap(const F& f, const Vector& x, const Vector& y,
                               const WeightParam& t) {
    if (x.dim() != y.dim() || t.dim() != x.dim())
        throw DimensionError("defining_inequality_gap requires equal dimensions");
    const int n = x.dim();
    double lhs = f(interpolate(t, x, y));
    PairwiseAccumulator acc;
    for_each_mask(n, [&](std::uint32_t bits) {
        CornerMask mask(n, bits);
        std::vector<double> c(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) c[static_cast<std::size_t>(i)] = mask.upper_at(i) ? y[i] : x[i];
        acc.add(corner_weight(t, mask) * f(Vector(std::move(c))));
    });
    return acc.total() - lhs;
}

// Falsifier for convexity in each coordinate separately. Each trial fixes
// one axis (cycling), samples the remaining coordinates, and tests the 1-D
// convexity inequality along that axis. Witness, if any, comes from the
// lowest-index violating trial.
template <ScalarField F>
ConvexityVerdict is_nfold_convex_fn(const F& f, const Box& box, long trials, double tolerance,
                                    std::uint64_t rng_seed) {
    if (trials < 1) throw InvariantError("trials must be >= 1");
    if (!(tolerance >= 0.0)) throw InvariantError("tolerance must be >= 0");
    Sampler s(rng_seed);
    const int n = box.dim();
    for (long k = 0; k < trials; ++k) {
        const int axis = static_cast<int>(k % n);
        Vector z = sample_point(s, box);
        double u = s.uniform(box.lower()[axis], box.upper()[axis]);
        double v = s.uniform(box.lower()[axis], box.upper()[axis]);
        double lambda = detail::draw_lambda(s, k);
        Vector zu = with_coordinate(z, axis, u);
        Vector zv = with_coordinate(z, axis, v);
        double lhs = f(with_coordinate(z, axis, lambda * u + (1.0 - lambda) * v));
        double rhs = lambda * f(zu) + (1.0 - lambda) * f(zv);
        if (rhs - lhs < -tolerance) {
            Witness w{{zu, zv},
                      {lambda},
                      lhs,
                      rhs,
                      "1-d convexity violated along x" + std::to_string(axis + 1)};
            return {VerdictStatus::falsified, std::move(w), k + 1, tolerance};
        }
    }
    return {VerdictStatus::not_falsified, std::nullopt, trials, tolerance};
}

// Falsifier for ordinary (joint) convexity: one scalar lambda for all
// coordinates. Strictly stronger than coordinatewise convexity.
template <ScalarField F>
ConvexityVerdict is_convex_fn(const F& f, const Box& box, long trials, double tolerance,
                              std::uint64_t rng_seed) {
    if (trials < 1) throw InvariantError("trials must be >= 1");
    if (!(tolerance >= 0.0)) throw InvariantError("tolerance must be >= 0");
    Sampler s(rng_seed);
    const int n = box.dim();
    for (long k = 0; k < trials; ++k) {
        Vector x = sample_point(s, box);
        Vector y = sample_point(s, box);
        double lambda = detail::draw_lambda(s, k);
        std::vector<double> m(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            m[static_cast<std::size_t>(i)] = lambda * x[i] + (1.0 - lambda) * y[i];
        double lhs = f(Vector(std::move(m)));
        double rhs = lambda * f(x) + (1.0 - lambda) * f(y);
        if (rhs - lhs < -tolerance) {
            Witness w{{x, y}, {lambda}, lhs, rhs, "joint convexity violated"};
            return {VerdictStatus::falsified, std::move(w), k + 1, tolerance};
        }
    }
    return {VerdictStatus::not_falsified, std::nullopt, trials, tolerance};
}

// [f(..y1..) + f(..y2..)] - [f(..x1..) + f(..x2..)] with the four values
// substituted at the given axis (1-based, matching variable x<axis>) and the
// remaining coordinates fixed by z. Requires y1 <= x1 <= x2 <= y2 and
// x1 + x2 = y1 + y2: the inner pair is a contraction of the outer pair with
// the same mean, so the gap is nonnegative for coordinatewise convex f.
template <ScalarField F>
double lemma_corner_majorization_gap(const F& f, const Vector& z, int axis, double x1, double x2,
                                     double y1, double y2) {
    if (axis < 1 || axis > z.dim()) throw DimensionError("axis out of range");
    if (!(y1 <= x1 && x1 <= x2 && x2 <= y2))
        throw InvariantError("requires y1 <= x1 <= x2 <= y2");
    const double inner = x1 + x2;
    const double outer = y1 + y2;
    const double scale = std::max({1.0, std::abs(inner), std::abs(outer)});
    if (std::abs(inner - outer) > 1e-12 * scale)
        throw InvariantError("requires x1 + x2 = y1 + y2 (to 1e-12 relative)");
    const int i = axis - 1;
    return (f(with_coordinate(z, i, y1)) + f(with_coordinate(z, i, y2))) -
           (f(with_coordinate(z, i, x1)) + f(with_coordinate(z, i, x2)));
}

}  // namespace hhbounds
