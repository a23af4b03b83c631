#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hhbounds/box.hpp"
#include "hhbounds/convexity.hpp"
#include "hhbounds/errors.hpp"
#include "hhbounds/pairwise.hpp"
#include "hhbounds/quadrature.hpp"
#include "hhbounds/verdict.hpp"

namespace hhbounds {

enum class Direction { convex, concave };

inline std::string_view to_string(Direction d) {
    return d == Direction::convex ? "convex" : "concave";
}

// One verified (or refuted) instance of the sandwich
//   f(midpoint) <= mean value of f over the box <= corner average,
// reversed for the concave direction. The mean is a quadrature estimate, so
// verification allows slack of tolerance + quad_error on each margin.
struct BoundsReport {
    double lower = 0.0;       // f at the box midpoint
    double mean = 0.0;        // quadrature integral / volume
    double upper = 0.0;       // 2^-n corner sum
    double quad_error = 0.0;  // refinement difference, scaled like the mean
    double left_margin = 0.0;   // mean - lower
    double right_margin = 0.0;  // upper - mean
    bool verified = false;
    Direction direction = Direction::convex;
};

template <ScalarField F>
double hh_lower(const F& f, const Box& box) {
    return f(midpoint(box));
}

// Average of f over all 2^n corners, pairwise-summed.
template <ScalarField F>
double hh_upper(const F& f, const Box& box) {
    PairwiseAccumulator acc;
    const int n = box.dim();
    for_each_mask(n, [&](std::uint32_t bits) { acc.add(f(corner(box, CornerMask(n, bits)))); });
    return acc.total() * std::ldexp(1.0, -n);
}

namespace detail {

inline bool margins_ok(double left, double right, double slack, Direction direction) {
    if (direction == Direction::convex) return left >= -slack && right >= -slack;
    return left <= slack && right <= slack;
}

inline BoundsReport assemble_report(double lower, double mean, double upper, double quad_error,
                                    double tolerance, Direction direction) {
    BoundsReport r;
    r.lower = lower;
    r.mean = mean;
    r.upper = upper;
    r.quad_error = quad_error;
    r.left_margin = mean - lower;
    r.right_margin = upper - mean;
    r.direction = direction;
    r.verified = margins_ok(r.left_margin, r.right_margin, tolerance + quad_error, direction);
    return r;
}

}  // namespace detail

template <ScalarField F>
BoundsReport hh_sandwich(const F& f, const Box& box, const QuadratureRule& rule, double tolerance,
                         Direction direction = Direction::convex) {
    if (!(tolerance >= 0.0)) throw InvariantError("tolerance must be >= 0");
    const double lower = hh_lower(f, box);
    const double upper = hh_upper(f, box);
    QuadratureResult q = integrate(f, box, rule, true);
    const double vol = volume(box);
    return detail::assemble_report(lower, q.value / vol, upper, q.error_estimate / vol, tolerance,
                                   direction);
}

// Discrete instance for the Jensen-type bound: per coordinate i, points
// x_{i,1..m_i} and nonnegative weights summing to 1.
class JensenInstance {
public:
    JensenInstance(std::vector<std::vector<double>> points,
                   std::vector<std::vector<double>> weights)
        : points_(std::move(points)), weights_(std::move(weights)) {
        if (points_.empty()) throw InvariantError("jensen instance needs dimension >= 1");
        if (points_.size() != weights_.size())
            throw DimensionError("jensen points and weights differ in dimension");
        for (std::size_t i = 0; i < points_.size(); ++i) {
            if (points_[i].empty()) throw InvariantError("jensen instance needs m_i >= 1");
            if (points_[i].size() != weights_[i].size())
                throw DimensionError("jensen points and weights differ in count");
            double sum = 0.0;
            for (double w : weights_[i]) {
                if (!(w >= 0.0)) throw InvariantError("jensen weight must be >= 0");
                sum += w;
            }
            if (std::abs(sum - 1.0) > 1e-12)
                throw InvariantError("jensen weights must sum to 1 (to 1e-12)");
            for (double x : points_[i])
                if (!std::isfinite(x)) throw InvariantError("jensen point is not finite");
        }
    }

    int dim() const { return static_cast<int>(points_.size()); }
    const std::vector<double>& points(int axis) const {
        return points_[static_cast<std::size_t>(axis)];
    }
    const std::vector<double>& weights(int axis) const {
        return weights_[static_cast<std::size_t>(axis)];
    }

private:
    std::vector<std::vector<double>> points_;   // [axis][j]
    std::vector<std::vector<double>> weights_;  // [axis][j]
};

struct JensenBound {
    double lhs = 0.0;  // f at the vector of per-coordinate weighted means
    double rhs = 0.0;  // weighted sum of f over all index tuples
    double gap = 0.0;  // rhs - lhs
};

inline constexpr std::int64_t max_jensen_tuples = std::int64_t{1} << 24;

// f(per-coordinate weighted means) vs the full tuple sum
// sum_{j_1..j_n} (prod_i alpha_{i,j_i}) f(x_{1,j_1}, ..., x_{n,j_n}).
// Tuples are visited with coordinate x1 varying fastest; with two points
// {a_i, b_i} per coordinate this reduces to defining_inequality_gap.
template <ScalarField F>
JensenBound jensen_bound(const F& f, const JensenInstance& inst) {
    const int n = inst.dim();
    std::int64_t tuples = 1;
    for (int i = 0; i < n; ++i) {
        auto m = static_cast<std::int64_t>(inst.points(i).size());
        if (tuples > max_jensen_tuples / m)
            throw BudgetError("jensen tuple enumeration limited to 2^24 tuples");
        tuples *= m;
    }
    std::vector<double> mean(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < inst.points(i).size(); ++j)
            acc += inst.weights(i)[j] * inst.points(i)[j];
        mean[static_cast<std::size_t>(i)] = acc;
    }
    const double lhs = f(Vector(std::move(mean)));

    std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
    std::vector<double> coords(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) coords[static_cast<std::size_t>(i)] = inst.points(i)[0];
    PairwiseAccumulator acc;
    for (;;) {
        double w = 1.0;
        for (int i = 0; i < n; ++i) w *= inst.weights(i)[idx[static_cast<std::size_t>(i)]];
        acc.add(w * f(Vector(coords)));
        int i = 0;
        while (i < n) {
            auto ii = static_cast<std::size_t>(i);
            if (++idx[ii] < inst.points(i).size()) {
                coords[ii] = inst.points(i)[idx[ii]];
                break;
            }
            idx[ii] = 0;
            coords[ii] = inst.points(i)[0];
            ++i;
        }
        if (i == n) break;
    }
    const double rhs = acc.total();
    return {lhs, rhs, rhs - lhs};
}

// A weight function failed the positivity/symmetry check; carries the
// falsifying verdict.
class WeightError : public Error {
public:
    WeightError(const std::string& message, ConvexityVerdict verdict)
        : Error(message), verdict_(std::move(verdict)) {}

    const ConvexityVerdict& verdict() const { return verdict_; }

private:
    ConvexityVerdict verdict_;
};

// Weighted sandwich: f(midpoint) <= (integral of p f) / (integral of p)
// <= corner average, for p positive and symmetric about every axis midpoint.
// The weight hypotheses are falsification-checked before any integral is
// taken; a falsified weight raises WeightError. The two integrals share one
// node set and their error estimates propagate into quad_error as
// |d_num| / I_p + |mean| |d_den| / I_p.
template <ScalarField F, ScalarField P>
BoundsReport fejer_sandwich(const F& f, const P& p, const Box& box, const QuadratureRule& rule,
                            double tolerance, Direction direction = Direction::convex,
                            long symmetry_trials = 1000, std::uint64_t rng_seed = 0) {
    if (!(tolerance >= 0.0)) throw InvariantError("tolerance must be >= 0");
    ConvexityVerdict sym = check_symmetry(p, box, symmetry_trials, tolerance, rng_seed);
    if (sym.falsified())
        throw WeightError("weight falsified: " + sym.witness->detail, std::move(sym));
    auto [num, den] = integrate_weighted(f, p, box, rule, true);
    const double lower = hh_lower(f, box);
    const double upper = hh_upper(f, box);
    const double mean = num.value / den.value;
    const double quad_error =
        num.error_estimate / den.value + std::abs(mean) * den.error_estimate / den.value;
    return detail::assemble_report(lower, mean, upper, quad_error, tolerance, direction);
}

}  // namespace hhbounds
