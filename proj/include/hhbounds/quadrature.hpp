#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hhbounds/box.hpp"
#include "hhbounds/errors.hpp"
#include "hhbounds/pairwise.hpp"
#include "hhbounds/sampling.hpp"
#include "hhbounds/verdict.hpp"

namespace hhbounds {

namespace detail {

// P_m(x) and P'_m(x) by the three-term recurrence. |x| < 1 required for the
// derivative identity.
inline std::pair<double, double> legendre_pd(int m, double x) {
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= m; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    double d = m * (x * p1 - p0) / (x * x - 1.0);
    return {p1, d};
}

}  // namespace detail

// Gauss-Legendre rule on the reference interval [-1, 1]: m nodes integrate
// polynomials of degree <= 2m - 1 exactly. Nodes are the roots of P_m,
// found by Newton iteration to 1e-15 and mirrored so the rule is exactly
// symmetric about 0. Rules are cached per m.
class QuadratureRule {
public:
    static const QuadratureRule& gauss_legendre(int nodes_per_axis) {
        if (nodes_per_axis < 1)
            throw InvariantError("quadrature rule needs at least one node per axis");
        static std::mutex mu;
        static std::map<int, std::unique_ptr<QuadratureRule>> cache;
        std::scoped_lock lock(mu);
        auto& slot = cache[nodes_per_axis];
        if (!slot) slot = std::unique_ptr<QuadratureRule>(new QuadratureRule(nodes_per_axis));
        return *slot;
    }

    int nodes_per_axis() const { return static_cast<int>(nodes_.size()); }
    std::span<const double> nodes() const { return nodes_; }
    std::span<const double> weights() const { return weights_; }

private:
    explicit QuadratureRule(int m)
        : nodes_(static_cast<std::size_t>(m)), weights_(static_cast<std::size_t>(m)) {
        if (m == 1) {
            nodes_[0] = 0.0;
            weights_[0] = 2.0;
        } else {
            for (int i = 0; i < (m + 1) / 2; ++i) {
                // i-th root from the right; Newton from the Chebyshev-like guess
                double z = std::cos(M_PI * (i + 0.75) / (m + 0.5));
                bool middle = (m % 2 == 1) && (i == m / 2);
                if (middle) {
                    z = 0.0;  // odd m has an exact root at the origin
                } else {
                    for (int it = 0; it < 100; ++it) {
                        auto [p, d] = detail::legendre_pd(m, z);
                        double dz = p / d;
                        z -= dz;
                        if (std::abs(dz) <= 1e-15) break;
                    }
                }
                auto [p, d] = detail::legendre_pd(m, z);
                (void)p;
                double w = 2.0 / ((1.0 - z * z) * d * d);
                std::size_t hi = static_cast<std::size_t>(m - 1 - i);
                std::size_t lo = static_cast<std::size_t>(i);
                nodes_[hi] = z;
                nodes_[lo] = -z;
                weights_[hi] = w;
                weights_[lo] = w;
            }
        }
        validate();
    }

    void validate() const {
        const std::size_t m = nodes_.size();
        double wsum = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (!(weights_[i] > 0.0)) throw InvariantError("quadrature weight not positive");
            if (!(nodes_[i] > -1.0 && nodes_[i] < 1.0))
                throw InvariantError("quadrature node outside (-1, 1)");
            if (i > 0 && !(nodes_[i] > nodes_[i - 1]))
                throw InvariantError("quadrature nodes not strictly increasing");
            if (nodes_[i] != -nodes_[m - 1 - i])
                throw InvariantError("quadrature nodes not symmetric about 0");
            wsum += weights_[i];
        }
        if (std::abs(wsum - 2.0) > 1e-12)
            throw InvariantError("quadrature weights do not sum to 2");
    }

    std::vector<double> nodes_;
    std::vector<double> weights_;
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;  // |value_m - value_2m| when refined, else 0
    std::int64_t evaluations = 0;
};

// Hard cap on integrand evaluations per call.
inline constexpr std::int64_t max_quadrature_evaluations = 100'000'000;

namespace detail {

// m^n, saturating just above the evaluation budget.
inline std::int64_t tensor_point_count(int m, int n) {
    std::int64_t c = 1;
    for (int i = 0; i < n; ++i) {
        if (c > max_quadrature_evaluations / m) return max_quadrature_evaluations + 1;
        c *= m;
    }
    return c;
}

// Single tensor-product pass over the box. Points are visited in odometer
// order (axis x1 fastest) and accumulated pairwise, so the result is a fixed
// function of (f, box, rule).
template <ScalarField F>
double tensor_pass(const F& f, const Box& box, const QuadratureRule& rule) {
    const int n = box.dim();
    const int m = rule.nodes_per_axis();
    auto nodes = rule.nodes();
    auto weights = rule.weights();
    std::vector<double> center(static_cast<std::size_t>(n));
    std::vector<double> half(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        center[static_cast<std::size_t>(i)] = (box.lower()[i] + box.upper()[i]) / 2.0;
        half[static_cast<std::size_t>(i)] = (box.upper()[i] - box.lower()[i]) / 2.0;
    }
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    std::vector<double> coords(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        coords[static_cast<std::size_t>(i)] =
            center[static_cast<std::size_t>(i)] + half[static_cast<std::size_t>(i)] * nodes[0];
    PairwiseAccumulator acc;
    for (;;) {
        double w = 1.0;
        for (int i = 0; i < n; ++i) w *= weights[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
        acc.add(w * f(Vector(coords)));
        int i = 0;
        while (i < n) {
            auto ii = static_cast<std::size_t>(i);
            if (++idx[ii] < m) {
                coords[ii] = center[ii] + half[ii] * nodes[static_cast<std::size_t>(idx[ii])];
                break;
            }
            idx[ii] = 0;
            coords[ii] = center[ii] + half[ii] * nodes[0];
            ++i;
        }
        if (i == n) break;
    }
    double scale = 1.0;
    for (int i = 0; i < n; ++i) scale *= half[static_cast<std::size_t>(i)];
    return acc.total() * scale;
}

}  // namespace detail

// Tensor-product Gauss-Legendre approximation of the integral of f over the
// box. With refine, a second pass at 2m nodes per axis supplies the returned
// value and |value_m - value_2m| as a conservative error estimate.
template <ScalarField F>
QuadratureResult integrate(const F& f, const Box& box, const QuadratureRule& rule, bool refine) {
    const int n = box.dim();
    const int m = rule.nodes_per_axis();
    std::int64_t base = detail::tensor_point_count(m, n);
    std::int64_t fine = refine ? detail::tensor_point_count(2 * m, n) : 0;
    if (base > max_quadrature_evaluations || base + fine > max_quadrature_evaluations)
        throw BudgetError("quadrature evaluation budget of 1e8 points exceeded");
    double coarse = detail::tensor_pass(f, box, rule);
    if (!refine) return {coarse, 0.0, base};
    double refined = detail::tensor_pass(f, box, QuadratureRule::gauss_legendre(2 * m));
    return {refined, std::abs(coarse - refined), base + fine};
}

// Integrals of p*f and p over the same node set, so their ratio is the
// weighted mean of f. The estimate of the weight integral must come out
// positive.
template <ScalarField F, ScalarField P>
std::pair<QuadratureResult, QuadratureResult> integrate_weighted(const F& f, const P& p,
                                                                 const Box& box,
                                                                 const QuadratureRule& rule,
                                                                 bool refine) {
    auto weighted = [&](const Vector& v) { return p(v) * f(v); };
    QuadratureResult num = integrate(weighted, box, rule, refine);
    QuadratureResult den = integrate(p, box, rule, refine);
    if (!(den.value > 0.0))
        throw InvariantError("weight integral estimate is not positive");
    return {num, den};
}

// Falsifier for the hypotheses on a weight function: p must be positive and
// symmetric about the axis midpoints, p(x) = p(x with x_i -> a_i + b_i - x_i).
template <ScalarField P>
ConvexityVerdict check_symmetry(const P& p, const Box& box, long trials, double tolerance,
                                std::uint64_t rng_seed) {
    if (trials < 1) throw InvariantError("trials must be >= 1");
    if (!(tolerance >= 0.0)) throw InvariantError("tolerance must be >= 0");
    Sampler s(rng_seed);
    const int n = box.dim();
    for (long k = 0; k < trials; ++k) {
        Vector x = sample_point(s, box);
        const int axis = static_cast<int>(k % n);
        double px = p(x);
        if (!(px > 0.0)) {
            Witness w{{x}, {}, px, 0.0, "non-positive value"};
            return {VerdictStatus::falsified, std::move(w), k + 1, tolerance};
        }
        Vector y = with_coordinate(x, axis, box.lower()[axis] + box.upper()[axis] - x[axis]);
        double py = p(y);
        if (std::abs(px - py) > tolerance) {
            Witness w{{x, y},
                      {},
                      px,
                      py,
                      "asymmetric about the x" + std::to_string(axis + 1) + " midpoint"};
            return {VerdictStatus::falsified, std::move(w), k + 1, tolerance};
        }
    }
    return {VerdictStatus::not_falsified, std::nullopt, trials, tolerance};
}

}  // namespace hhbounds
