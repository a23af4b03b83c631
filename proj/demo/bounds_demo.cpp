// Minimal library walkthrough: parse a function, verify the sandwich on a
// box, and print the three terms.

#include <cstdio>

#include "hhbounds/hhbounds.hpp"

int main() {
    using namespace hhbounds;

    Expr f = Expr::parse("exp(x1 + x2)");
    Box box = parse_box_spec("0,1;0,1");

    ConvexityVerdict v = is_nfold_convex_fn(f, box, 20000, 1e-9, /*seed=*/0);
    std::printf("coordinatewise convexity: %s after %ld trials\n",
                v.falsified() ? "falsified" : "not falsified", v.trials_run);

    BoundsReport r = hh_sandwich(f, box, QuadratureRule::gauss_legendre(16), 1e-9);
    std::printf("f(midpoint) = %.12f\n", r.lower);
    std::printf("mean value  = %.12f  (quadrature error estimate %.3g)\n", r.mean, r.quad_error);
    std::printf("corner avg  = %.12f\n", r.upper);
    std::printf("chain %s\n", r.verified ? "verified" : "violated");
    return r.verified && !v.falsified() ? 0 : 1;
}
