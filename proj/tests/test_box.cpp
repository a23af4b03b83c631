#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>
#include <vector>

#include "hhbounds/box.hpp"
#include "hhbounds/sampling.hpp"

using namespace hhbounds;

TEST_CASE("vector and box invariants") {
    CHECK_THROWS_AS(Vector(std::vector<double>{}), InvariantError);
    CHECK_THROWS_AS(Vector({1.0, std::nan("")}), InvariantError);
    CHECK_THROWS_AS(Vector({std::numeric_limits<double>::infinity()}), InvariantError);

    CHECK_THROWS_AS(Box(Vector{0.0, 1.0}, Vector{1.0}), DimensionError);
    CHECK_THROWS_AS(Box(Vector{0.0, 1.0}, Vector{0.0, 2.0}), InvariantError);  // degenerate axis
    CHECK_THROWS_AS(Box(Vector{1.0}, Vector{0.0}), InvariantError);            // inverted

    Box b(Vector{0.0, 1.0}, Vector{1.0, 3.0});
    CHECK(b.dim() == 2);
}

TEST_CASE("product order is a partial order") {
    CHECK_FALSE(product_order_leq(Vector{1, 0}, Vector{0, 1}));
    CHECK_FALSE(product_order_leq(Vector{0, 1}, Vector{1, 0}));
    CHECK(product_order_leq(Vector{0, 0}, Vector{0, 0}));
    CHECK(product_order_leq(Vector{1, 2, 3}, Vector{1, 3, 3}));
    CHECK_THROWS_AS(product_order_leq(Vector{1}, Vector{1, 2}), DimensionError);
}

TEST_CASE("corner selection") {
    Box unit2(Vector{0, 0}, Vector{1, 1});
    CHECK(corner(unit2, CornerMask(2, 0b00)) == Vector{0, 0});
    CHECK(corner(unit2, CornerMask(2, 0b01)) == Vector{1, 0});
    Box b(Vector{0, 1}, Vector{2, 3});
    CHECK(corner(b, CornerMask(2, 0b11)) == Vector{2, 3});
    CHECK_THROWS_AS(corner(b, CornerMask(3, 0)), DimensionError);
    CHECK_THROWS_AS(CornerMask(2, 0b100), InvariantError);
    CHECK_THROWS_AS(CornerMask(0, 0), DimensionError);
    CHECK_THROWS_AS(CornerMask(25, 0), DimensionError);
}

TEST_CASE("corner enumeration order and count") {
    Box b1(Vector{0.0}, Vector{1.0});
    auto c1 = corners(b1);
    REQUIRE(c1.size() == 2);
    CHECK(c1[0].second == Vector{0.0});
    CHECK(c1[1].second == Vector{1.0});

    Box b2(Vector{0, 0}, Vector{1, 1});
    auto c2 = corners(b2);
    REQUIRE(c2.size() == 4);
    CHECK(c2[0].second == Vector{0, 0});
    CHECK(c2[1].second == Vector{1, 0});
    CHECK(c2[2].second == Vector{0, 1});
    CHECK(c2[3].second == Vector{1, 1});

    // 2^3 corners, all distinct
    Box b3(Vector{0, 0, 0}, Vector{1, 1, 1});
    auto c3 = corners(b3);
    REQUIRE(c3.size() == 8);
    std::set<std::vector<double>> seen;
    for (const auto& [mask, v] : c3)
        seen.insert(std::vector<double>(v.coords().begin(), v.coords().end()));
    CHECK(seen.size() == 8);

    CHECK_THROWS_AS(for_each_mask(25, [](std::uint32_t) {}), BudgetError);
}

TEST_CASE("corner bijection on random strict boxes") {
    Sampler s(7);
    for (int rep = 0; rep < 20; ++rep) {
        int n = 1 + static_cast<int>(s.below(5));
        std::vector<double> lo(n), hi(n);
        for (int i = 0; i < n; ++i) {
            lo[i] = s.uniform(-3, 3);
            hi[i] = lo[i] + 0.01 + s.unit();
        }
        Box b(Vector(lo), Vector(hi));
        auto cs = corners(b);
        std::set<std::vector<double>> seen;
        for (const auto& [mask, v] : cs)
            seen.insert(std::vector<double>(v.coords().begin(), v.coords().end()));
        CHECK(seen.size() == (std::size_t{1} << n));
    }
}

TEST_CASE("interpolate") {
    CHECK(interpolate(WeightParam{1, 1}, Vector{3, 4}, Vector{7, 8}) == Vector{3, 4});
    CHECK(interpolate(WeightParam{0, 0}, Vector{3, 4}, Vector{7, 8}) == Vector{7, 8});
    CHECK(interpolate(WeightParam{0.5, 0.25}, Vector{0, 0}, Vector{4, 4}) == Vector{2, 3});
    CHECK_THROWS_AS(interpolate(WeightParam{0.5}, Vector{1, 2}, Vector{3, 4}), DimensionError);
    CHECK_THROWS_AS(WeightParam{1.5}, InvariantError);
    CHECK_THROWS_AS(WeightParam{-0.1}, InvariantError);
}

TEST_CASE("interpolate stays put and stays inside") {
    Sampler s(11);
    for (int rep = 0; rep < 200; ++rep) {
        int n = 1 + static_cast<int>(s.below(4));
        std::vector<double> lo(n), hi(n);
        for (int i = 0; i < n; ++i) {
            lo[i] = s.uniform(-2, 2);
            hi[i] = lo[i] + 0.1 + s.unit();
        }
        Box b(Vector(lo), Vector(hi));
        WeightParam t = sample_weight(s, n);
        Vector x = sample_point(s, b);
        Vector same = interpolate(t, x, x);
        for (int i = 0; i < n; ++i)
            CHECK(same[i] == Catch::Approx(x[i]).margin(1e-12));

        // between two corners the image stays in the box
        CornerMask m1(n, static_cast<std::uint32_t>(s.below(1u << n)));
        CornerMask m2(n, static_cast<std::uint32_t>(s.below(1u << n)));
        Vector mid = interpolate(t, corner(b, m1), corner(b, m2));
        for (int i = 0; i < n; ++i) {
            CHECK(mid[i] >= b.lower()[i]);
            CHECK(mid[i] <= b.upper()[i]);
        }
    }
}

TEST_CASE("corner weights") {
    CHECK(corner_weight(WeightParam{0.5, 0.5}, CornerMask(2, 0b10)) == 0.25);
    CHECK(corner_weight(WeightParam{0.5, 0.5, 0.5}, CornerMask(3, 0b101)) == 0.125);
    // degenerate t puts all mass on one corner
    CHECK(corner_weight(WeightParam{1, 0}, CornerMask(2, 0b10)) == 1.0);
    CHECK(corner_weight(WeightParam{1, 0}, CornerMask(2, 0b00)) == 0.0);
    CHECK(corner_weight(WeightParam{1, 0}, CornerMask(2, 0b11)) == 0.0);
    CHECK(corner_weight(WeightParam{0.25, 0.5}, CornerMask(2, 0b00)) == 0.125);
}

TEST_CASE("corner weights form a partition of unity") {
    Sampler s(3);
    for (int rep = 0; rep < 100; ++rep) {
        int n = 1 + static_cast<int>(s.below(8));
        WeightParam t = sample_weight(s, n);
        double sum = 0.0;
        for_each_mask(n, [&](std::uint32_t bits) { sum += corner_weight(t, CornerMask(n, bits)); });
        CHECK(sum == Catch::Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("midpoint and volume") {
    CHECK(midpoint(Box(Vector{0, 0}, Vector{1, 1})) == Vector{0.5, 0.5});
    CHECK(midpoint(Box(Vector{0, 1}, Vector{2, 3})) == Vector{1, 2});
    CHECK(midpoint(Box(Vector{-1, -1, -1}, Vector{1, 1, 1})) == Vector{0, 0, 0});

    CHECK(volume(Box(Vector{0, 0, 0}, Vector{1, 1, 1})) == 1.0);
    CHECK(volume(Box(Vector{0, 1}, Vector{2, 3})) == 4.0);
    CHECK(volume(Box(Vector{0, 0, 0}, Vector{0.5, 0.5, 0.5})) == 0.125);
}

TEST_CASE("midpoint equals the half-half interpolation") {
    Sampler s(5);
    for (int rep = 0; rep < 100; ++rep) {
        int n = 1 + static_cast<int>(s.below(4));
        std::vector<double> lo(n), hi(n), half(n, 0.5);
        for (int i = 0; i < n; ++i) {
            lo[i] = s.uniform(-10, 10);
            hi[i] = lo[i] + 0.001 + 5 * s.unit();
        }
        Box b(Vector(lo), Vector(hi));
        CHECK(midpoint(b) == interpolate(WeightParam(Vector(half)), b.lower(), b.upper()));
    }
}

TEST_CASE("volume is additive under an axis split") {
    Sampler s(9);
    for (int rep = 0; rep < 100; ++rep) {
        int n = 1 + static_cast<int>(s.below(4));
        std::vector<double> lo(n), hi(n);
        for (int i = 0; i < n; ++i) {
            lo[i] = s.uniform(-2, 2);
            hi[i] = lo[i] + 0.1 + s.unit();
        }
        Box b(Vector(lo), Vector(hi));
        int axis = static_cast<int>(s.below(static_cast<std::uint64_t>(n)));
        double cut = s.uniform(lo[axis], hi[axis]);
        if (!(lo[axis] < cut && cut < hi[axis])) continue;
        std::vector<double> hi_left(hi), lo_right(lo);
        hi_left[axis] = cut;
        lo_right[axis] = cut;
        double sum = volume(Box(Vector(lo), Vector(hi_left))) +
                     volume(Box(Vector(lo_right), Vector(hi)));
        CHECK(sum == Catch::Approx(volume(b)).epsilon(1e-12));
    }
}

TEST_CASE("set falsifier: boxes and disks survive, the L-shape fails") {
    Box bounding(Vector{-0.1, -0.1}, Vector{2.1, 2.1});

    // any box predicate is closed under componentwise interpolation
    auto in_box = [](const Vector& v) {
        return v[0] >= 0.5 && v[0] <= 1.5 && v[1] >= 0.2 && v[1] <= 1.9;
    };
    CHECK_FALSE(is_nfold_convex_set(in_box, bounding, 2000, 0).falsified);

    // the closed unit disk is convex, hence closed under interpolation
    Box disk_bounding(Vector{-1.2, -1.2}, Vector{1.2, 1.2});
    auto in_disk = [](const Vector& v) { return v[0] * v[0] + v[1] * v[1] <= 1.0; };
    CHECK_FALSE(is_nfold_convex_set(in_disk, disk_bounding, 10000, 1).falsified);

    // L-shape ([0,2]x[0,1]) u ([0,1]x[0,2]) is not closed: the mix of
    // (2, 0.5) and (0.5, 2) with t = (1, 0) lands at (2, 2)
    auto in_l = [](const Vector& v) {
        bool horiz = v[0] >= 0 && v[0] <= 2 && v[1] >= 0 && v[1] <= 1;
        bool vert = v[0] >= 0 && v[0] <= 1 && v[1] >= 0 && v[1] <= 2;
        return horiz || vert;
    };
    Vector z = interpolate(WeightParam{1, 0}, Vector{2, 0.5}, Vector{0.5, 2});
    CHECK(z == Vector{2, 2});
    CHECK_FALSE(in_l(z));

    SetVerdict verdict = is_nfold_convex_set(in_l, bounding, 20000, 0);
    REQUIRE(verdict.falsified);
    REQUIRE(verdict.witness.has_value());
    CHECK(in_l(verdict.witness->x));
    CHECK(in_l(verdict.witness->y));
    CHECK_FALSE(in_l(verdict.witness->outside));

    // empty set: inconclusive
    auto never = [](const Vector&) { return false; };
    CHECK_THROWS_AS(is_nfold_convex_set(never, bounding, 10, 0), InconclusiveError);
}
