#include <cmath>

#include "doctest.h"
#include "sdot/hull.hpp"
#include "sdot/rng.hpp"

using namespace sdot;

TEST_CASE("hull of a square with interior points") {
    std::vector<Pt2> pts = {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}, {0.2, 0.7}, {1, 0}};
    auto h = convex_hull(pts);
    CHECK(h.size() == 4);
    CHECK(polygon_perimeter(h) == doctest::Approx(4.0));
    // Counter-clockwise orientation: positive signed area.
    double area2 = 0;
    for (size_t i = 0; i < h.size(); i++) {
        auto& a = h[i];
        auto& b = h[(i + 1) % h.size()];
        area2 += a[0] * b[1] - b[0] * a[1];
    }
    CHECK(area2 == doctest::Approx(2.0));
    CHECK(convex_contains(h, {0.5, 0.5}, 1e-12));
    CHECK(convex_contains(h, {1.0, 1.0}, 1e-12));
    CHECK_FALSE(convex_contains(h, {1.1, 0.5}, 1e-12));
}

TEST_CASE("collinear inputs are rejected") {
    CHECK_THROWS_AS(convex_hull({{0, 0}, {1, 1}, {2, 2}, {3, 3}}), HullError);
    CHECK_THROWS_AS(convex_hull({{0, 0}, {1, 1}}), HullError);
    CHECK_THROWS_AS(convex_hull({{0, 0}, {0, 0}, {0, 0}}), HullError);
}

TEST_CASE("perimeter of a frozen pentagon") {
    // Hand-computed: vertices of a unit-circle pentagon, perimeter
    // 10 sin(pi/5) = 5.877852522924731.
    std::vector<Pt2> pts;
    for (int k = 0; k < 5; k++) {
        double t = 2 * 3.14159265358979323846 * k / 5;
        pts.push_back({std::cos(t), std::sin(t)});
    }
    auto h = convex_hull(pts);
    CHECK(h.size() == 5);
    CHECK(polygon_perimeter(h) == doctest::Approx(5.877852522924731).epsilon(1e-12));
}

TEST_CASE("perimeter monotonicity for nested hulls") {
    Rng rng(123);
    int rounds = 100;
    for (int r = 0; r < rounds; r++) {
        // Outer hull from random points; inner from a shrink toward the
        // centroid plus points sampled inside the outer hull.
        std::vector<Pt2> outer_pts;
        int n = 8 + rng.uniform_int(20);
        for (int i = 0; i < n; i++)
            outer_pts.push_back({rng.uniform(-3, 3), rng.uniform(-2, 5)});
        std::vector<Pt2> outer;
        try {
            outer = convex_hull(outer_pts);
        } catch (const HullError&) {
            continue;  // nearly collinear draw
        }
        Pt2 c = {0, 0};
        for (auto& p : outer) {
            c[0] += p[0] / outer.size();
            c[1] += p[1] / outer.size();
        }
        double t = 0.1 + 0.8 * rng.uniform();
        std::vector<Pt2> inner_pts;
        for (auto& p : outer)
            inner_pts.push_back({c[0] + t * (p[0] - c[0]), c[1] + t * (p[1] - c[1])});
        auto inner = convex_hull(inner_pts);
        CHECK(convex_perimeter_monotonicity(inner, outer, 1e-9));
    }
}

TEST_CASE("containment premise is enforced") {
    auto outer = convex_hull({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    auto not_inside = convex_hull({{0.5, 0.5}, {2, 0.5}, {1.2, 1.4}});
    CHECK_THROWS_AS(convex_perimeter_monotonicity(not_inside, outer), HullError);
}
