#include <cmath>
#include <set>

#include "doctest.h"
#include "sdot/geometry.hpp"

using namespace sdot;

namespace {
const double kPi = 3.14159265358979323846;
}

TEST_CASE("domain validation") {
    CHECK_THROWS_AS(Domain::rectangle(0, 0, 0, 1), GeometryError);
    CHECK_THROWS_AS(Domain::rectangle(0, 0, 1, -1), GeometryError);
    CHECK_THROWS_AS(Domain::cap(vec3(0, 0, 2), 0.5), GeometryError);  // not unit
    CHECK_THROWS_AS(Domain::cap(vec3(0, 0, 1), 0.0), GeometryError);
    CHECK_THROWS_AS(Domain::cap(vec3(0, 0, 1), kPi / 2), GeometryError);
    CHECK_NOTHROW(Domain::cap(vec3(0, 0, 1), kPi / 2 - 1e-6));
}

TEST_CASE("rectangle volume and grid cell sum") {
    Domain d = Domain::rectangle(-1, 0, 3, 2);  // 4 x 2
    CHECK(d.volume() == doctest::Approx(8.0));
    CHECK(d.char_length() == doctest::Approx(4.0));

    Grid g = build_grid(d, 7);
    CHECK(static_cast<int>(g.cells.size()) == 49);
    double sum = 0;
    for (const auto& c : g.cells) {
        sum += c.volume;
        CHECK(d.contains(c.center));
    }
    CHECK(sum == doctest::Approx(8.0).epsilon(1e-13));
    // Row-major ordering: first cell at the lower-left corner.
    CHECK(g.cells[0].center[0] == doctest::Approx(-1 + 0.5 * 4.0 / 7));
    CHECK(g.cells[0].center[1] == doctest::Approx(0 + 0.5 * 2.0 / 7));
    CHECK(g.cells[1].center[1] == doctest::Approx(g.cells[0].center[1]));
    CHECK(g.spacing() == doctest::Approx(4.0 / 7));
}

TEST_CASE("cap area and quadrature convergence") {
    // Cap about an arbitrary unit axis; area = 2 pi (1 - cos r).
    Vec axis = normalized(vec3(0.3, -0.4, 0.8660254037844386));
    double r = 0.6;
    Domain d = Domain::cap(axis, r);
    double area = 2 * kPi * (1 - std::cos(r));
    CHECK(d.volume() == doctest::Approx(area).epsilon(1e-14));

    // Cell volumes add to the cap area exactly by construction.
    for (int n : {16, 64}) {
        Grid g = build_grid(d, n);
        double sum = 0;
        for (const auto& c : g.cells) {
            sum += c.volume;
            CHECK(std::abs(norm(c.center) - 1.0) < 1e-12);
            CHECK(d.contains(c.center, 1e-12));
        }
        CHECK(sum == doctest::Approx(area).epsilon(1e-12));
    }

    // Quadrature of a smooth function converges to the true integral: the
    // sub-cap of half the radius has known area. The indicator error shrinks
    // with the mesh (band-boundary crossing cells control the rate).
    double target = 2 * kPi * (1 - std::cos(r / 2));
    double prev_err = 1e9;
    for (int n : {16, 32, 64, 128}) {
        Grid g = build_grid(d, n);
        double est = 0;
        for (const auto& c : g.cells)
            if (std::acos(std::min(1.0, dot(c.center, axis))) < r / 2) est += c.volume;
        double err = std::abs(est - target);
        CHECK(err < prev_err + 1e-12);
        prev_err = err;
    }
    CHECK(prev_err < 0.01 * target);
}

TEST_CASE("boundary samples trace the rectangle perimeter in order") {
    Domain d = Domain::rectangle(0, 0, 2, 1);
    auto pts = boundary_samples(d, 12);
    CHECK(static_cast<int>(pts.size()) == 12);
    std::set<std::pair<double, double>> seen;
    for (const auto& p : pts) {
        CHECK(d.contains(p, 1e-12));
        bool on_edge = std::abs(p[0]) < 1e-12 || std::abs(p[0] - 2) < 1e-12 ||
                       std::abs(p[1]) < 1e-12 || std::abs(p[1] - 1) < 1e-12;
        CHECK(on_edge);
        seen.insert({p[0], p[1]});
    }
    CHECK(seen.size() == pts.size());  // no duplicate corners
    CHECK(pts[0][0] == doctest::Approx(0.0));
    CHECK(pts[0][1] == doctest::Approx(0.0));
}

TEST_CASE("boundary samples on the cap rim lie at the rim angle") {
    Vec axis = vec3(0, 0, 1);
    Domain d = Domain::cap(axis, 0.5);
    auto pts = boundary_samples(d, 32);
    CHECK(static_cast<int>(pts.size()) == 32);
    for (const auto& p : pts) {
        CHECK(std::abs(norm(p) - 1.0) < 1e-12);
        CHECK(std::acos(std::min(1.0, dot(p, axis))) == doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("uniform sampling stays inside the domain") {
    Rng rng(7);
    Domain rect = Domain::rectangle(-2, 1, -1, 4);
    for (int i = 0; i < 200; i++) CHECK(rect.contains(rect.sample(rng)));
    Domain cap = Domain::cap(normalized(vec3(1, 1, 1)), 0.8);
    for (int i = 0; i < 200; i++) {
        Vec p = cap.sample(rng);
        CHECK(std::abs(norm(p) - 1.0) < 1e-12);
        CHECK(cap.contains(p, 1e-12));
    }
}

TEST_CASE("measure normalization rescales to unit mass") {
    Domain d = Domain::rectangle(0, 0, 2, 2);
    Grid g = build_grid(d, 20);
    // Density 3 everywhere: raw total 12, scale 1/12.
    SourceMeasure m = normalize_measure(g, DensityField::from_expr("3"));
    CHECK(m.raw_total == doctest::Approx(12.0).epsilon(1e-13));
    CHECK(m.scale == doctest::Approx(1.0 / 12.0).epsilon(1e-13));
    CHECK(m.total == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(m.sup_density == doctest::Approx(0.25).epsilon(1e-13));  // 3/12

    // Nonconstant density: mass of the left half under I(x) = x1 is 1/4.
    SourceMeasure mx = normalize_measure(g, DensityField::from_expr("x1"));
    std::vector<bool> left(g.cells.size());
    for (size_t j = 0; j < g.cells.size(); j++) left[j] = g.cells[j].center[0] < 1.0;
    CHECK(integrate_indicator(mx, left) == doctest::Approx(0.25).epsilon(1e-3));
}

TEST_CASE("nonpositive density is rejected with cell indices") {
    Domain d = Domain::rectangle(0, 0, 1, 1);
    Grid g = build_grid(d, 4);
    try {
        normalize_measure(g, DensityField::from_expr("x1 - 0.5"));
        FAIL("expected GeometryError");
    } catch (const GeometryError& e) {
        std::string msg = e.what();
        CHECK(msg.find("strictly positive") != std::string::npos);
        CHECK(msg.find("violated at 8 cells") != std::string::npos);
        CHECK(msg.find("first indices: 0 1 4 5 8") != std::string::npos);
    }
    std::vector<double> vals(16, 1.0);
    vals[5] = 0.0;
    CHECK_THROWS_AS(normalize_measure(g, DensityField::from_values(vals)), GeometryError);
    std::vector<double> wrong_size(15, 1.0);
    CHECK_THROWS_AS(normalize_measure(g, DensityField::from_values(wrong_size)), GeometryError);
}

TEST_CASE("grid requires resolution at least 2") {
    Domain d = Domain::rectangle(0, 0, 1, 1);
    CHECK_THROWS_AS(build_grid(d, 1), GeometryError);
    CHECK_THROWS_AS(boundary_samples(d, 3), GeometryError);
}
