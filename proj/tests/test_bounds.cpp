#include <cmath>

#include "doctest.h"
#include "sdot/bounds.hpp"

using namespace sdot;

namespace {

const double kPi = 3.14159265358979323846;

SourceMeasure square_measure(int n) {
    Grid g = build_grid(Domain::rectangle(0, 0, 1, 1), n);
    return normalize_measure(g, DensityField::constant());
}

TargetSpec horizontal_pair() {
    TargetSpec t;
    t.points = {vec2(0.25, 0.5), vec2(0.75, 0.5)};
    t.masses = {0.5, 0.5};
    return t;
}

}  // namespace

TEST_CASE("symmetric pair constants match hand-derived values") {
    // c_1 - c_2 = (2 x1 - 1)/4 on the unit square, so M = e^{1/4} + 1 at the
    // right edge, Lambda = e^{-1/4} at the left edge; the steering constant is
    // 1 / |xbar_1 - xbar_2| = 2 for the quadratic cost; the boundary image is
    // the translated square of perimeter 4.
    auto cost = make_quadratic_cost();
    SourceMeasure m = square_measure(64);
    TargetSpec t = horizontal_pair();
    BoundConstants bc = compute_constants(*cost, t, m);
    CHECK(bc.K == 2);
    CHECK(bc.M == doctest::Approx(2.2840254166877414).epsilon(1e-12));
    CHECK(bc.Lambda == doctest::Approx(0.7788007830714049).epsilon(1e-12));
    CHECK(bc.C == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(bc.sup_I == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(bc.sigma.size() == 2);
    CHECK(bc.sigma[0] == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(bc.sigma[1] == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(bc.sigma_max == doctest::Approx(4.0).epsilon(1e-12));

    double delta = 0.1;  // epsilon = 0.1, K = 2, f_1 = 0.5
    CHECK(iteration_bound(2, bc.C, bc.M, bc.Lambda, delta, bc.sup_I, bc.sigma_max) ==
          doctest::Approx(940.4789399641181).epsilon(1e-12));
}

TEST_CASE("constants are stable under grid refinement") {
    auto refl = make_reflector_cost();
    Domain north = Domain::cap(vec3(0, 0, 1), kPi / 4);
    TargetSpec t;
    t.points = {vec3(0.24740395925452294, 0.0, -0.9689124217106447),
                vec3(-0.24740395925452294, 0.0, -0.9689124217106447)};
    t.masses = {0.4, 0.6};
    SourceMeasure coarse = normalize_measure(build_grid(north, 64), DensityField::constant());
    SourceMeasure fine = normalize_measure(build_grid(north, 128), DensityField::constant());
    BoundConstants a = compute_constants(*refl, t, coarse);
    BoundConstants b = compute_constants(*refl, t, fine);
    CHECK(std::abs(a.C - b.C) <= 0.01 * std::abs(b.C));
    CHECK(std::abs(a.M - b.M) <= 0.01 * std::abs(b.M));
    CHECK(std::abs(a.Lambda - b.Lambda) <= 0.01 * std::abs(b.Lambda));
    CHECK(std::abs(a.sigma_max - b.sigma_max) <= 0.01 * std::abs(b.sigma_max));
    // Mirror symmetry of the two targets.
    CHECK(a.sigma[0] == doctest::Approx(a.sigma[1]).epsilon(1e-9));
}

TEST_CASE("surface measure requires a convex boundary image") {
    auto logc = make_log_cost();
    Domain square = Domain::rectangle(0, 0, 1, 1);
    CHECK_THROWS_AS(surface_measure(*logc, square, vec2(3.0, 0.5), 256), BoundsError);
    auto quad = make_quadratic_cost();
    CHECK(surface_measure(*quad, square, vec2(0.3, 0.9), 256) ==
          doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("near-coincident targets break the steering denominator") {
    auto cost = make_quadratic_cost();
    SourceMeasure m = square_measure(8);
    TargetSpec t;
    t.points = {vec2(0.5, 0.5), vec2(0.5 + 1e-15, 0.5)};
    t.masses = {0.5, 0.5};
    CHECK_THROWS_AS(constant_C(*cost, t, m, 64), BoundsError);
}

TEST_CASE("single-target reports are marked not applicable") {
    auto cost = make_quadratic_cost();
    SourceMeasure m = square_measure(8);
    TargetSpec t;
    t.points = {vec2(0.5, 0.5)};
    t.masses = {1.0};
    BoundConstants bc = compute_constants(*cost, t, m);
    BoundReport rep = make_bound_report(bc, 0.05, 0.0);
    CHECK_FALSE(rep.applicable);
    CHECK(rep.observed == -1);
}

TEST_CASE("bound report carries the plug-in value and the certificate") {
    auto cost = make_quadratic_cost();
    SourceMeasure m = square_measure(32);
    BoundConstants bc = compute_constants(*cost, horizontal_pair(), m);
    BoundReport rep = make_bound_report(bc, 0.1, 0.1);
    CHECK(rep.applicable);
    CHECK(rep.n_eps_bound == doctest::Approx(940.4789399641181).epsilon(1e-12));
    rep.observed = 3;
    CHECK(rep.observed <= rep.n_eps_bound);
}

TEST_CASE("default boundary count scales with resolution") {
    Grid small = build_grid(Domain::rectangle(0, 0, 1, 1), 10);
    CHECK(default_boundary_count(small) == 256);
    Grid large = build_grid(Domain::rectangle(0, 0, 1, 1), 100);
    CHECK(default_boundary_count(large) == 400);
}
