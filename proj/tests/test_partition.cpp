#include <cmath>
#include <limits>

#include "doctest.h"
#include "sdot/partition.hpp"

using namespace sdot;

namespace {

SourceMeasure unit_square_measure(int n) {
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

TEST_CASE("potential picks the best target and breaks ties low") {
    auto cost = make_quadratic_cost();
    TargetSpec t = horizontal_pair();
    WeightVector d{{1.0, std::exp(0.5)}};
    PotentialValue pv = potential_at(*cost, t, d, vec2(0.2, 0.5));
    CHECK(pv.argmax == 0);
    CHECK(pv.value == doctest::Approx(-0.5 * 0.05 * 0.05 - 0.0).epsilon(1e-14));
    // Exact tie at the midpoint with equal weights: smallest index wins.
    WeightVector flat{{1.0, 1.0}};
    CHECK(potential_at(*cost, t, flat, vec2(0.5, 0.5)).argmax == 0);
}

TEST_CASE("equal weights reproduce the Voronoi split exactly") {
    auto cost = make_quadratic_cost();
    SourceMeasure m = unit_square_measure(50);
    TargetSpec t = horizontal_pair();
    PartitionResult p = assign_cells(*cost, m, t, WeightVector{{1.0, 1.0}});
    CHECK(p.masses[0] == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(p.masses[1] == doctest::Approx(0.5).epsilon(1e-13));
    for (size_t j = 0; j < m.grid.cells.size(); j++) {
        int expect = m.grid.cells[j].center[0] < 0.5 ? 0 : 1;
        CHECK(p.assignment[j] == expect);
        CHECK(p.margins[j] >= 0.0);
    }
}

TEST_CASE("frozen weight moves the boundary to x = 0.75") {
    // phi_1 - phi_2 = -0.5 x + 0.25 + log d_2, so log d_2 = 0.125 puts the
    // interface at x = 0.75 and the masses at (0.75, 0.25) exactly (no cell
    // center ties at resolution 100).
    auto cost = make_quadratic_cost();
    SourceMeasure m = unit_square_measure(100);
    TargetSpec t = horizontal_pair();
    PartitionResult p = assign_cells(*cost, m, t, WeightVector{{1.0, std::exp(0.125)}});
    CHECK(p.masses[0] == doctest::Approx(0.75).epsilon(1e-13));
    CHECK(p.masses[1] == doctest::Approx(0.25).epsilon(1e-13));
}

TEST_CASE("cell cache agrees with a direct argmax evaluation") {
    auto cost = make_quadratic_cost();
    SourceMeasure m = unit_square_measure(17);
    TargetSpec t;
    t.points = {vec2(0.1, 0.2), vec2(0.8, 0.3), vec2(0.4, 0.9)};
    t.masses = {0.2, 0.5, 0.3};
    WeightVector d{{1.0, 0.7, 1.9}};

    CellCostCache cache(*cost, m, t);
    PartitionResult a = cache.assign(d);
    PartitionResult b = assign_cells(*cost, m, t, d);
    double total = 0;
    for (size_t j = 0; j < m.grid.cells.size(); j++) {
        PotentialValue pv = potential_at(*cost, t, d, m.grid.cells[j].center);
        CHECK(a.assignment[j] == pv.argmax);
        CHECK(a.assignment[j] == b.assignment[j]);
        total += m.cell_mass(j);
    }
    double sum = a.masses[0] + a.masses[1] + a.masses[2];
    CHECK(sum == doctest::Approx(total).epsilon(1e-13));
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("weight scaling leaves the partition untouched") {
    auto cost = make_quadratic_cost();
    SourceMeasure m = unit_square_measure(40);
    TargetSpec t;
    t.points = {vec2(0.2, 0.3), vec2(0.7, 0.6), vec2(0.5, 0.1)};
    t.masses = {0.3, 0.4, 0.3};
    WeightVector d{{1.0, 1.31, 0.42}};
    WeightVector ds{{3.7, 3.7 * 1.31, 3.7 * 0.42}};
    PartitionResult a = assign_cells(*cost, m, t, d);
    PartitionResult b = assign_cells(*cost, m, t, ds);
    for (size_t j = 0; j < a.assignment.size(); j++) CHECK(a.assignment[j] == b.assignment[j]);
    for (int i = 0; i < 3; i++) CHECK(a.masses[i] == b.masses[i]);
}

TEST_CASE("raising one weight drains that target and feeds the others") {
    auto cost = make_quadratic_cost();
    SourceMeasure m = unit_square_measure(60);
    TargetSpec t = horizontal_pair();
    double prev1 = 1.0, prev0 = 0.0;
    for (double ld = -1.0; ld <= 1.0; ld += 0.125) {
        PartitionResult p = assign_cells(*cost, m, t, WeightVector{{1.0, std::exp(ld)}});
        CHECK(p.masses[1] <= prev1 + 1e-15);
        CHECK(p.masses[0] >= prev0 - 1e-15);
        prev1 = p.masses[1];
        prev0 = p.masses[0];
    }
    CHECK(prev1 < 0.25);  // log d_2 = 1 pushes the interface past x = 1 - ish
}

TEST_CASE("limit probe brackets the mass range") {
    auto cost = make_quadratic_cost();
    SourceMeasure m = unit_square_measure(30);
    TargetSpec t;
    t.points = {vec2(0.2, 0.5), vec2(0.6, 0.5), vec2(0.9, 0.5)};
    t.masses = {0.4, 0.3, 0.3};
    for (int i = 0; i < 3; i++) {
        LimitProbe probe = masses_limit_probe(*cost, t, m, i);
        CHECK(probe.masses_small[i] == doctest::Approx(1.0));
        CHECK(probe.masses_large[i] == doctest::Approx(0.0));
        CHECK(probe.d_small < probe.d_large);
    }
}

TEST_CASE("single target owns everything with infinite margin") {
    auto cost = make_quadratic_cost();
    SourceMeasure m = unit_square_measure(8);
    TargetSpec t;
    t.points = {vec2(0.5, 0.5)};
    t.masses = {1.0};
    PartitionResult p = assign_cells(*cost, m, t, WeightVector{{1.0}});
    CHECK(p.masses[0] == doctest::Approx(1.0).epsilon(1e-12));
    for (double mg : p.margins) CHECK(mg == std::numeric_limits<double>::infinity());
}

TEST_CASE("cells of a quadratic partition pass the segment-convexity probe") {
    auto cost = make_quadratic_cost();
    SourceMeasure m = unit_square_measure(50);
    TargetSpec t = horizontal_pair();
    WeightVector d{{1.0, std::exp(0.125)}};
    PartitionResult p = assign_cells(*cost, m, t, d);
    Rng rng(77);
    for (int i = 0; i < 2; i++) {
        CellConvexityReport rep = check_cell_c_convexity(*cost, m, t, d, p, i, 50, rng);
        CHECK_FALSE(rep.empty);
        CHECK(rep.violations == 0);
        CHECK(rep.unreliable == 0);
        CHECK(rep.min_margin >= -m.grid.spacing());
    }
}
