#pragma once

#include <array>
#include <stdexcept>
#include <vector>

namespace sdot {

using Pt2 = std::array<double, 2>;

struct HullError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Convex hull of a planar point set, counter-clockwise, no repeated vertices.
std::vector<Pt2> convex_hull(std::vector<Pt2> pts);

double polygon_perimeter(const std::vector<Pt2>& poly);

// Point-in-convex-polygon test with slack: true if p lies inside or within
// `tol` of the CCW polygon.
bool convex_contains(const std::vector<Pt2>& poly, const Pt2& p, double tol);

// Checks A is contained in B (vertexwise, within tol) and returns whether
// perimeter(A) <= perimeter(B) + tol. Throws if the containment premise fails.
bool convex_perimeter_monotonicity(const std::vector<Pt2>& hull_a,
                                   const std::vector<Pt2>& hull_b, double tol = 1e-12);

}  // namespace sdot
