#include "sdot/hull.hpp"

#include <algorithm>
#include <cmath>

namespace sdot {

namespace {
double cross(const Pt2& o, const Pt2& a, const Pt2& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}
}  // namespace

std::vector<Pt2> convex_hull(std::vector<Pt2> pts) {
    if (pts.size() < 3) throw HullError("convex hull needs at least 3 points");
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    size_t n = pts.size();
    if (n < 3) throw HullError("convex hull input is degenerate");
    std::vector<Pt2> h(2 * n);
    size_t k = 0;
    for (size_t i = 0; i < n; i++) {  // lower
        while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) k--;
        h[k++] = pts[i];
    }
    for (size_t i = n - 1, t = k + 1; i-- > 0;) {  // upper
        while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 0) k--;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    if (h.size() < 3) throw HullError("convex hull input is collinear");
    return h;
}

double polygon_perimeter(const std::vector<Pt2>& poly) {
    double p = 0;
    for (size_t i = 0; i < poly.size(); i++) {
        const Pt2& a = poly[i];
        const Pt2& b = poly[(i + 1) % poly.size()];
        p += std::hypot(b[0] - a[0], b[1] - a[1]);
    }
    return p;
}

bool convex_contains(const std::vector<Pt2>& poly, const Pt2& p, double tol) {
    for (size_t i = 0; i < poly.size(); i++) {
        const Pt2& a = poly[i];
        const Pt2& b = poly[(i + 1) % poly.size()];
        double len = std::hypot(b[0] - a[0], b[1] - a[1]);
        if (cross(a, b, p) < -tol * std::max(1.0, len)) return false;
    }
    return true;
}

bool convex_perimeter_monotonicity(const std::vector<Pt2>& hull_a,
                                   const std::vector<Pt2>& hull_b, double tol) {
    for (const Pt2& v : hull_a)
        if (!convex_contains(hull_b, v, tol))
            throw HullError("inner hull is not contained in outer hull");
    return polygon_perimeter(hull_a) <= polygon_perimeter(hull_b) + tol;
}

}  // namespace sdot
