#include "sdot/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sdot {

namespace {

std::vector<Vec> sup_samples(const SourceMeasure& measure, int boundary_count) {
    std::vector<Vec> pts;
    pts.reserve(measure.grid.cells.size() + boundary_count);
    for (const GridCell& c : measure.grid.cells) pts.push_back(c.center);
    for (const Vec& b : boundary_samples(measure.grid.domain, boundary_count)) pts.push_back(b);
    return pts;
}

}  // namespace

int default_boundary_count(const Grid& grid) { return std::max(256, 4 * grid.resolution); }

double constant_C(const CostModel& cost, const TargetSpec& targets, const SourceMeasure& measure,
                  int boundary_count) {
    validate_targets(targets);
    int K = targets.K();
    if (K < 2) throw BoundsError("constant C needs at least two targets");
    double best = 0;
    for (const Vec& x : sup_samples(measure, boundary_count)) {
        Frame fx = tangent_frame(x);
        for (int i = 0; i < K; i++) {
            Mat2 M = cost.cross_matrix(x, targets.points[i]);
            double adet = std::abs(M.det());
            Vec gi = cost.grad_source(x, targets.points[i]);
            for (int k = 0; k < K; k++) {
                if (k == i) continue;
                Vec xi = cost.grad_source(x, targets.points[k]) - gi;  // -Dc_i + Dc_k
                auto rhs = frame_coords(fx, xi);
                auto w = M.solve(rhs);
                double wn = std::hypot(w[0], w[1]);
                if (wn < 1e-14)
                    throw BoundsError("constant C: near-zero denominator (targets nearly coincident)");
                best = std::max(best, adet / wn);
            }
        }
    }
    return best;
}

MLambda constants_M_Lambda(const CostModel& cost, const TargetSpec& targets,
                           const SourceMeasure& measure, int boundary_count) {
    validate_targets(targets);
    int K = targets.K();
    if (K < 2) throw BoundsError("constants M and Lambda need at least two targets");
    double hi = -std::numeric_limits<double>::infinity();
    double lo = std::numeric_limits<double>::infinity();
    for (const Vec& x : sup_samples(measure, boundary_count)) {
        double c1 = cost.evaluate(x, targets.points[0]);
        for (int k = 1; k < K; k++) {
            double e = std::exp(c1 - cost.evaluate(x, targets.points[k]));
            hi = std::max(hi, e);
            lo = std::min(lo, e);
        }
    }
    return MLambda{hi + 1.0, lo};
}

double surface_measure(const CostModel& cost, const Domain& domain, const Vec& xbar,
                       int boundary_count) {
    CConvexityReport conv = check_c_convexity_of_domain(cost, domain, xbar, boundary_count);
    if (!conv.convex)
        throw BoundsError("surface measure: boundary image is not convex (worst turn " +
                          std::to_string(conv.worst_turn) +
                          "); domain fails the c-convexity check for this target");
    std::vector<Vec> loop = boundary_samples(domain, boundary_count);
    auto coords = cotangent_coords(cost, loop, xbar);
    std::vector<Pt2> pts(coords.begin(), coords.end());
    return polygon_perimeter(convex_hull(pts));
}

BoundConstants compute_constants(const CostModel& cost, const TargetSpec& targets,
                                 const SourceMeasure& measure, int boundary_count) {
    BoundConstants out;
    out.K = targets.K();
    out.boundary_count =
        boundary_count > 0 ? boundary_count : default_boundary_count(measure.grid);
    out.sup_I = measure.sup_density;
    out.sigma.reserve(targets.points.size());
    for (const Vec& xbar : targets.points)
        out.sigma.push_back(surface_measure(cost, measure.grid.domain, xbar, out.boundary_count));
    out.sigma_max = *std::max_element(out.sigma.begin(), out.sigma.end());
    if (out.K >= 2) {
        out.C = constant_C(cost, targets, measure, out.boundary_count);
        MLambda ml = constants_M_Lambda(cost, targets, measure, out.boundary_count);
        out.M = ml.M;
        out.Lambda = ml.Lambda;
    }
    return out;
}

double iteration_bound(int K, double C, double M, double Lambda, double delta, double sup_I,
                       double sigma_max) {
    if (K < 2 || !(C > 0) || !(M > 0) || !(Lambda > 0) || !(delta > 0) || !(sup_I > 0) ||
        !(sigma_max > 0))
        throw BoundsError("iteration bound: all inputs must be positive and K >= 2");
    return K * (K * C * M * sup_I * sigma_max / (delta * Lambda) + 1.0);
}

BoundReport make_bound_report(const BoundConstants& constants, double epsilon, double delta) {
    BoundReport rep;
    rep.constants = constants;
    rep.epsilon = epsilon;
    rep.delta = delta;
    rep.applicable = constants.K >= 2;
    if (rep.applicable)
        rep.n_eps_bound = iteration_bound(constants.K, constants.C, constants.M, constants.Lambda,
                                          delta, constants.sup_I, constants.sigma_max);
    return rep;
}

}  // namespace sdot
