#pragma once

#include <vector>

#include "sdot/cost.hpp"
#include "sdot/geometry.hpp"
#include "sdot/hull.hpp"
#include "sdot/targets.hpp"

namespace sdot {

struct BoundsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Constants entering the iteration bound. Suprema and infima are sampled over
// grid cell centers plus a boundary loop; norms are Euclidean in orthonormal
// tangent frames.
struct BoundConstants {
    int K = 0;
    double C = 0;        // max |det(-DDbar c)| / |(-DDbar c)^{-1} (Dc_k - Dc_i)|
    double M = 0;        // max_k sup_x exp(c(x,xbar_1) - c(x,xbar_k)) + 1
    double Lambda = 0;   // min_k inf_x exp(c(x,xbar_1) - c(x,xbar_k))
    double sup_I = 0;
    std::vector<double> sigma;  // hull perimeter of the boundary image per target
    double sigma_max = 0;
    int boundary_count = 0;
};

// Default boundary sampling density for the suprema scans.
int default_boundary_count(const Grid& grid);

double constant_C(const CostModel& cost, const TargetSpec& targets, const SourceMeasure& measure,
                  int boundary_count);

struct MLambda {
    double M = 0;
    double Lambda = 0;
};
MLambda constants_M_Lambda(const CostModel& cost, const TargetSpec& targets,
                           const SourceMeasure& measure, int boundary_count);

// Perimeter of the convex hull of -Dbar c(boundary of domain, xbar). Requires
// the image loop to be convex; throws BoundsError referencing the c-convexity
// check otherwise.
double surface_measure(const CostModel& cost, const Domain& domain, const Vec& xbar,
                       int boundary_count);

BoundConstants compute_constants(const CostModel& cost, const TargetSpec& targets,
                                 const SourceMeasure& measure, int boundary_count = 0);

// K [ K C M sup_I sigma_max / (delta Lambda) + 1 ]
double iteration_bound(int K, double C, double M, double Lambda, double delta, double sup_I,
                       double sigma_max);

struct BoundReport {
    BoundConstants constants;
    double epsilon = 0;
    double delta = 0;
    double n_eps_bound = 0;
    bool applicable = false;  // K = 1, or constants unavailable
    std::string not_applicable_reason = "single target";
    long long observed = -1;    // sweeps that adjusted a weight; -1 if not run
    long long mass_evals = -1;  // bisection evaluations, reported alongside
    bool pass = false;
};

BoundReport make_bound_report(const BoundConstants& constants, double epsilon, double delta);

}  // namespace sdot
