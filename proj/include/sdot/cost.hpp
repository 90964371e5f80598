#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "sdot/expr.hpp"
#include "sdot/geometry.hpp"
#include "sdot/rng.hpp"
#include "sdot/vec.hpp"

namespace sdot {

struct CostError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when a requested c-exponential has no admissible preimage (or the
// Newton fallback fails to locate one).
struct CExpError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Mat2 {
    double m[2][2] = {{0, 0}, {0, 0}};
    double det() const { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }
    // Solves M w = rhs; throws CostError when M is numerically singular.
    std::array<double, 2> solve(const std::array<double, 2>& rhs) const;
};

// Transport cost c(x, xbar). Gradients are reported in ambient coordinates
// (tangential to the sphere for spherical models); the mixed second derivative
// -D Dbar c is reported in the canonical tangent_frame() bases at x and xbar.
class CostModel {
  public:
    virtual ~CostModel() = default;
    virtual std::string name() const = 0;
    virtual int ambient_dim() const = 0;
    bool spherical() const { return ambient_dim() == 3; }

    virtual double evaluate(const Vec& x, const Vec& xbar) const = 0;
    virtual Vec grad_source(const Vec& x, const Vec& xbar) const;  // Dc
    virtual Vec grad_target(const Vec& x, const Vec& xbar) const;  // Dbar c
    virtual Mat2 cross_matrix(const Vec& x, const Vec& xbar) const;

    // Raw c-exponentials (no residual check); prefer the checked wrappers
    // c_exp_source / c_exp_target below.
    virtual Vec cexp_source_raw(const Vec& x, const Vec& pbar) const;
    virtual Vec cexp_target_raw(const Vec& xbar, const Vec& p) const;

    virtual double fd_step() const { return 1e-5; }        // gradient differences
    virtual double cross_fd_step() const { return 1e-4; }  // mixed differences
    // Step for the contraction probe. Smaller steps amplify rounding noise in
    // the nested second differences faster than they reduce truncation.
    virtual double mtw_step() const { return 1e-2; }
};

std::unique_ptr<CostModel> make_quadratic_cost();
std::unique_ptr<CostModel> make_log_cost();
std::unique_ptr<CostModel> make_reflector_cost();
std::unique_ptr<CostModel> make_expression_cost(const std::string& text);

// Point moved distance t from x along unit direction v: straight in the plane,
// along the great circle on the sphere.
Vec move_along(const Vec& x, const Vec& v, double t);

// cExp_x(pbar): the point xbar with -Dc(x, xbar) = pbar. Verifies the residual
// is below 1e-9 and throws CExpError otherwise.
Vec c_exp_source(const CostModel& cost, const Vec& x, const Vec& pbar);
Vec c_exp_target(const CostModel& cost, const Vec& xbar, const Vec& p);

// Coordinates of -Dbar c(p, xbar) in the tangent frame at xbar, for each p.
std::vector<std::array<double, 2>> cotangent_coords(const CostModel& cost,
                                                    const std::vector<Vec>& points,
                                                    const Vec& xbar);

struct TwistReport {
    double min_ratio = 0;  // min |Dc(x,a) - Dc(x,b)| / |a - b|
    int samples = 0;
    bool ok = false;
};
TwistReport check_twist(const CostModel& cost, const Domain& source, const Domain& target,
                        int samples, Rng& rng);

struct NondegReport {
    double min_abs_det = 0;
    int samples = 0;
    bool ok = false;
};
NondegReport check_nondeg(const CostModel& cost, const Domain& source, const Domain& target,
                          int samples, Rng& rng);

// Curvature-type contraction probe: second difference, along a cotangent
// perturbation eta, of the second difference of the cost along V. Nonnegative
// values over representative tuples indicate the regularity regime the
// iteration bound certificate assumes.
struct MtwSample {
    double value = 0;
    double value_half = 0;  // recomputed with the step halved
    bool reliable = true;
};
MtwSample mtw_contraction(const CostModel& cost, const Vec& x, const Vec& xbar, const Vec& V,
                          const Vec& eta);
MtwSample mtw_contraction(const CostModel& cost, const Vec& x, const Vec& xbar, const Vec& V,
                          const Vec& eta, double step);

struct MtwReport {
    double min_value = 0;
    double max_abs_value = 0;
    int samples = 0;
    int unreliable = 0;
};
MtwReport check_mtw(const CostModel& cost, const Domain& source, const Domain& target,
                    int samples, Rng& rng);

// Convexity of the boundary image -Dbar c(boundary of source, xbar) in the
// cotangent plane at xbar, tested as a turning-direction scan of the ordered
// loop. worst_turn is the most negative normalized cross product relative to
// the dominant orientation.
struct CConvexityReport {
    bool convex = false;
    double worst_turn = 0;
    int samples = 0;
};
CConvexityReport check_c_convexity_of_domain(const CostModel& cost, const Domain& source,
                                             const Vec& xbar, int boundary_count);

}  // namespace sdot
