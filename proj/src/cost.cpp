#include "sdot/cost.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sdot {

std::array<double, 2> Mat2::solve(const std::array<double, 2>& rhs) const {
    double d = det();
    double scale = std::max({std::abs(m[0][0]), std::abs(m[0][1]), std::abs(m[1][0]),
                             std::abs(m[1][1]), 1e-300});
    if (std::abs(d) < 1e-14 * scale * scale)
        throw CostError("singular cross-derivative matrix (|det| = " + std::to_string(std::abs(d)) + ")");
    return {(m[1][1] * rhs[0] - m[0][1] * rhs[1]) / d,
            (m[0][0] * rhs[1] - m[1][0] * rhs[0]) / d};
}

Vec move_along(const Vec& x, const Vec& v, double t) {
    if (x.dim == 2) return x + t * v;
    return std::cos(t) * x + std::sin(t) * v;
}

Vec CostModel::grad_source(const Vec& x, const Vec& xbar) const {
    Frame f = tangent_frame(x);
    double h = fd_step();
    double g0 = (evaluate(move_along(x, f.u, h), xbar) - evaluate(move_along(x, f.u, -h), xbar)) / (2 * h);
    double g1 = (evaluate(move_along(x, f.v, h), xbar) - evaluate(move_along(x, f.v, -h), xbar)) / (2 * h);
    return from_frame(f, g0, g1);
}

Vec CostModel::grad_target(const Vec& x, const Vec& xbar) const {
    Frame f = tangent_frame(xbar);
    double h = fd_step();
    double g0 = (evaluate(x, move_along(xbar, f.u, h)) - evaluate(x, move_along(xbar, f.u, -h))) / (2 * h);
    double g1 = (evaluate(x, move_along(xbar, f.v, h)) - evaluate(x, move_along(xbar, f.v, -h))) / (2 * h);
    return from_frame(f, g0, g1);
}

Mat2 CostModel::cross_matrix(const Vec& x, const Vec& xbar) const {
    Frame fx = tangent_frame(x), fy = tangent_frame(xbar);
    double h = cross_fd_step();
    Mat2 out;
    const Vec* us[2] = {&fx.u, &fx.v};
    const Vec* vs[2] = {&fy.u, &fy.v};
    for (int a = 0; a < 2; a++)
        for (int b = 0; b < 2; b++) {
            double pp = evaluate(move_along(x, *us[a], h), move_along(xbar, *vs[b], h));
            double pm = evaluate(move_along(x, *us[a], h), move_along(xbar, *vs[b], -h));
            double mp = evaluate(move_along(x, *us[a], -h), move_along(xbar, *vs[b], h));
            double mm = evaluate(move_along(x, *us[a], -h), move_along(xbar, *vs[b], -h));
            out.m[a][b] = -(pp - pm - mp + mm) / (4 * h * h);
        }
    return out;
}

Vec CostModel::cexp_source_raw(const Vec& x, const Vec& pbar) const {
    if (spherical())
        throw CExpError("no generic c-exponential on the sphere; model must provide one");
    // Newton on the residual. Models landing here differentiate by finite
    // differences, so the residual stalls at the difference noise floor; stop
    // on stagnation and accept the best iterate if it meets the checked
    // wrapper's 1e-9 contract.
    double scale = std::max(1.0, norm(pbar));
    Vec xbar = x + pbar;  // quadratic-like initial guess
    Vec best = xbar;
    double best_r = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 50; it++) {
        Vec r = pbar + grad_source(x, xbar);  // pbar - (-Dc)
        double rn = norm(r);
        if (rn <= 1e-12 * scale) return xbar;
        bool stalled = it > 2 && rn > 0.5 * best_r;
        if (rn < best_r) {
            best_r = rn;
            best = xbar;
        }
        if (stalled) break;
        std::array<double, 2> dxy;
        try {
            dxy = cross_matrix(x, xbar).solve({r[0], r[1]});
        } catch (const CostError& e) {
            throw CExpError(std::string("pbar outside admissible cotangent image: ") + e.what());
        }
        xbar = xbar + vec2(dxy[0], dxy[1]);
    }
    if (best_r <= 1e-9 * scale) return best;
    throw CExpError("pbar outside admissible cotangent image (Newton did not converge)");
}

Vec CostModel::cexp_target_raw(const Vec& xbar, const Vec& p) const {
    if (spherical())
        throw CExpError("no generic c-exponential on the sphere; model must provide one");
    double scale = std::max(1.0, norm(p));
    Vec x = xbar + p;
    Vec best = x;
    double best_r = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 50; it++) {
        Vec r = p + grad_target(x, xbar);
        double rn = norm(r);
        if (rn <= 1e-12 * scale) return x;
        bool stalled = it > 2 && rn > 0.5 * best_r;
        if (rn < best_r) {
            best_r = rn;
            best = x;
        }
        if (stalled) break;
        // d(-Dbar c)/dx is the transpose of the mixed matrix.
        Mat2 M = cross_matrix(x, xbar);
        Mat2 Mt;
        Mt.m[0][0] = M.m[0][0];
        Mt.m[0][1] = M.m[1][0];
        Mt.m[1][0] = M.m[0][1];
        Mt.m[1][1] = M.m[1][1];
        std::array<double, 2> dxy;
        try {
            dxy = Mt.solve({r[0], r[1]});
        } catch (const CostError& e) {
            throw CExpError(std::string("p outside admissible cotangent image: ") + e.what());
        }
        x = x + vec2(dxy[0], dxy[1]);
    }
    if (best_r <= 1e-9 * scale) return best;
    throw CExpError("p outside admissible cotangent image (Newton did not converge)");
}

namespace {

class QuadraticCost final : public CostModel {
  public:
    std::string name() const override { return "quadratic"; }
    int ambient_dim() const override { return 2; }
    double evaluate(const Vec& x, const Vec& xbar) const override {
        return 0.5 * norm2(x - xbar);
    }
    Vec grad_source(const Vec& x, const Vec& xbar) const override { return x - xbar; }
    Vec grad_target(const Vec& x, const Vec& xbar) const override { return xbar - x; }
    Mat2 cross_matrix(const Vec&, const Vec&) const override {
        Mat2 out;
        out.m[0][0] = out.m[1][1] = 1.0;
        return out;
    }
    Vec cexp_source_raw(const Vec& x, const Vec& pbar) const override { return x + pbar; }
    Vec cexp_target_raw(const Vec& xbar, const Vec& p) const override { return xbar + p; }
};

class LogCost final : public CostModel {
  public:
    std::string name() const override { return "log"; }
    int ambient_dim() const override { return 2; }
    double evaluate(const Vec& x, const Vec& xbar) const override {
        double r2 = norm2(x - xbar);
        if (!(r2 > 0)) throw CostError("log cost undefined: coincident source and target");
        return -0.5 * std::log(r2);
    }
    Vec grad_source(const Vec& x, const Vec& xbar) const override {
        double r2 = norm2(x - xbar);
        if (!(r2 > 0)) throw CostError("log cost undefined: coincident source and target");
        return (-1.0 / r2) * (x - xbar);
    }
    Vec grad_target(const Vec& x, const Vec& xbar) const override {
        return -1.0 * grad_source(x, xbar);
    }
    Mat2 cross_matrix(const Vec& x, const Vec& xbar) const override {
        double r2 = norm2(x - xbar);
        if (!(r2 > 0)) throw CostError("log cost undefined: coincident source and target");
        Vec e = (1.0 / std::sqrt(r2)) * (x - xbar);
        Mat2 out;
        for (int a = 0; a < 2; a++)
            for (int b = 0; b < 2; b++)
                out.m[a][b] = (2 * e[a] * e[b] - (a == b ? 1.0 : 0.0)) / r2;
        return out;
    }
    Vec cexp_source_raw(const Vec& x, const Vec& pbar) const override {
        double q = norm2(pbar);
        if (!(q > 0)) throw CExpError("pbar outside admissible cotangent image (zero covector)");
        return x - (1.0 / q) * pbar;
    }
    Vec cexp_target_raw(const Vec& xbar, const Vec& p) const override {
        double q = norm2(p);
        if (!(q > 0)) throw CExpError("p outside admissible cotangent image (zero covector)");
        return xbar - (1.0 / q) * p;
    }
};

class ReflectorCost final : public CostModel {
  public:
    std::string name() const override { return "reflector"; }
    int ambient_dim() const override { return 3; }
    double evaluate(const Vec& x, const Vec& xbar) const override {
        double w = 1.0 - dot(x, xbar);
        if (!(w > 0)) throw CostError("reflector cost undefined: log argument nonpositive");
        return -std::log(w);
    }
    Vec grad_source(const Vec& x, const Vec& xbar) const override {
        double u = dot(x, xbar);
        if (!(1.0 - u > 0)) throw CostError("reflector cost undefined: log argument nonpositive");
        return (1.0 / (1.0 - u)) * (xbar - u * x);
    }
    Vec grad_target(const Vec& x, const Vec& xbar) const override {
        double u = dot(x, xbar);
        if (!(1.0 - u > 0)) throw CostError("reflector cost undefined: log argument nonpositive");
        return (1.0 / (1.0 - u)) * (x - u * xbar);
    }
    Mat2 cross_matrix(const Vec& x, const Vec& xbar) const override {
        double u = dot(x, xbar);
        if (!(1.0 - u > 0)) throw CostError("reflector cost undefined: log argument nonpositive");
        Frame fx = tangent_frame(x), fy = tangent_frame(xbar);
        double w = 1.0 - u;
        Mat2 out;
        const Vec* us[2] = {&fx.u, &fx.v};
        const Vec* vs[2] = {&fy.u, &fy.v};
        for (int a = 0; a < 2; a++)
            for (int b = 0; b < 2; b++)
                out.m[a][b] = -dot(*us[a], *vs[b]) / w - dot(*us[a], xbar) * dot(*vs[b], x) / (w * w);
        return out;
    }
    Vec cexp_source_raw(const Vec& x, const Vec& pbar) const override {
        if (std::abs(dot(pbar, x)) > 1e-9 * (1.0 + norm(pbar)))
            throw CExpError("pbar outside admissible cotangent image (not tangent at x)");
        double q = norm2(pbar);
        double u = (q - 1.0) / (q + 1.0);
        Vec xbar = u * x - (2.0 / (q + 1.0)) * pbar;
        return normalized(xbar);
    }
    Vec cexp_target_raw(const Vec& xbar, const Vec& p) const override {
        if (std::abs(dot(p, xbar)) > 1e-9 * (1.0 + norm(p)))
            throw CExpError("p outside admissible cotangent image (not tangent at xbar)");
        double q = norm2(p);
        double u = (q - 1.0) / (q + 1.0);
        Vec x = u * xbar - (2.0 / (q + 1.0)) * p;
        return normalized(x);
    }
};

class ExpressionCost final : public CostModel {
  public:
    explicit ExpressionCost(const std::string& text) : expr_(Expr::parse(text)) {}
    std::string name() const override { return "expression"; }
    int ambient_dim() const override { return 2; }
    double evaluate(const Vec& x, const Vec& xbar) const override {
        return expr_.eval_pair(x, xbar);
    }

  private:
    Expr expr_;
};

}  // namespace

std::unique_ptr<CostModel> make_quadratic_cost() { return std::make_unique<QuadraticCost>(); }
std::unique_ptr<CostModel> make_log_cost() { return std::make_unique<LogCost>(); }
std::unique_ptr<CostModel> make_reflector_cost() { return std::make_unique<ReflectorCost>(); }
std::unique_ptr<CostModel> make_expression_cost(const std::string& text) {
    return std::make_unique<ExpressionCost>(text);
}

Vec c_exp_source(const CostModel& cost, const Vec& x, const Vec& pbar) {
    Vec xbar = cost.cexp_source_raw(x, pbar);
    Vec r = pbar + cost.grad_source(x, xbar);
    if (norm(r) > 1e-9 * std::max(1.0, norm(pbar)))
        throw CExpError("pbar outside admissible cotangent image (residual " +
                        std::to_string(norm(r)) + ")");
    return xbar;
}

Vec c_exp_target(const CostModel& cost, const Vec& xbar, const Vec& p) {
    Vec x = cost.cexp_target_raw(xbar, p);
    Vec r = p + cost.grad_target(x, xbar);
    if (norm(r) > 1e-9 * std::max(1.0, norm(p)))
        throw CExpError("p outside admissible cotangent image (residual " +
                        std::to_string(norm(r)) + ")");
    return x;
}

std::vector<std::array<double, 2>> cotangent_coords(const CostModel& cost,
                                                    const std::vector<Vec>& points,
                                                    const Vec& xbar) {
    Frame f = tangent_frame(xbar);
    std::vector<std::array<double, 2>> out;
    out.reserve(points.size());
    for (const Vec& p : points)
        out.push_back(frame_coords(f, -1.0 * cost.grad_target(p, xbar)));
    return out;
}

TwistReport check_twist(const CostModel& cost, const Domain& source, const Domain& target,
                        int samples, Rng& rng) {
    TwistReport rep;
    rep.samples = samples;
    rep.min_ratio = std::numeric_limits<double>::infinity();
    for (int s = 0; s < samples; s++) {
        Vec x = source.sample(rng);
        Vec a = target.sample(rng), b = target.sample(rng);
        double sep = dist(a, b);
        if (sep < 1e-8) {
            s--;  // nearly identical draw, not informative
            continue;
        }
        double ratio = dist(cost.grad_source(x, a), cost.grad_source(x, b)) / sep;
        rep.min_ratio = std::min(rep.min_ratio, ratio);
    }
    rep.ok = rep.min_ratio > 1e-8;
    return rep;
}

NondegReport check_nondeg(const CostModel& cost, const Domain& source, const Domain& target,
                          int samples, Rng& rng) {
    NondegReport rep;
    rep.samples = samples;
    rep.min_abs_det = std::numeric_limits<double>::infinity();
    for (int s = 0; s < samples; s++) {
        Vec x = source.sample(rng);
        Vec xbar = target.sample(rng);
        rep.min_abs_det = std::min(rep.min_abs_det, std::abs(cost.cross_matrix(x, xbar).det()));
    }
    rep.ok = rep.min_abs_det >= 1e-10;
    return rep;
}

namespace {

// Second difference of the cost along the unit direction V at x.
double second_diff_along(const CostModel& cost, const Vec& x, const Vec& V, const Vec& xbar,
                         double h) {
    double cp = cost.evaluate(move_along(x, V, h), xbar);
    double c0 = cost.evaluate(x, xbar);
    double cm = cost.evaluate(move_along(x, V, -h), xbar);
    return (cp - 2 * c0 + cm) / (h * h);
}

double contraction_value(const CostModel& cost, const Vec& x, const Vec& V, const Vec& pbar0,
                         const Vec& eta, double step) {
    double v[3];
    int k = 0;
    for (double s : {-step, 0.0, step}) {
        Vec xb = c_exp_source(cost, x, pbar0 + s * eta);
        v[k++] = second_diff_along(cost, x, V, xb, step);
    }
    return -(v[0] - 2 * v[1] + v[2]) / (step * step);
}

}  // namespace

MtwSample mtw_contraction(const CostModel& cost, const Vec& x, const Vec& xbar, const Vec& V,
                          const Vec& eta, double step) {
    Vec Vt = cost.spherical() ? project_tangent(x, V) : V;
    if (norm(Vt) < 1e-8) throw CostError("degenerate direction V in contraction probe");
    Vt = normalized(Vt);
    Vec et = cost.spherical() ? project_tangent(x, eta) : eta;
    et = et - dot(et, Vt) * Vt;
    if (norm(et) < 1e-8) throw CostError("degenerate perturbation eta in contraction probe");
    et = normalized(et);

    Vec pbar0 = -1.0 * cost.grad_source(x, xbar);
    MtwSample out;
    out.value = contraction_value(cost, x, Vt, pbar0, et, step);
    out.value_half = contraction_value(cost, x, Vt, pbar0, et, step / 2);
    double mag = std::max(std::abs(out.value), std::abs(out.value_half));
    out.reliable = mag <= 1e-3 || std::abs(out.value - out.value_half) <= 0.1 * mag;
    return out;
}

MtwSample mtw_contraction(const CostModel& cost, const Vec& x, const Vec& xbar, const Vec& V,
                          const Vec& eta) {
    return mtw_contraction(cost, x, xbar, V, eta, cost.mtw_step());
}

MtwReport check_mtw(const CostModel& cost, const Domain& source, const Domain& target,
                    int samples, Rng& rng) {
    MtwReport rep;
    rep.min_value = std::numeric_limits<double>::infinity();
    auto random_dir = [&](const Vec& at) {
        for (;;) {
            Vec v = at.dim == 2 ? vec2(rng.uniform(-1, 1), rng.uniform(-1, 1))
                                : vec3(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
            if (at.dim == 3) v = project_tangent(at, v);
            if (norm(v) > 1e-3) return normalized(v);
        }
    };
    while (rep.samples < samples) {
        Vec x = source.sample(rng);
        Vec xbar = target.sample(rng);
        Vec V = random_dir(x);
        Vec eta = random_dir(x);
        eta = eta - dot(eta, V) * V;
        if (norm(eta) < 1e-3) continue;
        rep.samples++;
        MtwSample s;
        try {
            s = mtw_contraction(cost, x, xbar, V, eta);
        } catch (const CExpError&) {
            // Degenerate costs have no admissible perturbation here; the probe
            // cannot run, which the nondegeneracy check reports on its own.
            rep.unreliable++;
            continue;
        }
        if (!s.reliable) rep.unreliable++;
        rep.min_value = std::min(rep.min_value, s.value);
        rep.max_abs_value = std::max(rep.max_abs_value, std::abs(s.value));
    }
    if (rep.unreliable == rep.samples) rep.min_value = 0;
    return rep;
}

CConvexityReport check_c_convexity_of_domain(const CostModel& cost, const Domain& source,
                                             const Vec& xbar, int boundary_count) {
    std::vector<Vec> loop = boundary_samples(source, boundary_count);
    auto coords = cotangent_coords(cost, loop, xbar);
    size_t n = coords.size();
    // Normalized turning direction at each vertex of the image loop.
    std::vector<double> turns;
    turns.reserve(n);
    double scale = 0;
    for (size_t i = 0; i < n; i++) {
        auto& p0 = coords[i];
        auto& p1 = coords[(i + 1) % n];
        auto& p2 = coords[(i + 2) % n];
        double e0x = p1[0] - p0[0], e0y = p1[1] - p0[1];
        double e1x = p2[0] - p1[0], e1y = p2[1] - p1[1];
        double l0 = std::hypot(e0x, e0y), l1 = std::hypot(e1x, e1y);
        scale = std::max({scale, l0, l1});
        if (l0 < 1e-14 || l1 < 1e-14) continue;
        turns.push_back((e0x * e1y - e0y * e1x) / (l0 * l1));
    }
    CConvexityReport rep;
    rep.samples = static_cast<int>(n);
    double total = 0;
    for (double t : turns) total += t;
    double orient = total >= 0 ? 1.0 : -1.0;
    rep.worst_turn = std::numeric_limits<double>::infinity();
    for (double t : turns) rep.worst_turn = std::min(rep.worst_turn, orient * t);
    rep.convex = rep.worst_turn > -1e-9;
    return rep;
}

}  // namespace sdot
