#include "sdot/scheme.hpp"

#include <algorithm>
#include <cmath>

namespace sdot {

double compute_delta(double epsilon, const std::vector<double>& masses) {
    int K = static_cast<int>(masses.size());
    if (K < 2) throw SchemeError("delta is defined for K >= 2");
    double fmin = *std::min_element(masses.begin(), masses.end());
    if (!(epsilon > 0) || !(epsilon < fmin))
        throw SchemeError("epsilon must lie in (0, min_i f_i)");
    return std::min(epsilon / (K - 1), masses[0] / K);
}

InitialWeights initial_weights(const CostModel& cost, const TargetSpec& targets,
                               const SourceMeasure& measure, int boundary_count) {
    validate_targets(targets);
    if (boundary_count <= 0) boundary_count = default_boundary_count(measure.grid);
    MLambda ml = constants_M_Lambda(cost, targets, measure, boundary_count);
    InitialWeights init;
    init.M = ml.M;
    init.Lambda = ml.Lambda;
    init.d.d.assign(targets.K(), ml.M);
    init.d.d[0] = 1.0;
    PartitionResult p = assign_cells(cost, measure, targets, init.d);
    for (int i = 1; i < targets.K(); i++)
        if (p.masses[i] != 0.0)
            throw SchemeError("initial weight scale underestimated; refine sup sampling");
    return init;
}

AdjustOutcome adjust_weight(const CellCostCache& cache, const WeightVector& d, int i, double f_i,
                            double delta) {
    const int kMaxHalvings = 200;
    const int kMaxBisections = 500;

    AdjustOutcome out;
    WeightVector trial = d;
    PartitionResult last;
    auto mass_at = [&](double di) {
        trial.d[i] = di;
        out.evals++;
        last = cache.assign(trial);
        return last.masses[i];
    };

    double d_hi = d.d[i];  // weight whose mass sits at or below f_i - delta
    double g_hi = mass_at(d_hi);
    if (g_hi > f_i - delta + 1e-12)
        throw SchemeError("adjustment precondition violated: mass above f - delta");

    // Shrink the weight until the mass crosses f_i.
    double d_lo = d_hi, g_lo = g_hi;
    int halvings = 0;
    while (!(g_lo > f_i)) {
        if (++halvings > kMaxHalvings)
            throw SchemeError("weight bracket collapse: no crossing after 200 halvings");
        double next = d_lo / 2;
        double g = mass_at(next);
        if (g < g_lo - 1e-12) out.monotone_flags++;  // smaller weight must not lose mass
        d_hi = d_lo;
        g_hi = g_lo;
        d_lo = next;
        g_lo = g;
    }
    if (g_lo < f_i + delta) {  // first crossing already inside the window
        out.d_new = d_lo;
        out.after = std::move(last);
        return out;
    }

    // Bisect on log d for the first iterate strictly inside (f_i, f_i + delta).
    for (int it = 0; it < kMaxBisections; it++) {
        double mid = std::exp(0.5 * (std::log(d_lo) + std::log(d_hi)));
        double g = mass_at(mid);
        if (g > f_i && g < f_i + delta) {
            out.d_new = mid;
            out.after = std::move(last);
            return out;
        }
        if (g <= f_i) {
            if (g < g_hi - 1e-12) out.monotone_flags++;
            d_hi = mid;
            g_hi = g;
        } else {
            if (g > g_lo + 1e-12) out.monotone_flags++;
            d_lo = mid;
            g_lo = g;
        }
    }
    throw SchemeError(
        "bisection window skipped: mass jump across the window exceeds delta; refine the grid");
}

SchemeResult run_scheme(const CostModel& cost, const SourceMeasure& measure,
                        const TargetSpec& targets, const SchemeOptions& options) {
    validate_targets(targets);
    int K = targets.K();
    SchemeResult res;
    if (K == 1) {
        res.converged = true;
        res.d_hat.d = {1.0};
        res.alpha_hat = {measure.total};
        res.partition = assign_cells(cost, measure, targets, res.d_hat);
        res.trace.min_accepted_weight = 1.0;
        return res;
    }

    res.delta = compute_delta(options.epsilon, targets.masses);
    double factor = options.spacing_factor > 0 ? options.spacing_factor : 0.25;
    double limit = factor * res.delta;
    double spacing = measure.grid.spacing();
    if (spacing > limit + 1e-15) {
        int need =
            static_cast<int>(std::ceil(measure.grid.resolution * spacing / limit));
        throw SchemeError("grid spacing " + std::to_string(spacing) + " exceeds " +
                          std::to_string(factor) + " * delta = " + std::to_string(limit) +
                          "; raise resolution to about " + std::to_string(need));
    }

    CellCostCache cache(cost, measure, targets);
    InitialWeights init = initial_weights(cost, targets, measure, options.boundary_count);
    res.M = init.M;
    res.Lambda = init.Lambda;
    WeightVector d = init.d;
    PartitionResult cur = cache.assign(d);
    res.trace.mass_evals++;
    res.trace.min_accepted_weight = 1.0;

    int cap = options.max_sweeps > 0 ? options.max_sweeps : 1000000;
    for (;;) {
        bool changed = false;
        int inner = 0;
        for (int i = 1; i < K; i++) {
            inner++;
            SchemeStep step;
            step.sweep = res.trace.total_sweeps + 1;
            step.inner = inner;
            step.target_index = i;
            step.d_old = d.d[i];
            step.g_before = cur.masses[i];
            double f = targets.masses[i];
            if (std::abs(cur.masses[i] - f) < res.delta) {
                step.d_new = step.d_old;
                step.g_after = step.g_before;
                res.trace.steps.push_back(step);
                continue;
            }
            if (cur.masses[i] > f)
                throw SchemeError("mass above prescription outside the skip band; "
                                  "feasible band violated");
            AdjustOutcome adj = adjust_weight(cache, d, i, f, res.delta);
            res.trace.mass_evals += adj.evals;
            res.trace.monotone_flags += adj.monotone_flags;
            d.d[i] = adj.d_new;
            cur = std::move(adj.after);
            res.trace.min_accepted_weight = std::min(res.trace.min_accepted_weight, adj.d_new);
            step.d_new = adj.d_new;
            step.g_after = cur.masses[i];
            step.evals = adj.evals;
            step.adjusted = true;
            res.trace.steps.push_back(step);
            changed = true;
            for (int k = 1; k < K; k++)
                if (cur.masses[k] > targets.masses[k] + res.delta + 1e-12)
                    throw SchemeError("feasible band violated after adjustment");
        }
        res.trace.total_sweeps++;
        if (!changed) break;
        res.trace.adjusting_sweeps++;
        if (res.trace.total_sweeps >= cap) {
            res.abort_reason = "sweep cap exceeded";
            res.d_hat = d;
            res.alpha_hat = cur.masses;
            res.partition = std::move(cur);
            return res;
        }
    }

    res.converged = true;
    res.d_hat = d;
    res.alpha_hat = cur.masses;
    res.partition = std::move(cur);
    return res;
}

ErrorBoundCheck verify_error_bound(const std::vector<double>& alpha, const TargetSpec& targets,
                                   double epsilon) {
    ErrorBoundCheck check;
    if (alpha.size() != targets.masses.size())
        throw SchemeError("error bound check: size mismatch");
    for (size_t i = 0; i < alpha.size(); i++)
        check.max_abs_error = std::max(check.max_abs_error, std::abs(alpha[i] - targets.masses[i]));
    check.ok = check.max_abs_error < epsilon;
    return check;
}

}  // namespace sdot
