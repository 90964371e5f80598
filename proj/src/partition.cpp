#include "sdot/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sdot {

namespace {

void check_weights(const TargetSpec& targets, const WeightVector& d) {
    if (static_cast<int>(d.d.size()) != targets.K())
        throw PartitionError("weight vector length does not match target count");
    for (double w : d.d)
        if (!(w > 0) || !std::isfinite(w))
            throw PartitionError("weights must be positive and finite");
}

}  // namespace

PotentialValue potential_at(const CostModel& cost, const TargetSpec& targets,
                            const WeightVector& d, const Vec& x) {
    check_weights(targets, d);
    PotentialValue best{-std::numeric_limits<double>::infinity(), 0};
    for (int i = 0; i < targets.K(); i++) {
        double v = -cost.evaluate(x, targets.points[i]) - std::log(d.d[i]);
        if (v > best.value) best = {v, i};
    }
    return best;
}

CellCostCache::CellCostCache(const CostModel& cost, const SourceMeasure& measure,
                             const TargetSpec& targets)
    : measure_(&measure), targets_(&targets) {
    validate_targets(targets);
    size_t n = measure.grid.cells.size();
    int K = targets.K();
    neg_cost_.resize(n * K);
    for (size_t j = 0; j < n; j++)
        for (int i = 0; i < K; i++)
            neg_cost_[j * K + i] = -cost.evaluate(measure.grid.cells[j].center, targets.points[i]);
}

PartitionResult CellCostCache::assign(const WeightVector& d) const {
    check_weights(*targets_, d);
    int K = targets_->K();
    size_t n = measure_->grid.cells.size();
    std::vector<double> log_d(K);
    for (int i = 0; i < K; i++) log_d[i] = std::log(d.d[i]);

    PartitionResult out;
    out.assignment.resize(n);
    out.margins.resize(n);
    out.masses.assign(K, 0.0);
    for (size_t j = 0; j < n; j++) {
        const double* row = &neg_cost_[j * K];
        double best = -std::numeric_limits<double>::infinity();
        double second = best;
        int arg = 0;
        for (int i = 0; i < K; i++) {
            double v = row[i] - log_d[i];
            if (v > best) {
                second = best;
                best = v;
                arg = i;
            } else if (v > second) {
                second = v;
            }
        }
        out.assignment[j] = arg;
        out.margins[j] = K > 1 ? best - second : std::numeric_limits<double>::infinity();
        out.masses[arg] += measure_->cell_mass(static_cast<int>(j));
    }
    return out;
}

PartitionResult assign_cells(const CostModel& cost, const SourceMeasure& measure,
                             const TargetSpec& targets, const WeightVector& d) {
    return CellCostCache(cost, measure, targets).assign(d);
}

LimitProbe masses_limit_probe(const CostModel& cost, const TargetSpec& targets,
                              const SourceMeasure& measure, int i) {
    validate_targets(targets);
    if (i < 0 || i >= targets.K()) throw PartitionError("limit probe: index out of range");
    // Extremes of c(x, xbar_i) - c(x, xbar_k) over cell centers give weights
    // at which target i wins, or loses, every cell outright.
    double max_gap = -std::numeric_limits<double>::infinity();
    double min_gap = std::numeric_limits<double>::infinity();
    for (const GridCell& cell : measure.grid.cells) {
        double ci = cost.evaluate(cell.center, targets.points[i]);
        for (int k = 0; k < targets.K(); k++) {
            if (k == i) continue;
            double gap = ci - cost.evaluate(cell.center, targets.points[k]);
            max_gap = std::max(max_gap, gap);
            min_gap = std::min(min_gap, gap);
        }
    }
    LimitProbe probe;
    probe.d_small = std::exp(-max_gap) * 1e-3;
    probe.d_large = std::exp(-min_gap) * 1e3;
    CellCostCache cache(cost, measure, targets);
    WeightVector d;
    d.d.assign(targets.K(), 1.0);
    d.d[i] = probe.d_small;
    probe.masses_small = cache.assign(d).masses;
    d.d[i] = probe.d_large;
    probe.masses_large = cache.assign(d).masses;
    return probe;
}

CellConvexityReport check_cell_c_convexity(const CostModel& cost, const SourceMeasure& measure,
                                           const TargetSpec& targets, const WeightVector& d,
                                           const PartitionResult& partition, int i,
                                           int pair_samples, Rng& rng) {
    CellConvexityReport rep;
    std::vector<int> mine;
    for (size_t j = 0; j < partition.assignment.size(); j++)
        if (partition.assignment[j] == i) mine.push_back(static_cast<int>(j));
    if (mine.size() < 2) {
        rep.empty = mine.empty();
        return rep;
    }
    double tol = measure.grid.spacing();
    const Vec& xbar = targets.points[i];
    rep.min_margin = std::numeric_limits<double>::infinity();
    for (int s = 0; s < pair_samples; s++) {
        const Vec& a = measure.grid.cells[mine[rng.uniform_int(static_cast<int>(mine.size()))]].center;
        const Vec& b = measure.grid.cells[mine[rng.uniform_int(static_cast<int>(mine.size()))]].center;
        rep.pairs++;
        Vec pa = -1.0 * cost.grad_target(a, xbar);
        Vec pb = -1.0 * cost.grad_target(b, xbar);
        for (int t = 1; t < 10; t++) {
            double lam = t / 10.0;
            Vec p = (1.0 - lam) * pa + lam * pb;
            if (cost.spherical()) p = project_tangent(xbar, p);
            Vec x;
            try {
                x = c_exp_target(cost, xbar, p);
            } catch (const CExpError&) {
                rep.unreliable++;
                continue;
            }
            rep.interior_points++;
            double mine_v = -cost.evaluate(x, xbar) - std::log(d.d[i]);
            double other = -std::numeric_limits<double>::infinity();
            for (int k = 0; k < targets.K(); k++) {
                if (k == i) continue;
                other = std::max(other, -cost.evaluate(x, targets.points[k]) - std::log(d.d[k]));
            }
            double margin = mine_v - other;
            rep.min_margin = std::min(rep.min_margin, margin);
            if (margin < -tol) rep.violations++;
        }
    }
    return rep;
}

}  // namespace sdot
