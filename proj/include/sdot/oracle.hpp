#pragma once

#include <vector>

#include "sdot/cost.hpp"
#include "sdot/geometry.hpp"
#include "sdot/partition.hpp"
#include "sdot/rng.hpp"
#include "sdot/targets.hpp"

namespace sdot {

struct OracleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Atomized source measure: one atom per grid cell.
struct DiscreteSource {
    std::vector<Vec> points;
    std::vector<double> masses;
};

DiscreteSource discretize_source(const SourceMeasure& measure);

// Optimal transport plan between atoms and targets, with dual certificates.
struct DiscretePlan {
    struct Entry {
        int source;
        int target;
        double mass;
    };
    std::vector<Entry> entries;
    double total_cost = 0;
    std::vector<double> potential_source;  // one per atom
    std::vector<double> potential_target;  // one per target
    int sources = 0;
    int targets = 0;
};

// Exact linear-programming solution by network simplex on the bipartite
// transport graph. The returned plan is self-certified: flows reproduce the
// marginals and every reduced cost is nonnegative within 1e-9.
DiscretePlan solve_exact(const CostModel& cost, const DiscreteSource& source,
                         const TargetSpec& targets);

// Exhaustive dynamic program for tiny instances: equal atom masses 1/N and
// demands that are integer multiples of 1/N, N * K <= 64. Used to cross-check
// the simplex.
DiscretePlan solve_bruteforce(const CostModel& cost, const DiscreteSource& source,
                              const TargetSpec& targets);

// Cyclical monotonicity spot check on the plan's dominant assignments:
// c(a, i) + c(b, j) <= c(a, j) + c(b, i) + 1e-9 for sampled pairs.
struct MonotonicityReport {
    int checked = 0;
    int violations = 0;
};
MonotonicityReport check_c_monotonicity(const DiscretePlan& plan, const CostModel& cost,
                                        const DiscreteSource& source, const TargetSpec& targets,
                                        int pair_samples, Rng& rng);

// Scheme partition vs. LP plan on the same atom grid.
struct CompareReport {
    double scheme_cost = 0;
    double lp_cost = 0;
    double cost_gap = 0;       // scheme_cost - lp_cost
    double relative_gap = 0;   // cost_gap / lp_cost
    int atoms = 0;
    int disagreeing = 0;       // dominant LP target differs from partition
    int split_atoms = 0;       // atoms the LP divides between targets
    double disagreement_mass = 0;
    double max_margin_disagreeing = 0;  // partition margin among disagreements
    double margin_band = 0;             // 2 * Lip * h
};
CompareReport compare_with_scheme(const DiscretePlan& plan, const PartitionResult& partition,
                                  const SourceMeasure& measure, const CostModel& cost,
                                  const TargetSpec& targets);

}  // namespace sdot
