#pragma once

#include <vector>

#include "sdot/cost.hpp"
#include "sdot/geometry.hpp"
#include "sdot/rng.hpp"
#include "sdot/targets.hpp"

namespace sdot {

struct PartitionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Positive weights attached to the targets; the first entry is pinned to 1 by
// the solver but the partition routines accept any positive vector.
struct WeightVector {
    std::vector<double> d;
};

// Cell decomposition induced by weighted cost comparison. assignment[j] is the
// 0-based winning target of grid cell j (ties go to the smallest index),
// masses[i] the source mass collected by target i, margins[j] the gap between
// the winning score and the runner-up at cell j (infinity when K = 1).
struct PartitionResult {
    std::vector<int> assignment;
    std::vector<double> masses;
    std::vector<double> margins;
};

struct PotentialValue {
    double value;
    int argmax;  // 0-based, smallest index on ties
};

// max_i [ -c(x, xbar_i) - log d_i ]
PotentialValue potential_at(const CostModel& cost, const TargetSpec& targets,
                            const WeightVector& d, const Vec& x);

// Per-cell target scores cached once per (measure, targets) pair; every weight
// evaluation is then a single argmax pass over the table.
class CellCostCache {
  public:
    CellCostCache(const CostModel& cost, const SourceMeasure& measure, const TargetSpec& targets);

    PartitionResult assign(const WeightVector& d) const;
    const SourceMeasure& measure() const { return *measure_; }
    const TargetSpec& targets() const { return *targets_; }

  private:
    const SourceMeasure* measure_;
    const TargetSpec* targets_;
    std::vector<double> neg_cost_;  // [cell * K + i] = -c(center_j, xbar_i)
};

PartitionResult assign_cells(const CostModel& cost, const SourceMeasure& measure,
                             const TargetSpec& targets, const WeightVector& d);

// Masses at extreme weights for one target: d_i small enough that it wins
// every cell (mass 1), and large enough that it wins none (mass 0).
struct LimitProbe {
    double d_small = 0, d_large = 0;
    std::vector<double> masses_small;  // masses at d_i = d_small, others 1
    std::vector<double> masses_large;
};
LimitProbe masses_limit_probe(const CostModel& cost, const TargetSpec& targets,
                              const SourceMeasure& measure, int i);

// Samples pairs of cell centers assigned to target i and walks the c-segment
// between their cotangent images, checking the potential margin of target i
// stays above -spacing at interior points.
struct CellConvexityReport {
    bool empty = false;
    int pairs = 0;
    int interior_points = 0;
    int violations = 0;
    int unreliable = 0;  // c-exponential failures along the segment
    double min_margin = 0;
};
CellConvexityReport check_cell_c_convexity(const CostModel& cost, const SourceMeasure& measure,
                                           const TargetSpec& targets, const WeightVector& d,
                                           const PartitionResult& partition, int i,
                                           int pair_samples, Rng& rng);

}  // namespace sdot
