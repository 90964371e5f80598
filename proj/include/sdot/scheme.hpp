#pragma once

#include <string>
#include <vector>

#include "sdot/bounds.hpp"
#include "sdot/partition.hpp"

namespace sdot {

struct SchemeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// delta = min(epsilon / (K - 1), f_1 / K); requires K >= 2 and
// 0 < epsilon < min_i f_i.
double compute_delta(double epsilon, const std::vector<double>& masses);

struct SchemeOptions {
    double epsilon = 0;
    int max_sweeps = 0;           // 0: use a large safety cap
    int boundary_count = 0;       // 0: default_boundary_count
    double spacing_factor = 0.25; // refuse grids with spacing > factor * delta
};

struct InitialWeights {
    WeightVector d;
    double M = 0;
    double Lambda = 0;
};

// d^0 = (1, M, ..., M), verified to give every non-pinned target zero mass.
InitialWeights initial_weights(const CostModel& cost, const TargetSpec& targets,
                               const SourceMeasure& measure, int boundary_count = 0);

struct AdjustOutcome {
    double d_new = 0;
    PartitionResult after;
    int evals = 0;           // partition evaluations spent
    int monotone_flags = 0;  // observed mass moving the wrong way along the bracket
};

// Decreases d_i until the mass of target i lands strictly inside
// (f_i, f_i + delta): bracket by halving, then bisect on log d. Requires the
// current mass to sit at or below f_i - delta.
AdjustOutcome adjust_weight(const CellCostCache& cache, const WeightVector& d, int i, double f_i,
                            double delta);

struct SchemeStep {
    int sweep = 0;
    int inner = 0;         // position within the sweep, 1-based
    int target_index = 0;  // 0-based
    double d_old = 0, d_new = 0;
    double g_before = 0, g_after = 0;
    int evals = 0;
    bool adjusted = false;
};

struct SchemeTrace {
    std::vector<SchemeStep> steps;
    int total_sweeps = 0;
    int adjusting_sweeps = 0;  // sweeps that changed at least one weight
    long long mass_evals = 0;
    int monotone_flags = 0;
    double min_accepted_weight = 0;
};

struct SchemeResult {
    bool converged = false;
    std::string abort_reason;
    WeightVector d_hat;
    std::vector<double> alpha_hat;
    PartitionResult partition;
    double delta = 0;
    double M = 0;
    double Lambda = 0;
    SchemeTrace trace;
};

SchemeResult run_scheme(const CostModel& cost, const SourceMeasure& measure,
                        const TargetSpec& targets, const SchemeOptions& options);

struct ErrorBoundCheck {
    bool ok = false;
    double max_abs_error = 0;
};

// Terminal guarantee: every realized mass within epsilon of its prescription.
ErrorBoundCheck verify_error_bound(const std::vector<double>& alpha, const TargetSpec& targets,
                                   double epsilon);

}  // namespace sdot
