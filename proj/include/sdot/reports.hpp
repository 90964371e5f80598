#pragma once

#include <string>
#include <vector>

#include "sdot/bounds.hpp"
#include "sdot/geometry.hpp"
#include "sdot/oracle.hpp"
#include "sdot/partition.hpp"
#include "sdot/scheme.hpp"
#include "sdot/targets.hpp"

namespace sdot {

// Deterministic shortest-roundtrip decimal formatting shared by every writer.
std::string fmt(double v);

void write_text(const std::string& path, const std::string& content);

// cx,cy[,cz],volume,density
std::string grid_csv(const SourceMeasure& measure);

// cx,cy[,cz],index,margin with 1-based target indices
std::string raster_csv(const SourceMeasure& measure, const PartitionResult& partition);

// Portable graymap of the assignment, rectangle grids only (maxval = K).
std::string raster_pgm(const SourceMeasure& measure, const PartitionResult& partition, int K);

// index,x...,mass,realized_mass,weight,log_weight
std::string results_csv(const TargetSpec& targets, const std::vector<double>& alpha,
                        const WeightVector& d);

// outer,inner,target_index,d_old,d_new,G_before,G_after
std::string trace_csv(const SchemeTrace& trace);

// constant,value,method rows followed by the certificate rows
std::string bound_report_csv(const BoundReport& report);

struct ConditionRow {
    std::string check;
    double value = 0;
    double threshold = 0;
    bool pass = false;
};
std::string condition_csv(const std::vector<ConditionRow>& rows);

// source_index,target_index,mass (1-based)
std::string plan_csv(const DiscretePlan& plan);

std::string compare_csv(const CompareReport& report);

}  // namespace sdot
