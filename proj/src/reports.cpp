#include "sdot/reports.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

namespace sdot {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text(const std::string& path, const std::string& content) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

std::string grid_csv(const SourceMeasure& measure) {
    bool sph = measure.grid.domain.kind == DomainKind::Cap;
    std::string s = sph ? "cx,cy,cz,volume,density\n" : "cx,cy,volume,density\n";
    for (size_t j = 0; j < measure.grid.cells.size(); j++) {
        const GridCell& c = measure.grid.cells[j];
        s += fmt(c.center[0]) + "," + fmt(c.center[1]);
        if (sph) s += "," + fmt(c.center[2]);
        s += "," + fmt(c.volume) + "," + fmt(measure.density[j]) + "\n";
    }
    return s;
}

// Margins are printed to 6 significant digits: rescaling every weight by a
// common factor is a mathematical no-op but perturbs log-weight differences by
// ulps, and the raster must reproduce byte-for-byte across such gauges.
static std::string fmt_margin(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string raster_csv(const SourceMeasure& measure, const PartitionResult& partition) {
    bool sph = measure.grid.domain.kind == DomainKind::Cap;
    std::string s = sph ? "cx,cy,cz,index,margin\n" : "cx,cy,index,margin\n";
    for (size_t j = 0; j < measure.grid.cells.size(); j++) {
        const GridCell& c = measure.grid.cells[j];
        s += fmt(c.center[0]) + "," + fmt(c.center[1]);
        if (sph) s += "," + fmt(c.center[2]);
        s += "," + std::to_string(partition.assignment[j] + 1) + "," +
             fmt_margin(partition.margins[j]) + "\n";
    }
    return s;
}

std::string raster_pgm(const SourceMeasure& measure, const PartitionResult& partition, int K) {
    if (measure.grid.domain.kind != DomainKind::Rectangle)
        throw std::runtime_error("pgm raster only defined for rectangle grids");
    int nx = measure.grid.nx, ny = measure.grid.ny;
    std::string s = "P2\n" + std::to_string(nx) + " " + std::to_string(ny) + "\n" +
                    std::to_string(K) + "\n";
    // Top row first, so the image reads with y up.
    for (int j = ny - 1; j >= 0; j--) {
        for (int i = 0; i < nx; i++) {
            if (i) s += " ";
            s += std::to_string(partition.assignment[static_cast<size_t>(j) * nx + i] + 1);
        }
        s += "\n";
    }
    return s;
}

std::string results_csv(const TargetSpec& targets, const std::vector<double>& alpha,
                        const WeightVector& d) {
    bool sph = targets.points.empty() ? false : targets.points[0].dim == 3;
    std::string s = sph ? "index,x1,x2,x3,mass,realized_mass,weight,log_weight\n"
                        : "index,x1,x2,mass,realized_mass,weight,log_weight\n";
    for (int i = 0; i < targets.K(); i++) {
        s += std::to_string(i + 1) + "," + fmt(targets.points[i][0]) + "," +
             fmt(targets.points[i][1]);
        if (sph) s += "," + fmt(targets.points[i][2]);
        s += "," + fmt(targets.masses[i]) + "," + fmt(alpha[i]) + "," + fmt(d.d[i]) + "," +
             fmt(std::log(d.d[i])) + "\n";
    }
    return s;
}

std::string trace_csv(const SchemeTrace& trace) {
    std::string s = "outer,inner,target_index,d_old,d_new,G_before,G_after\n";
    for (const SchemeStep& st : trace.steps)
        s += std::to_string(st.sweep) + "," + std::to_string(st.inner) + "," +
             std::to_string(st.target_index + 1) + "," + fmt(st.d_old) + "," + fmt(st.d_new) +
             "," + fmt(st.g_before) + "," + fmt(st.g_after) + "\n";
    return s;
}

std::string bound_report_csv(const BoundReport& report) {
    const std::string sampled = "grid+boundary sampling in orthonormal frames";
    std::string s = "constant,value,method\n";
    const BoundConstants& c = report.constants;
    s += "K," + std::to_string(c.K) + ",target count\n";
    s += "sup_I," + fmt(c.sup_I) + ",max normalized density over cells\n";
    for (size_t i = 0; i < c.sigma.size(); i++)
        s += "sigma_" + std::to_string(i + 1) + "," + fmt(c.sigma[i]) +
             ",hull perimeter of boundary image\n";
    s += "sigma_max," + fmt(c.sigma_max) + ",max over targets\n";
    if (report.applicable) {
        s += "C," + fmt(c.C) + "," + sampled + "\n";
        s += "M," + fmt(c.M) + "," + sampled + "\n";
        s += "Lambda," + fmt(c.Lambda) + "," + sampled + "\n";
    }
    s += "epsilon," + fmt(report.epsilon) + ",configured\n";
    s += "delta," + fmt(report.delta) + ",min(eps/(K-1); f_1/K)\n";
    if (report.applicable) {
        s += "n_eps_bound," + fmt(report.n_eps_bound) + ",K(K C M sup_I sigma_max/(delta Lambda)+1)\n";
        if (report.observed >= 0) {
            s += "observed_adjusting_sweeps," + std::to_string(report.observed) +
                 ",sweeps that changed a weight\n";
            s += "mass_evaluations," + std::to_string(report.mass_evals) +
                 ",bisection partition evaluations (not counted against the bound)\n";
            s += std::string("certificate,") + (report.pass ? "pass" : "fail") +
                 ",observed <= n_eps_bound\n";
        } else {
            s += "certificate,not_run,scheme not executed\n";
        }
    } else {
        s += "n_eps_bound,not_applicable," + report.not_applicable_reason + "\n";
    }
    return s;
}

std::string condition_csv(const std::vector<ConditionRow>& rows) {
    std::string s = "check,value,threshold,pass\n";
    for (const ConditionRow& r : rows)
        s += r.check + "," + fmt(r.value) + "," + fmt(r.threshold) + "," +
             (r.pass ? "1" : "0") + "\n";
    return s;
}

std::string plan_csv(const DiscretePlan& plan) {
    std::string s = "source_index,target_index,mass\n";
    for (const auto& e : plan.entries)
        s += std::to_string(e.source + 1) + "," + std::to_string(e.target + 1) + "," +
             fmt(e.mass) + "\n";
    return s;
}

std::string compare_csv(const CompareReport& r) {
    std::string s = "key,value\n";
    s += "atoms," + std::to_string(r.atoms) + "\n";
    s += "scheme_cost," + fmt(r.scheme_cost) + "\n";
    s += "lp_cost," + fmt(r.lp_cost) + "\n";
    s += "cost_gap," + fmt(r.cost_gap) + "\n";
    s += "relative_gap," + fmt(r.relative_gap) + "\n";
    s += "disagreeing_atoms," + std::to_string(r.disagreeing) + "\n";
    s += "split_atoms," + std::to_string(r.split_atoms) + "\n";
    s += "disagreement_mass," + fmt(r.disagreement_mass) + "\n";
    s += "max_margin_disagreeing," + fmt(r.max_margin_disagreeing) + "\n";
    s += "margin_band," + fmt(r.margin_band) + "\n";
    return s;
}

}  // namespace sdot
