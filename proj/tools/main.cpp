#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "sdot/config.hpp"
#include "sdot/oracle.hpp"
#include "sdot/reports.hpp"
#include "sdot/scheme.hpp"

namespace {

using namespace sdot;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitAbort = 3;
constexpr int kExitCertificate = 4;

struct CommonArgs {
    std::string config_path;
    std::string out_dir = "sdot_out";
    bool strict = false;
    bool no_oracle = false;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

RunConfig load_or_exit(const CommonArgs& args) {
    RunConfig cfg = load_run_config(args.config_path);
    if (args.seed_set) cfg.seed = args.seed;
    return cfg;
}

std::string out_path(const CommonArgs& args, const std::string& name) {
    return (std::filesystem::path(args.out_dir) / name).string();
}

void write_partition_artifacts(const CommonArgs& args, const RunConfig& cfg,
                               const PartitionResult& partition) {
    write_text(out_path(args, "raster.csv"), raster_csv(cfg.measure, partition));
    if (cfg.source_domain.kind == DomainKind::Rectangle)
        write_text(out_path(args, "raster.pgm"),
                   raster_pgm(cfg.measure, partition, cfg.targets.K()));
}

int run_oracle_compare(const CommonArgs& args, const RunConfig& cfg, const WeightVector& d_hat) {
    int res = cfg.oracle_resolution > 0 ? cfg.oracle_resolution : 40;
    Grid grid = build_grid(cfg.source_domain, res);
    long long pairs = static_cast<long long>(grid.cells.size()) * cfg.targets.K();
    if (pairs > 1000000) {
        int max_res = static_cast<int>(res * std::sqrt(1000000.0 / pairs));
        throw OracleError("oracle.resolution " + std::to_string(res) +
                          " exceeds the LP size cap (" + std::to_string(pairs) +
                          " source-target pairs); use at most " + std::to_string(max_res));
    }
    SourceMeasure measure = normalize_measure(grid, cfg.density);
    DiscreteSource atoms = discretize_source(measure);
    DiscretePlan plan = solve_exact(*cfg.cost, atoms, cfg.targets);
    PartitionResult partition = assign_cells(*cfg.cost, measure, cfg.targets, d_hat);
    CompareReport cmp = compare_with_scheme(plan, partition, measure, *cfg.cost, cfg.targets);
    Rng rng(cfg.seed);
    MonotonicityReport mono =
        check_c_monotonicity(plan, *cfg.cost, atoms, cfg.targets, 500, rng);

    write_text(out_path(args, "plan.csv"), plan_csv(plan));
    write_text(out_path(args, "compare.csv"), compare_csv(cmp));
    std::cout << "oracle: atoms=" << cmp.atoms << " lp_cost=" << fmt(cmp.lp_cost)
              << " scheme_cost=" << fmt(cmp.scheme_cost)
              << " relative_gap=" << fmt(cmp.relative_gap)
              << " disagreeing=" << cmp.disagreeing << " (mass " << fmt(cmp.disagreement_mass)
              << ")\n";
    std::cout << "oracle: monotonicity checked=" << mono.checked
              << " violations=" << mono.violations << "\n";
    return mono.violations == 0 ? kExitOk : kExitCertificate;
}

int cmd_solve(const CommonArgs& args) {
    RunConfig cfg = load_or_exit(args);
    BoundReport report;
    try {
        BoundConstants constants =
            compute_constants(*cfg.cost, cfg.targets, cfg.measure, cfg.boundary_count);
        report = make_bound_report(constants, cfg.epsilon, cfg.delta);
    } catch (const BoundsError& e) {
        // The certificate needs the surface-measure constants; the scheme does
        // not. Solve anyway and mark the certificate as not run.
        report.epsilon = cfg.epsilon;
        report.delta = cfg.delta;
        report.applicable = false;
        report.not_applicable_reason = "surface constants unavailable; see bounds command";
        std::cerr << "iteration bound constants unavailable: " << e.what() << "\n";
    }

    write_text(out_path(args, "grid.csv"), grid_csv(cfg.measure));

    SchemeOptions options;
    options.epsilon = cfg.epsilon;
    options.max_sweeps = cfg.max_sweeps;
    options.boundary_count = cfg.boundary_count;
    options.spacing_factor = cfg.spacing_factor;
    SchemeResult result;
    try {
        result = run_scheme(*cfg.cost, cfg.measure, cfg.targets, options);
    } catch (const SchemeError& e) {
        write_text(out_path(args, "bound_report.csv"), bound_report_csv(report));
        std::cerr << "scheme aborted: " << e.what() << "\n";
        return kExitAbort;
    }

    report.observed = result.trace.adjusting_sweeps;
    report.mass_evals = result.trace.mass_evals;
    report.pass = !report.applicable || report.observed <= report.n_eps_bound;

    write_text(out_path(args, "results.csv"),
               results_csv(cfg.targets, result.alpha_hat, result.d_hat));
    write_text(out_path(args, "trace.csv"), trace_csv(result.trace));
    write_text(out_path(args, "bound_report.csv"), bound_report_csv(report));
    write_partition_artifacts(args, cfg, result.partition);

    if (!result.converged) {
        std::cerr << "scheme aborted: " << result.abort_reason << "\n";
        return kExitAbort;
    }

    ErrorBoundCheck err = verify_error_bound(result.alpha_hat, cfg.targets, cfg.epsilon);
    std::cout << "solve: converged in " << result.trace.total_sweeps << " sweeps ("
              << result.trace.adjusting_sweeps << " adjusting), max |alpha - f| = "
              << fmt(err.max_abs_error) << (err.ok ? " < " : " >= ") << fmt(cfg.epsilon) << "\n";
    if (report.applicable)
        std::cout << "solve: iteration bound " << fmt(report.n_eps_bound) << ", observed "
                  << report.observed << " => certificate " << (report.pass ? "pass" : "FAIL")
                  << "\n";

    int rc = kExitOk;
    if (cfg.oracle_enabled && !args.no_oracle) {
        int orc = run_oracle_compare(args, cfg, result.d_hat);
        rc = std::max(rc, orc);
    }

    if (!err.ok || !report.pass) {
        std::cerr << "certificate failure" << (args.strict ? "" : " (warning)") << "\n";
        if (args.strict) return kExitCertificate;
    }
    return rc;
}

int cmd_verify(const CommonArgs& args) {
    RunConfig cfg = load_or_exit(args);
    Rng rng(cfg.seed);
    std::vector<ConditionRow> rows;

    TwistReport tw =
        check_twist(*cfg.cost, cfg.source_domain, cfg.target_domain, cfg.check_samples, rng);
    rows.push_back({"twist_min_ratio", tw.min_ratio, 1e-8, tw.ok});

    NondegReport nd =
        check_nondeg(*cfg.cost, cfg.source_domain, cfg.target_domain, cfg.check_samples, rng);
    rows.push_back({"nondeg_min_abs_det", nd.min_abs_det, 1e-10, nd.ok});

    MtwReport mtw =
        check_mtw(*cfg.cost, cfg.source_domain, cfg.target_domain, cfg.check_samples, rng);
    rows.push_back({"mtw_min_value", mtw.min_value, -1e-4, mtw.min_value >= -1e-4});
    rows.push_back({"mtw_unreliable_fraction",
                    static_cast<double>(mtw.unreliable) / std::max(1, mtw.samples), 0.05,
                    mtw.unreliable <= mtw.samples / 20});

    int bc = cfg.boundary_count > 0 ? cfg.boundary_count : default_boundary_count(cfg.measure.grid);
    for (int i = 0; i < cfg.targets.K(); i++) {
        CConvexityReport cc =
            check_c_convexity_of_domain(*cfg.cost, cfg.source_domain, cfg.targets.points[i], bc);
        rows.push_back({"c_convexity_worst_turn_target_" + std::to_string(i + 1), cc.worst_turn,
                        -1e-9, cc.convex});
    }

    bool all = true;
    for (const ConditionRow& r : rows) {
        std::cout << (r.pass ? "pass " : "FAIL ") << r.check << " = " << fmt(r.value)
                  << " (threshold " << fmt(r.threshold) << ")\n";
        all = all && r.pass;
    }
    write_text(out_path(args, "condition_report.csv"), condition_csv(rows));
    if (!all && args.strict) return kExitCertificate;
    return kExitOk;
}

int cmd_bounds(const CommonArgs& args) {
    RunConfig cfg = load_or_exit(args);
    BoundConstants constants =
        compute_constants(*cfg.cost, cfg.targets, cfg.measure, cfg.boundary_count);
    BoundReport report = make_bound_report(constants, cfg.epsilon, cfg.delta);
    std::string csv = bound_report_csv(report);
    write_text(out_path(args, "bound_report.csv"), csv);
    std::cout << csv;
    return kExitOk;
}

int cmd_oracle(const CommonArgs& args) {
    RunConfig cfg = load_or_exit(args);
    SchemeOptions options;
    options.epsilon = cfg.epsilon;
    options.max_sweeps = cfg.max_sweeps;
    options.boundary_count = cfg.boundary_count;
    options.spacing_factor = cfg.spacing_factor;
    SchemeResult result;
    try {
        result = run_scheme(*cfg.cost, cfg.measure, cfg.targets, options);
    } catch (const SchemeError& e) {
        std::cerr << "scheme aborted: " << e.what() << "\n";
        return kExitAbort;
    }
    if (!result.converged) {
        std::cerr << "scheme aborted: " << result.abort_reason << "\n";
        return kExitAbort;
    }
    return run_oracle_compare(args, cfg, result.d_hat);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"semi-discrete optimal transport solver"};
    app.require_subcommand(1);

    CommonArgs args;
    auto add_common = [&](CLI::App* sub, bool with_oracle_flag) {
        sub->add_option("config", args.config_path, "JSON configuration file")->required();
        sub->add_option("--out", args.out_dir, "output directory");
        sub->add_flag("--strict", args.strict, "escalate certificate failures to errors");
        auto* seed = sub->add_option("--seed", args.seed, "override the configured RNG seed");
        seed->each([&](const std::string&) { args.seed_set = true; });
        if (with_oracle_flag)
            sub->add_flag("--no-oracle", args.no_oracle, "skip the discrete oracle comparison");
    };

    CLI::App* solve = app.add_subcommand("solve", "run the weight adjustment scheme");
    add_common(solve, true);
    CLI::App* verify = app.add_subcommand("verify", "run cost regularity checks");
    add_common(verify, false);
    CLI::App* bounds = app.add_subcommand("bounds", "compute the iteration bound constants");
    add_common(bounds, false);
    CLI::App* oracle = app.add_subcommand("oracle", "compare against the exact discrete plan");
    add_common(oracle, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return cmd_solve(args);
        if (verify->parsed()) return cmd_verify(args);
        if (bounds->parsed()) return cmd_bounds(args);
        if (oracle->parsed()) return cmd_oracle(args);
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitAbort;
    }
    return kExitOk;
}
