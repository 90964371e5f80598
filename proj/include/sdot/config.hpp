#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "sdot/cost.hpp"
#include "sdot/geometry.hpp"
#include "sdot/targets.hpp"

namespace sdot {

// Carries every violated constraint found in a configuration, not just the
// first one.
struct ConfigError : std::runtime_error {
    explicit ConfigError(std::vector<std::string> issues_in)
        : std::runtime_error(join(issues_in)), issues(std::move(issues_in)) {}
    std::vector<std::string> issues;

  private:
    static std::string join(const std::vector<std::string>& v) {
        std::string s = "invalid configuration:";
        for (const auto& i : v) s += "\n  - " + i;
        return s;
    }
};

struct RunConfig {
    std::string path;
    std::shared_ptr<CostModel> cost;
    std::string cost_model;  // quadratic | log | reflector | expression
    double s_min = 0.1;

    Domain source_domain;
    Domain target_domain;
    DensityField density;
    int resolution = 0;

    TargetSpec targets;
    double epsilon = 0;
    int max_sweeps = 0;
    // Grid feasibility: require spacing <= spacing_factor * delta, so a single
    // aligned row of cells (mass ~ spacing) cannot jump the acceptance window.
    double spacing_factor = 0.25;

    bool oracle_enabled = false;
    int oracle_resolution = 0;

    int check_samples = 200;
    int boundary_count = 0;  // 0: auto
    std::uint64_t seed = 42;

    // Built during load; density positivity is validated here as well.
    SourceMeasure measure;
    double delta = 0;  // 0 when K == 1
};

RunConfig load_run_config(const std::string& path);
RunConfig parse_run_config(const std::string& json_text, const std::string& origin);

}  // namespace sdot
