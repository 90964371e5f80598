#include "sdot/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "sdot/scheme.hpp"

namespace sdot {

namespace {

using nlohmann::json;

const double kPi = 3.14159265358979323846;

Vec parse_vec(const json& j, int dim) {
    Vec v;
    v.dim = dim;
    for (int i = 0; i < dim; i++) v[i] = j.at(i).get<double>();
    return v;
}

// Returns true and fills `out` on success, otherwise records the issue.
bool parse_domain(const json& j, const std::string& where, std::vector<std::string>& issues,
                  Domain& out) {
    try {
        std::string kind = j.at("kind").get<std::string>();
        if (kind == "rectangle") {
            auto mn = j.at("min");
            auto mx = j.at("max");
            out = Domain::rectangle(mn.at(0).get<double>(), mn.at(1).get<double>(),
                                    mx.at(0).get<double>(), mx.at(1).get<double>());
            return true;
        }
        if (kind == "cap") {
            out = Domain::cap(parse_vec(j.at("center"), 3), j.at("radius").get<double>());
            return true;
        }
        issues.push_back(where + ".kind: must be \"rectangle\" or \"cap\"");
    } catch (const GeometryError& e) {
        issues.push_back(where + ": " + e.what());
    } catch (const json::exception& e) {
        issues.push_back(where + ": " + e.what());
    }
    return false;
}

double rect_distance(const Domain& a, const Domain& b) {
    double dx = std::max({a.xmin - b.xmax, b.xmin - a.xmax, 0.0});
    double dy = std::max({a.ymin - b.ymax, b.ymin - a.ymax, 0.0});
    return std::hypot(dx, dy);
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text, const std::string& origin) {
    std::vector<std::string> issues;
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError({origin + ": not valid JSON: " + e.what()});
    }

    RunConfig cfg;
    cfg.path = origin;

    // --- cost ---------------------------------------------------------
    std::string expression;
    if (!j.contains("cost") || !j["cost"].is_object()) {
        issues.push_back("cost: required object");
    } else {
        const json& jc = j["cost"];
        cfg.cost_model = jc.value("model", "");
        cfg.s_min = jc.value("s_min", 0.1);
        if (!(cfg.s_min > 0)) issues.push_back("cost.s_min: must be positive");
        expression = jc.value("expression", "");
        if (cfg.cost_model == "quadratic") {
            cfg.cost = make_quadratic_cost();
        } else if (cfg.cost_model == "log") {
            cfg.cost = make_log_cost();
        } else if (cfg.cost_model == "reflector") {
            cfg.cost = make_reflector_cost();
        } else if (cfg.cost_model == "expression") {
            if (expression.empty()) {
                issues.push_back("cost.expression: required for the expression model");
            } else {
                try {
                    cfg.cost = make_expression_cost(expression);
                } catch (const ExprError& e) {
                    issues.push_back("cost.expression: " + std::string(e.what()));
                }
            }
        } else {
            issues.push_back(
                "cost.model: must be one of quadratic, log, reflector, expression");
        }
    }

    // --- source -------------------------------------------------------
    bool have_source = false;
    if (!j.contains("source") || !j["source"].is_object()) {
        issues.push_back("source: required object");
    } else {
        const json& js = j["source"];
        have_source = parse_domain(js.value("domain", json::object()), "source.domain", issues,
                                   cfg.source_domain);
        cfg.resolution = js.value("resolution", 0);
        if (cfg.resolution < 2) issues.push_back("source.resolution: must be at least 2");
        if (js.contains("density")) {
            const json& jd = js["density"];
            try {
                if (jd.is_string())
                    cfg.density = DensityField::from_expr(jd.get<std::string>());
                else if (jd.is_object() && jd.contains("values"))
                    cfg.density =
                        DensityField::from_values(jd["values"].get<std::vector<double>>());
                else
                    issues.push_back("source.density: expression string or {\"values\": [...]}");
            } catch (const ExprError& e) {
                issues.push_back("source.density: " + std::string(e.what()));
            }
        } else {
            cfg.density = DensityField::constant();
        }
    }

    // --- targets ------------------------------------------------------
    bool have_target_domain = false;
    if (!j.contains("target") || !j["target"].is_object()) {
        issues.push_back("target: required object");
    } else {
        const json& jt = j["target"];
        if (jt.contains("domain"))
            have_target_domain =
                parse_domain(jt["domain"], "target.domain", issues, cfg.target_domain);
        if (!jt.contains("points") || !jt["points"].is_array() || jt["points"].empty()) {
            issues.push_back("target.points: required nonempty array");
        } else {
            int dim = cfg.cost && cfg.cost->spherical() ? 3 : 2;
            int idx = 0;
            for (const json& jp : jt["points"]) {
                std::string where = "target.points[" + std::to_string(idx) + "]";
                try {
                    cfg.targets.points.push_back(parse_vec(jp.at("point"), dim));
                    cfg.targets.masses.push_back(jp.at("mass").get<double>());
                } catch (const json::exception& e) {
                    issues.push_back(where + ": " + e.what());
                }
                idx++;
            }
        }
    }

    // --- scheme / oracle / checks --------------------------------------
    if (!j.contains("scheme") || !j["scheme"].is_object()) {
        issues.push_back("scheme: required object");
    } else {
        cfg.epsilon = j["scheme"].value("epsilon", 0.0);
        cfg.max_sweeps = j["scheme"].value("max_sweeps", 0);
        cfg.spacing_factor = j["scheme"].value("spacing_factor", 0.25);
        if (!(cfg.spacing_factor > 0) || !(cfg.spacing_factor < 1))
            issues.push_back("scheme.spacing_factor: must lie in (0, 1)");
    }
    if (j.contains("oracle")) {
        cfg.oracle_enabled = j["oracle"].value("enabled", true);
        cfg.oracle_resolution = j["oracle"].value("resolution", 40);
        if (cfg.oracle_enabled && cfg.oracle_resolution < 2)
            issues.push_back("oracle.resolution: must be at least 2");
    }
    if (j.contains("checks")) {
        cfg.check_samples = j["checks"].value("samples", 200);
        cfg.boundary_count = j["checks"].value("boundary_count", 0);
        if (cfg.check_samples < 1) issues.push_back("checks.samples: must be positive");
    }
    cfg.seed = j.value("seed", static_cast<std::uint64_t>(42));

    // --- cross-field validation ----------------------------------------
    int K = cfg.targets.K();
    if (K >= 1) {
        double sum = 0;
        double fmin = 1;
        for (int i = 0; i < K; i++) {
            double f = cfg.targets.masses[i];
            sum += f;
            fmin = std::min(fmin, f);
            if (!(f > 0) || (K > 1 && !(f < 1)))
                issues.push_back("target.points[" + std::to_string(i) +
                                 "].mass: must lie in (0, 1)");
        }
        if (std::abs(sum - 1.0) > 1e-12)
            issues.push_back("target.points: masses must sum to 1 (got " + std::to_string(sum) +
                             ")");
        for (int i = 0; i < K; i++)
            for (int k = i + 1; k < K; k++)
                if (dist(cfg.targets.points[i], cfg.targets.points[k]) == 0)
                    issues.push_back("target.points: entries " + std::to_string(i) + " and " +
                                     std::to_string(k) + " coincide");
        if (!(cfg.epsilon > 0) || !(cfg.epsilon < fmin))
            issues.push_back("scheme.epsilon: must lie in (0, min_i mass) = (0, " +
                             std::to_string(fmin) + ")");
    }

    if (cfg.cost && have_source) {
        bool planar_model = cfg.cost->ambient_dim() == 2;
        bool planar_domain = cfg.source_domain.kind == DomainKind::Rectangle;
        if (planar_model != planar_domain)
            issues.push_back("source.domain: kind does not match the cost model (" +
                             cfg.cost_model + " needs " +
                             (planar_model ? "rectangle" : "cap") + ")");
        if (have_target_domain) {
            bool planar_target = cfg.target_domain.kind == DomainKind::Rectangle;
            if (planar_model != planar_target)
                issues.push_back("target.domain: kind does not match the cost model");
        } else {
            if (cfg.cost_model == "log" || cfg.cost_model == "reflector") {
                issues.push_back("target.domain: required for the " + cfg.cost_model + " model");
            } else if (planar_domain) {
                cfg.target_domain = cfg.source_domain;
                have_target_domain = true;
            }
        }

        // Spherical targets must sit on the sphere; planar separation rules
        // keep log-family costs away from their singularities.
        if (cfg.cost->spherical()) {
            for (int i = 0; i < K; i++)
                if (std::abs(norm(cfg.targets.points[i]) - 1.0) > 1e-9)
                    issues.push_back("target.points[" + std::to_string(i) +
                                     "].point: must lie on the unit sphere");
            if (cfg.cost_model == "reflector" && have_target_domain &&
                cfg.source_domain.kind == DomainKind::Cap &&
                cfg.target_domain.kind == DomainKind::Cap) {
                double gap = std::acos(std::clamp(
                                 dot(cfg.source_domain.cap_center, cfg.target_domain.cap_center),
                                 -1.0, 1.0)) -
                             cfg.source_domain.cap_radius - cfg.target_domain.cap_radius;
                double closest = 1.0 - std::cos(gap);
                if (!(gap > 0) || closest < cfg.s_min)
                    issues.push_back("target.domain: caps too close for the reflector model "
                                     "(need 1 - <x, xbar> >= s_min)");
            }
        } else if (cfg.cost_model == "log" && have_target_domain) {
            double d = rect_distance(cfg.source_domain, cfg.target_domain);
            if (d < cfg.s_min)
                issues.push_back("target.domain: must be separated from source.domain by at "
                                 "least s_min = " +
                                 std::to_string(cfg.s_min));
        }
        if (have_target_domain)
            for (int i = 0; i < K; i++)
                if (!cfg.target_domain.contains(cfg.targets.points[i], 1e-9))
                    issues.push_back("target.points[" + std::to_string(i) +
                                     "].point: outside target.domain");
    }

    // Grid-level feasibility: a full column of cells crossing a cell boundary
    // must not be able to jump the acceptance window.
    if (K >= 2 && have_source && cfg.resolution >= 2 && cfg.epsilon > 0) {
        bool eps_ok = true;
        for (double f : cfg.targets.masses)
            if (!(cfg.epsilon < f)) eps_ok = false;
        if (eps_ok) {
            double delta = std::min(cfg.epsilon / (K - 1), cfg.targets.masses[0] / K);
            double limit = cfg.spacing_factor * delta;
            double spacing = cfg.source_domain.char_length() / cfg.resolution;
            if (spacing > limit) {
                int need = static_cast<int>(std::ceil(cfg.source_domain.char_length() / limit));
                issues.push_back("source.resolution: grid spacing " + std::to_string(spacing) +
                                 " exceeds " + std::to_string(cfg.spacing_factor) +
                                 " * delta = " + std::to_string(limit) + "; use at least " +
                                 std::to_string(need));
            } else {
                cfg.delta = delta;
            }
        }
    }

    if (!issues.empty()) throw ConfigError(std::move(issues));

    // Build the measure; strictly positive density is part of validation.
    Grid grid = build_grid(cfg.source_domain, cfg.resolution);
    try {
        cfg.measure = normalize_measure(grid, cfg.density);
    } catch (const GeometryError& e) {
        throw ConfigError({std::string("source.density: ") + e.what()});
    }
    if (K >= 2 && cfg.delta == 0)
        cfg.delta = std::min(cfg.epsilon / (K - 1), cfg.targets.masses[0] / K);
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError({path + ": cannot open file"});
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str(), path);
}

}  // namespace sdot
