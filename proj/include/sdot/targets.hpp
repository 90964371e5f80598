#pragma once

#include <limits>
#include <stdexcept>
#include <vector>

#include "sdot/vec.hpp"

namespace sdot {

// Discrete target measure: K distinct points with positive masses summing
// to one.
struct TargetSpec {
    std::vector<Vec> points;
    std::vector<double> masses;

    int K() const { return static_cast<int>(points.size()); }

    double min_pairwise_distance() const {
        double best = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < points.size(); i++)
            for (size_t k = i + 1; k < points.size(); k++)
                best = std::min(best, dist(points[i], points[k]));
        return best;
    }
};

inline void validate_targets(const TargetSpec& t) {
    if (t.points.empty() || t.points.size() != t.masses.size())
        throw std::invalid_argument("targets: need matching nonempty points and masses");
    double sum = 0;
    for (double f : t.masses) sum += f;
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("targets: masses must sum to 1");
    for (double f : t.masses) {
        if (!(f > 0)) throw std::invalid_argument("targets: masses must be positive");
        if (t.points.size() > 1 && !(f < 1))
            throw std::invalid_argument("targets: masses must be below 1");
    }
    if (t.points.size() > 1 && !(t.min_pairwise_distance() > 0))
        throw std::invalid_argument("targets: points must be distinct");
}

}  // namespace sdot
