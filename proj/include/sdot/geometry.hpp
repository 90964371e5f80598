#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sdot/expr.hpp"
#include "sdot/rng.hpp"
#include "sdot/vec.hpp"

namespace sdot {

struct GeometryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class DomainKind { Rectangle, Cap };

// Source domain: an axis-aligned rectangle in the plane, or a geodesic cap on
// the unit sphere with radius below pi/2.
struct Domain {
    DomainKind kind = DomainKind::Rectangle;
    double xmin = 0, ymin = 0, xmax = 1, ymax = 1;
    Vec cap_center = vec3(0, 0, 1);
    double cap_radius = 0;

    static Domain rectangle(double xmin, double ymin, double xmax, double ymax);
    static Domain cap(const Vec& center, double radius);

    int ambient_dim() const { return kind == DomainKind::Rectangle ? 2 : 3; }
    double volume() const;       // area (Lebesgue or spherical)
    double char_length() const;  // max side, or cap radius
    bool contains(const Vec& x, double tol = 1e-12) const;
    Vec sample(Rng& rng) const;  // uniform w.r.t. volume()
};

struct GridCell {
    Vec center;
    double volume;
};

// Cell decomposition of a domain. Rectangles use an n x n uniform grid; caps
// use n latitude bands of equal angular width, each split into equal-area
// cells, so cell volumes add up to the cap area exactly.
struct Grid {
    Domain domain;
    int resolution = 0;
    int nx = 0, ny = 0;  // rectangle only
    std::vector<GridCell> cells;

    // Mesh size used by feasibility checks: max cell side (rectangle) or the
    // latitude band width (cap).
    double spacing() const;
};

Grid build_grid(const Domain& domain, int resolution);

// Ordered loop of points along the domain boundary (rectangle perimeter walk
// starting at (xmin, ymin), or the cap rim).
std::vector<Vec> boundary_samples(const Domain& domain, int count);

// Density given either as an expression of x1,x2,x3 or as per-cell values.
struct DensityField {
    std::optional<Expr> expr;
    std::vector<double> values;

    static DensityField constant();
    static DensityField from_expr(const std::string& text);
    static DensityField from_values(std::vector<double> v);
};

// Probability measure I * dVol on the grid: density sampled at cell centers
// and rescaled so the cell masses sum to one.
struct SourceMeasure {
    Grid grid;
    std::vector<double> density;  // normalized, per cell
    double raw_total = 0;         // integral before normalization
    double scale = 1;             // applied factor, 1 / raw_total
    double total = 0;             // after normalization, = 1 up to rounding
    double sup_density = 0;

    double cell_mass(int j) const { return density[j] * grid.cells[j].volume; }
};

SourceMeasure normalize_measure(const Grid& grid, const DensityField& field);

double integrate_indicator(const SourceMeasure& m, const std::vector<bool>& indicator);

}  // namespace sdot
