#include "sdot/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace sdot {

namespace {

const double kPi = 3.14159265358979323846;

// Rotation taking the north pole to `center` (identity if already there).
struct CapFrame {
    Vec e0, e1, e2;  // columns; e2 = center
    Vec apply(double sin_t, double cos_t, double phi) const {
        double sx = sin_t * std::cos(phi), sy = sin_t * std::sin(phi);
        return sx * e0 + sy * e1 + cos_t * e2;
    }
};

CapFrame cap_frame(const Vec& center) {
    Frame f = tangent_frame(center);
    return CapFrame{f.u, f.v, center};
}

}  // namespace

Domain Domain::rectangle(double xmin, double ymin, double xmax, double ymax) {
    if (!(xmax > xmin) || !(ymax > ymin))
        throw GeometryError("degenerate rectangle: sides must be positive");
    Domain d;
    d.kind = DomainKind::Rectangle;
    d.xmin = xmin;
    d.ymin = ymin;
    d.xmax = xmax;
    d.ymax = ymax;
    return d;
}

Domain Domain::cap(const Vec& center, double radius) {
    if (std::abs(norm(center) - 1.0) > 1e-9)
        throw GeometryError("cap center must lie on the unit sphere");
    if (!(radius > 0) || !(radius < kPi / 2))
        throw GeometryError("cap radius must lie in (0, pi/2)");
    Domain d;
    d.kind = DomainKind::Cap;
    d.cap_center = normalized(center);
    d.cap_center.dim = 3;
    d.cap_radius = radius;
    return d;
}

double Domain::volume() const {
    if (kind == DomainKind::Rectangle) return (xmax - xmin) * (ymax - ymin);
    return 2 * kPi * (1 - std::cos(cap_radius));
}

double Domain::char_length() const {
    if (kind == DomainKind::Rectangle) return std::max(xmax - xmin, ymax - ymin);
    return cap_radius;
}

bool Domain::contains(const Vec& x, double tol) const {
    if (kind == DomainKind::Rectangle)
        return x[0] >= xmin - tol && x[0] <= xmax + tol && x[1] >= ymin - tol && x[1] <= ymax + tol;
    double c = std::clamp(dot(x, cap_center), -1.0, 1.0);
    return std::acos(c) <= cap_radius + tol;
}

Vec Domain::sample(Rng& rng) const {
    if (kind == DomainKind::Rectangle)
        return vec2(rng.uniform(xmin, xmax), rng.uniform(ymin, ymax));
    double c = rng.uniform(std::cos(cap_radius), 1.0);
    double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    double phi = rng.uniform(0.0, 2 * kPi);
    return cap_frame(cap_center).apply(s, c, phi);
}

double Grid::spacing() const {
    if (domain.kind == DomainKind::Rectangle)
        return std::max((domain.xmax - domain.xmin) / nx, (domain.ymax - domain.ymin) / ny);
    return domain.cap_radius / resolution;
}

Grid build_grid(const Domain& domain, int resolution) {
    if (resolution < 2) throw GeometryError("grid resolution must be at least 2");
    Grid g;
    g.domain = domain;
    g.resolution = resolution;
    if (domain.kind == DomainKind::Rectangle) {
        g.nx = g.ny = resolution;
        double hx = (domain.xmax - domain.xmin) / resolution;
        double hy = (domain.ymax - domain.ymin) / resolution;
        g.cells.reserve(static_cast<size_t>(resolution) * resolution);
        for (int j = 0; j < resolution; j++)
            for (int i = 0; i < resolution; i++)
                g.cells.push_back({vec2(domain.xmin + (i + 0.5) * hx, domain.ymin + (j + 0.5) * hy),
                                   hx * hy});
        return g;
    }
    CapFrame frame = cap_frame(domain.cap_center);
    double dth = domain.cap_radius / resolution;
    for (int b = 0; b < resolution; b++) {
        double th0 = b * dth, th1 = (b + 1) * dth;
        double band_area = 2 * kPi * (std::cos(th0) - std::cos(th1));
        double th_mid = 0.5 * (th0 + th1);
        int m = std::max(1, static_cast<int>(std::llround(2 * kPi * std::sin(th_mid) / dth)));
        double cell_area = band_area / m;
        double cos_c = 0.5 * (std::cos(th0) + std::cos(th1));
        double sin_c = std::sqrt(std::max(0.0, 1.0 - cos_c * cos_c));
        for (int s = 0; s < m; s++) {
            double phi = (s + 0.5) * 2 * kPi / m;
            g.cells.push_back({frame.apply(sin_c, cos_c, phi), cell_area});
        }
    }
    return g;
}

std::vector<Vec> boundary_samples(const Domain& domain, int count) {
    if (count < 4) throw GeometryError("boundary sample count must be at least 4");
    std::vector<Vec> pts;
    pts.reserve(count);
    if (domain.kind == DomainKind::Rectangle) {
        int per_edge = std::max(1, count / 4);
        Vec corners[4] = {vec2(domain.xmin, domain.ymin), vec2(domain.xmax, domain.ymin),
                          vec2(domain.xmax, domain.ymax), vec2(domain.xmin, domain.ymax)};
        for (int e = 0; e < 4; e++) {
            Vec a = corners[e], b = corners[(e + 1) % 4];
            for (int k = 0; k < per_edge; k++) {
                double t = static_cast<double>(k) / per_edge;
                pts.push_back(a + t * (b - a));
            }
        }
        return pts;
    }
    CapFrame frame = cap_frame(domain.cap_center);
    double s = std::sin(domain.cap_radius), c = std::cos(domain.cap_radius);
    for (int k = 0; k < count; k++)
        pts.push_back(frame.apply(s, c, 2 * kPi * k / count));
    return pts;
}

DensityField DensityField::constant() { return from_expr("1"); }

DensityField DensityField::from_expr(const std::string& text) {
    DensityField f;
    f.expr = Expr::parse(text);
    return f;
}

DensityField DensityField::from_values(std::vector<double> v) {
    DensityField f;
    f.values = std::move(v);
    return f;
}

SourceMeasure normalize_measure(const Grid& grid, const DensityField& field) {
    size_t n = grid.cells.size();
    std::vector<double> den(n);
    if (field.expr) {
        for (size_t j = 0; j < n; j++) den[j] = field.expr->eval_point(grid.cells[j].center);
    } else {
        if (field.values.size() != n)
            throw GeometryError("tabulated density has " + std::to_string(field.values.size()) +
                                " values, grid has " + std::to_string(n) + " cells");
        den = field.values;
    }
    std::vector<size_t> bad;
    for (size_t j = 0; j < n; j++)
        if (!(den[j] > 0)) bad.push_back(j);
    if (!bad.empty()) {
        std::string msg = "density must be strictly positive at cell centers; violated at " +
                          std::to_string(bad.size()) + " cells (first indices:";
        for (size_t k = 0; k < std::min<size_t>(bad.size(), 5); k++)
            msg += " " + std::to_string(bad[k]);
        throw GeometryError(msg + ")");
    }
    SourceMeasure m;
    m.grid = grid;
    double tot = 0;
    for (size_t j = 0; j < n; j++) tot += den[j] * grid.cells[j].volume;
    m.raw_total = tot;
    m.scale = 1.0 / tot;
    m.density.resize(n);
    double check = 0, sup = 0;
    for (size_t j = 0; j < n; j++) {
        m.density[j] = den[j] * m.scale;
        check += m.density[j] * grid.cells[j].volume;
        sup = std::max(sup, m.density[j]);
    }
    m.total = check;
    m.sup_density = sup;
    return m;
}

double integrate_indicator(const SourceMeasure& m, const std::vector<bool>& indicator) {
    if (indicator.size() != m.grid.cells.size())
        throw GeometryError("indicator size does not match grid");
    double s = 0;
    for (size_t j = 0; j < indicator.size(); j++)
        if (indicator[j]) s += m.cell_mass(static_cast<int>(j));
    return s;
}

}  // namespace sdot
