#pragma once

#include <array>
#include <cmath>
#include <cstdlib>

namespace sdot {

// Point / tangent vector / covector in ambient coordinates. Planar objects use
// dim = 2 (third component zero), spherical ones dim = 3.
struct Vec {
    std::array<double, 3> a{0.0, 0.0, 0.0};
    int dim = 2;

    double& operator[](int i) { return a[i]; }
    double operator[](int i) const { return a[i]; }
};

inline Vec vec2(double x, double y) { return Vec{{x, y, 0.0}, 2}; }
inline Vec vec3(double x, double y, double z) { return Vec{{x, y, z}, 3}; }

inline Vec operator+(const Vec& u, const Vec& v) {
    return Vec{{u.a[0] + v.a[0], u.a[1] + v.a[1], u.a[2] + v.a[2]}, u.dim};
}
inline Vec operator-(const Vec& u, const Vec& v) {
    return Vec{{u.a[0] - v.a[0], u.a[1] - v.a[1], u.a[2] - v.a[2]}, u.dim};
}
inline Vec operator*(double s, const Vec& u) {
    return Vec{{s * u.a[0], s * u.a[1], s * u.a[2]}, u.dim};
}
inline Vec operator-(const Vec& u) { return -1.0 * u; }

inline double dot(const Vec& u, const Vec& v) {
    return u.a[0] * v.a[0] + u.a[1] * v.a[1] + u.a[2] * v.a[2];
}
inline double norm2(const Vec& u) { return dot(u, u); }
inline double norm(const Vec& u) { return std::sqrt(norm2(u)); }
inline double dist(const Vec& u, const Vec& v) { return norm(u - v); }

inline Vec cross(const Vec& u, const Vec& v) {
    return Vec{{u.a[1] * v.a[2] - u.a[2] * v.a[1],
                u.a[2] * v.a[0] - u.a[0] * v.a[2],
                u.a[0] * v.a[1] - u.a[1] * v.a[0]},
               3};
}

inline Vec normalized(const Vec& u) {
    double n = norm(u);
    return (1.0 / n) * u;
}

// Component orthogonal to the unit vector x (tangent projection on the sphere).
inline Vec project_tangent(const Vec& x, const Vec& v) {
    return v - dot(v, x) * x;
}

// Orthonormal tangent frame at a point. Planar: the coordinate axes. Sphere:
// a deterministic pair orthogonal to x.
struct Frame {
    Vec u, v;
};

inline Frame tangent_frame(const Vec& x) {
    if (x.dim == 2) return Frame{vec2(1.0, 0.0), vec2(0.0, 1.0)};
    Vec pick = std::abs(x.a[2]) < 0.9 ? vec3(0, 0, 1) : vec3(1, 0, 0);
    Vec u = normalized(cross(pick, x));
    Vec v = cross(x, u);
    return Frame{u, v};
}

// Coordinates of a tangent/cotangent vector in the given frame.
inline std::array<double, 2> frame_coords(const Frame& f, const Vec& w) {
    return {dot(f.u, w), dot(f.v, w)};
}

inline Vec from_frame(const Frame& f, double c0, double c1) {
    return c0 * f.u + c1 * f.v;
}

}  // namespace sdot
