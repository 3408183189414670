#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace lawn {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

inline Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(double s, Vec3 v) { return {s * v.x, s * v.y, s * v.z}; }
inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(Vec3 v) { return std::sqrt(dot(v, v)); }
inline Vec2 horizontal(Vec3 v) { return {v.x, v.y}; }

inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }

// Flight box [0,x_max] x [0,y_max] x [h_min,h_max].
struct Workspace {
    double x_max = 500.0;
    double y_max = 500.0;
    double h_min = 100.0;
    double h_max = 150.0;
};

struct CylindricalObstacle {
    Vec2 center;
    double radius = 0.0;
    double height = 120.0;
};

struct RectangularObstacle {
    Vec2 center;
    Vec2 half_extents;  // center-to-face distances per axis
    double height = 120.0;
};

// Strict interior tests; a point exactly on the boundary counts as outside,
// so boundary positions are non-violating.
inline bool contains_cyl(Vec2 p, const CylindricalObstacle& o) {
    return norm(p - o.center) < o.radius;
}

inline bool contains_rect(Vec2 p, const RectangularObstacle& o) {
    Vec2 d = p - o.center;
    return std::abs(d.x) < o.half_extents.x && std::abs(d.y) < o.half_extents.y;
}

// radius - distance: positive inside (intrusion depth), negative outside
// (exterior clearance)
inline double clearance_cyl(Vec2 p, const CylindricalObstacle& o) {
    return o.radius - norm(p - o.center);
}

// max over axes of (half_extent - |offset|); the intrusion depth for interior
// points. Only meaningful as an intrusion when contains_rect(p, o) holds.
inline double intrusion_rect(Vec2 p, const RectangularObstacle& o) {
    Vec2 d = p - o.center;
    return std::max(o.half_extents.x - std::abs(d.x), o.half_extents.y - std::abs(d.y));
}

// Euclidean distance from p to the rectangle footprint; 0 on and inside it.
inline double rect_exterior_distance(Vec2 p, const RectangularObstacle& o) {
    Vec2 d = p - o.center;
    double ex = std::max(std::abs(d.x) - o.half_extents.x, 0.0);
    double ey = std::max(std::abs(d.y) - o.half_extents.y, 0.0);
    return std::hypot(ex, ey);
}

inline double cyl_exterior_distance(Vec2 p, const CylindricalObstacle& o) {
    return std::max(norm(p - o.center) - o.radius, 0.0);
}

// Euclidean distance from q to the workspace box; 0 iff q is inside (closed).
inline double workspace_violation(Vec3 q, const Workspace& w) {
    auto excess = [](double v, double lo, double hi) {
        return std::max({lo - v, 0.0, v - hi});
    };
    double ex = excess(q.x, 0.0, w.x_max);
    double ey = excess(q.y, 0.0, w.y_max);
    double ez = excess(q.z, w.h_min, w.h_max);
    return std::sqrt(ex * ex + ey * ey + ez * ez);
}

}  // namespace lawn
