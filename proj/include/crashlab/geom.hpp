#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace crashlab {

inline constexpr double kPi = 3.14159265358979323846;

struct Vec2 {
    double x{0.0};
    double y{0.0};

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
};

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2& v) { return std::sqrt(dot(v, v)); }
inline double distance(const Vec2& a, const Vec2& b) { return norm(a - b); }

// Left-hand normal; route frames use +lateral = left of travel direction.
inline Vec2 normal_left(const Vec2& t) { return {-t.y, t.x}; }

// Normalizes an angle into [-pi, pi).
inline double wrap_angle(double a) {
    a = std::fmod(a + kPi, 2.0 * kPi);
    if (a < 0.0) a += 2.0 * kPi;
    return a - kPi;
}

struct Pose {
    double x{0.0};
    double y{0.0};
    double heading{0.0};  // radians, [-pi, pi)

    Vec2 position() const { return {x, y}; }
};

// Oriented bounding box: center, axis heading, full length along the axis,
// full width across it.
struct Obb {
    Vec2 center;
    double heading{0.0};
    double length{0.0};
    double width{0.0};

    std::array<Vec2, 4> corners() const {
        const double c = std::cos(heading), s = std::sin(heading);
        const Vec2 ax{c, s};
        const Vec2 ay{-s, c};
        const Vec2 hl = ax * (0.5 * length);
        const Vec2 hw = ay * (0.5 * width);
        return {center + hl + hw, center - hl + hw, center - hl - hw, center + hl - hw};
    }

    // Support radius: half-extent of the box projected onto direction u (unit).
    double support_radius(const Vec2& u) const {
        const double c = std::cos(heading), s = std::sin(heading);
        const double along = std::abs(dot(u, {c, s}));
        const double across = std::abs(dot(u, {-s, c}));
        return 0.5 * length * along + 0.5 * width * across;
    }
};

// Area of a simple polygon (shoelace). Vertices in any consistent winding.
inline double polygon_area(const std::vector<Vec2>& poly) {
    if (poly.size() < 3) return 0.0;
    double a = 0.0;
    for (size_t i = 0; i < poly.size(); ++i) {
        const Vec2& p = poly[i];
        const Vec2& q = poly[(i + 1) % poly.size()];
        a += cross(p, q);
    }
    return std::abs(a) * 0.5;
}

// Sutherland-Hodgman clip of a convex polygon against a convex clip polygon.
std::vector<Vec2> clip_convex(const std::vector<Vec2>& subject, const std::vector<Vec2>& clip);

// Intersection area of two oriented boxes.
double obb_overlap_area(const Obb& a, const Obb& b);

}  // namespace crashlab
