#pragma once

// Planar and torus primitives: rotations, periodic wrapping, containment in
// rotated rectangles, and areas clipped against the unit square.

#include <array>
#include <cassert>
#include <cmath>
#include <numbers>

namespace disclab {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2() = default;
    constexpr Vec2(double xx, double yy) : x(xx), y(yy) {}

    constexpr Vec2 operator+(const Vec2& r) const { return {x + r.x, y + r.y}; }
    constexpr Vec2 operator-(const Vec2& r) const { return {x - r.x, y - r.y}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr double dot(const Vec2& r) const { return x * r.x + y * r.y; }
    double norm() const { return std::hypot(x, y); }
};

constexpr Vec2 operator*(double s, const Vec2& v) { return v * s; }

/// Rotation angle in radians; angles drawn from an allowed rotation set
/// satisfy |radians| <= pi/4.
struct Angle {
    double radians = 0.0;
};

/// Rectangle given by center, half-extents along its own axes, and a
/// counterclockwise rotation. Spatial test rectangles keep half-extents
/// below 1/2 so periodic copies never overlap themselves; rectangles in
/// frequency space carry no such restriction.
struct RotRect {
    Vec2 center;
    double half_u = 0.0;
    double half_v = 0.0;
    Angle angle;
};

/// Counterclockwise rotation of v by a.
inline Vec2 rotate_vec(const Vec2& v, Angle a) {
    const double c = std::cos(a.radians);
    const double s = std::sin(a.radians);
    return {v.x * c - v.y * s, v.x * s + v.y * c};
}

/// Componentwise reduction mod Z^2 into [0,1)^2.
inline Vec2 torus_wrap(const Vec2& v) {
    double x = v.x - std::floor(v.x);
    double y = v.y - std::floor(v.y);
    if (x >= 1.0) x = 0.0;  // tiny negative inputs would otherwise round to 1.0
    if (y >= 1.0) y = 0.0;
    return {x, y};
}

namespace detail {

// Closed-box test of an offset d measured from the rectangle center.
inline bool box_contains_offset(const RotRect& rect, const Vec2& d) {
    const Vec2 q = rotate_vec(d, Angle{-rect.angle.radians});
    return std::fabs(q.x) <= rect.half_u && std::fabs(q.y) <= rect.half_v;
}

}  // namespace detail

/// Closed containment test, non-periodic.
inline bool contains(const RotRect& rect, const Vec2& p) {
    return detail::box_contains_offset(rect, p - rect.center);
}

/// Containment of p in the periodic extension of rect over the unit torus.
/// The offset is wrapped first, so only the 3x3 block of integer translates
/// needs checking; this requires half-extents < 1/2.
inline bool contains_periodic(const RotRect& rect, const Vec2& p) {
    assert(rect.half_u < 0.5 && rect.half_v < 0.5);
    const Vec2 w = torus_wrap(p - rect.center);
    for (int zx = -1; zx <= 1; ++zx)
        for (int zy = -1; zy <= 1; ++zy)
            if (detail::box_contains_offset(rect, {w.x + zx, w.y + zy})) return true;
    return false;
}

/// The four corners in counterclockwise order, starting at (+half_u, +half_v).
inline std::array<Vec2, 4> rect_vertices(const RotRect& rect) {
    const Vec2 u = rotate_vec({rect.half_u, 0.0}, rect.angle);
    const Vec2 v = rotate_vec({0.0, rect.half_v}, rect.angle);
    return {rect.center + u + v, rect.center - u + v,
            rect.center - u - v, rect.center + u - v};
}

/// Area of rect intersected with [0,1]^2: the rectangle polygon is clipped
/// against the four half-planes of the unit square (Sutherland-Hodgman) and
/// measured by the shoelace formula.
inline double clipped_area(const RotRect& rect) {
    assert(rect.half_u > 0.0 && rect.half_v > 0.0);
    // 4 vertices, at most one extra per clip edge
    std::array<Vec2, 12> poly{};
    std::array<Vec2, 12> next{};
    const auto verts = rect_vertices(rect);
    int n = 4;
    for (int i = 0; i < 4; ++i) poly[i] = verts[i];

    // signed inside-distances of the four clip edges x>=0, y>=0, x<=1, y<=1
    const auto edge = [](int e, const Vec2& p) -> double {
        switch (e) {
            case 0: return p.x;
            case 1: return p.y;
            case 2: return 1.0 - p.x;
            default: return 1.0 - p.y;
        }
    };

    for (int e = 0; e < 4 && n > 0; ++e) {
        int m = 0;
        for (int i = 0; i < n; ++i) {
            const Vec2& cur = poly[i];
            const Vec2& nxt = poly[(i + 1) % n];
            const double fc = edge(e, cur);
            const double fn = edge(e, nxt);
            if (fc >= 0.0) {
                next[m++] = cur;
                if (fn < 0.0) {
                    const double t = fc / (fc - fn);
                    next[m++] = {cur.x + t * (nxt.x - cur.x), cur.y + t * (nxt.y - cur.y)};
                }
            } else if (fn >= 0.0) {
                const double t = fc / (fc - fn);
                next[m++] = {cur.x + t * (nxt.x - cur.x), cur.y + t * (nxt.y - cur.y)};
            }
        }
        n = m;
        poly = next;
    }

    double twice_area = 0.0;
    for (int i = 0; i < n; ++i) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[(i + 1) % n];
        twice_area += a.x * b.y - b.x * a.y;
    }
    return std::max(0.0, 0.5 * twice_area);
}

}  // namespace disclab
