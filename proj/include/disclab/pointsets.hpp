#pragma once

// Deterministic point-set generators on [0,1)^2. Seeded generators use
// mt19937_64 with the upper 53 bits mapped to [0,1); the scheme is pinned
// as "mt19937_64-u53/v1" in labels so runs stay reproducible.

#include <cassert>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "disclab/geometry.hpp"

namespace disclab {

inline constexpr const char* kRngId = "mt19937_64-u53/v1";

struct PointSet {
    std::vector<Vec2> points;
    std::string label;

    std::size_t size() const { return points.size(); }
};

namespace detail {

inline double next_u01(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

inline double radical_inverse(std::uint64_t i, std::uint64_t base) {
    double inv = 1.0 / static_cast<double>(base);
    double f = inv;
    double r = 0.0;
    while (i > 0) {
        r += f * static_cast<double>(i % base);
        i /= base;
        f *= inv;
    }
    return r;
}

}  // namespace detail

/// k x k cell-centered grid: ((i+0.5)/k, (j+0.5)/k).
inline PointSet gen_grid(int k) {
    assert(k >= 1);
    PointSet ps;
    ps.points.reserve(static_cast<std::size_t>(k) * k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            ps.points.push_back({(i + 0.5) / k, (j + 0.5) / k});
    ps.label = "grid(k=" + std::to_string(k) + ")";
    return ps;
}

/// First n Halton points in bases (2, 3).
inline PointSet gen_halton(int n) {
    assert(n >= 1);
    PointSet ps;
    ps.points.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        ps.points.push_back({detail::radical_inverse(static_cast<std::uint64_t>(i), 2),
                             detail::radical_inverse(static_cast<std::uint64_t>(i), 3)});
    ps.label = "halton(n=" + std::to_string(n) + ")";
    return ps;
}

inline std::uint64_t fibonacci_number(int k) {
    assert(k >= 1 && k <= 92);
    std::uint64_t a = 1, b = 1;  // F_1, F_2
    for (int i = 3; i <= k; ++i) {
        const std::uint64_t c = a + b;
        a = b;
        b = c;
    }
    return k == 1 ? a : b;
}

/// Fibonacci lattice with N = F_k points: (i/N, {i*F_{k-1}/N}).
inline PointSet gen_fibonacci(int k) {
    assert(k >= 2 && k <= 64);
    const std::uint64_t n = fibonacci_number(k);
    const std::uint64_t step = fibonacci_number(k - 1);
    PointSet ps;
    ps.points.reserve(static_cast<std::size_t>(n));
    std::uint64_t y = 0;  // i*step mod n, updated incrementally to avoid overflow
    for (std::uint64_t i = 0; i < n; ++i) {
        ps.points.push_back({static_cast<double>(i) / static_cast<double>(n),
                             static_cast<double>(y) / static_cast<double>(n)});
        y += step;
        if (y >= n) y -= n;
    }
    ps.label = "fibonacci(k=" + std::to_string(k) + ",n=" + std::to_string(n) + ")";
    return ps;
}

/// n i.i.d.-uniform points; identical (n, seed) reproduces bit-identical output.
inline PointSet gen_random(int n, std::uint64_t seed) {
    assert(n >= 1);
    std::mt19937_64 eng(seed);
    PointSet ps;
    ps.points.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double x = detail::next_u01(eng);
        const double y = detail::next_u01(eng);
        ps.points.push_back({x, y});
    }
    ps.label = "random(n=" + std::to_string(n) + ",seed=" + std::to_string(seed) +
               "," + kRngId + ")";
    return ps;
}

/// k^2 stratified points, one uniform draw per grid cell; k = 1 reduces to
/// gen_random(1, seed).
inline PointSet gen_jittered(int k, std::uint64_t seed) {
    assert(k >= 1);
    std::mt19937_64 eng(seed);
    PointSet ps;
    ps.points.reserve(static_cast<std::size_t>(k) * k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            const double x = (i + detail::next_u01(eng)) / k;
            const double y = (j + detail::next_u01(eng)) / k;
            ps.points.push_back({x, y});
        }
    ps.label = "jittered(k=" + std::to_string(k) + ",seed=" + std::to_string(seed) +
               "," + kRngId + ")";
    return ps;
}

}  // namespace disclab
