#pragma once

// Local, extremal, and L^2 directional discrepancy of point sets. The
// extremal search returns best-found values over the rotated-rectangle
// class: every evaluated rectangle is feasible, so results are certified
// lower bounds on the supremum, never upper bounds.

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "disclab/fourier.hpp"
#include "disclab/geometry.hpp"
#include "disclab/parallel.hpp"
#include "disclab/pointsets.hpp"

namespace disclab {

/// Symmetric allowed-rotation interval [-theta, theta], theta in (0, pi/4].
struct RotationSet {
    Angle theta;
};

enum class DiscMode { periodic, clipped };

/// Budget knobs of the extremal search: angle grid size, center/extent grid
/// size, and the number of refinement rounds around the incumbent.
struct SearchBudget {
    int angles = 8;
    int grid = 8;
    int rounds = 2;
    bool trivial_seed = true;
};

struct SearchMeta {
    std::uint64_t evaluations = 0;
    int resolution = 0;
};

struct DiscrepancyResult {
    double value = 0.0;
    std::optional<RotRect> argmax;
    DiscMode mode = DiscMode::periodic;
    SearchMeta meta;
};

/// |#(P in rect) - N*area|. Periodic mode counts through the torus and uses
/// the full rectangle area; clipped mode counts plainly and uses the area
/// clipped to the unit square.
inline double local_disc(const PointSet& P, const RotRect& rect, DiscMode mode) {
    assert(rect.half_u > 0.0 && rect.half_v > 0.0);
    assert(rect.half_u < 0.5 && rect.half_v < 0.5);
    std::size_t count = 0;
    if (mode == DiscMode::periodic) {
        for (const Vec2& p : P.points) count += contains_periodic(rect, p) ? 1 : 0;
        const double area = 4.0 * rect.half_u * rect.half_v;
        return std::fabs(static_cast<double>(count) - static_cast<double>(P.size()) * area);
    }
    for (const Vec2& p : P.points) count += contains(rect, p) ? 1 : 0;
    return std::fabs(static_cast<double>(count) -
                     static_cast<double>(P.size()) * clipped_area(rect));
}

namespace detail {

// Pairwise alignment angles folded into [-pi/4, pi/4]; discrepancy maxima
// cluster near rectangle sides through point pairs.
inline std::vector<double> critical_angles(const PointSet& P, double theta, std::size_t cap) {
    std::vector<double> found;
    const std::size_t n = P.size();
    for (std::size_t i = 0; i < n && found.size() < 4 * cap + 64; ++i)
        for (std::size_t j = i + 1; j < n && found.size() < 4 * cap + 64; ++j) {
            const double dy = P.points[j].y - P.points[i].y;
            const double dx = P.points[j].x - P.points[i].x;
            if (dx == 0.0 && dy == 0.0) continue;
            const double folded = std::remainder(std::atan2(dy, dx), kPi / 2.0);
            if (std::fabs(folded) <= theta + 1e-15) found.push_back(folded);
        }
    std::sort(found.begin(), found.end());
    found.erase(std::unique(found.begin(), found.end(),
                            [](double a, double b) { return std::fabs(a - b) < 1e-12; }),
                found.end());
    if (found.size() > cap) {
        std::vector<double> thinned;
        thinned.reserve(cap);
        for (std::size_t i = 0; i < cap; ++i)
            thinned.push_back(found[i * found.size() / cap]);
        found = thinned;
    }
    return found;
}

}  // namespace detail

/// Best-found maximum of local_disc over rectangles with angles on a uniform
/// grid of [-theta, theta] (plus point-pair alignment angles), centers and
/// half-extents on refined grids. With trivial seeding the result is >= 1/4:
/// interior squares of area 1/(4N) always have local discrepancy >= 1/4
/// because the counting part is an integer.
inline DiscrepancyResult extremal_disc_search(const PointSet& P, RotationSet omega,
                                              DiscMode mode, const SearchBudget& budget) {
    const double theta = omega.theta.radians;
    if (!(theta > 0.0 && theta <= kPi / 4.0 + 1e-12))
        throw std::invalid_argument("extremal_disc_search: theta must lie in (0, pi/4]");
    if (budget.angles < 1 || budget.grid < 1 || budget.rounds < 0)
        throw std::invalid_argument("extremal_disc_search: bad budget");

    DiscrepancyResult result;
    result.mode = mode;
    result.meta.resolution = budget.grid;

    double best = -1.0;
    RotRect best_rect;
    const auto consider = [&](const RotRect& rect) {
        if (rect.half_u <= 0.0 || rect.half_v <= 0.0) return;
        if (rect.half_u >= 0.5 || rect.half_v >= 0.5) return;
        const double v = local_disc(P, rect, mode);
        ++result.meta.evaluations;
        if (v > best) {
            best = v;
            best_rect = rect;
        }
    };

    const double n_pts = static_cast<double>(P.size());

    // Trivial floor: squares of area 1/(4N) placed fully inside the unit
    // square give |count - 1/4| >= 1/4 regardless of the point set.
    if (budget.trivial_seed) {
        const double r = 0.25 / std::sqrt(n_pts);
        const int k = std::clamp(static_cast<int>(std::floor(0.5 / r)), 1, 8);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) {
                const double cx = r + (i + 0.5) * (1.0 - 2.0 * r) / k;
                const double cy = r + (j + 0.5) * (1.0 - 2.0 * r) / k;
                consider({{cx, cy}, r, r, Angle{0.0}});
            }
    }

    std::vector<double> angles;
    if (budget.angles == 1) {
        angles.push_back(0.0);
    } else {
        for (int i = 0; i < budget.angles; ++i)
            angles.push_back(theta * (2.0 * i / (budget.angles - 1) - 1.0));
    }
    for (double a : detail::critical_angles(P, theta, static_cast<std::size_t>(budget.angles)))
        if (std::none_of(angles.begin(), angles.end(),
                         [a](double b) { return std::fabs(a - b) < 1e-12; }))
            angles.push_back(a);

    const int G = budget.grid;
    const int Ge = std::max(3, G / 2);
    const double e_lo = std::clamp(0.25 / std::sqrt(n_pts), 5e-4, 0.2);
    const double e_hi = 0.45;
    std::vector<double> extents(Ge);
    for (int t = 0; t < Ge; ++t)
        extents[t] = e_lo * std::pow(e_hi / e_lo, Ge == 1 ? 0.0 : double(t) / (Ge - 1));

    // Point-centered candidates: maxima pin rectangle interiors to points,
    // and a point-centered incumbent survives extent shrinking in refinement.
    const std::size_t point_seeds = std::min<std::size_t>(P.size(), 64);
    const std::size_t angle_seeds = std::min<std::size_t>(angles.size(), 8);
    for (std::size_t pi = 0; pi < point_seeds; ++pi)
        for (std::size_t ai = 0; ai < angle_seeds; ++ai)
            for (double hu : extents)
                for (double hv : extents)
                    consider({P.points[pi], hu, hv, Angle{angles[ai]}});

    for (double ang : angles)
        for (int i = 0; i < G; ++i)
            for (int j = 0; j < G; ++j)
                for (double hu : extents)
                    for (double hv : extents)
                        consider({{(i + 0.5) / G, (j + 0.5) / G}, hu, hv, Angle{ang}});

    // Refinement: re-sweep a 3^5 product grid around the incumbent with the
    // cell halved each round (extent moves are multiplicative). The center
    // step follows the incumbent extent so shrinking rectangles can keep a
    // boundary point inside.
    double dc = 0.5 / G;
    double da = budget.angles > 1 ? theta / (budget.angles - 1) : theta / 4.0;
    double fe = 2.0;
    for (int round = 0; round < budget.rounds; ++round) {
        const RotRect base = best_rect;
        const double step = std::max(dc, 0.4 * std::max(base.half_u, base.half_v));
        for (int ic = -1; ic <= 1; ++ic)
            for (int jc = -1; jc <= 1; ++jc)
                for (int iu = -1; iu <= 1; ++iu)
                    for (int iv = -1; iv <= 1; ++iv)
                        for (int ia = -1; ia <= 1; ++ia) {
                            RotRect cand = base;
                            cand.center.x += ic * step;
                            cand.center.y += jc * step;
                            cand.half_u = std::clamp(cand.half_u * std::pow(fe, iu), 1e-5, 0.499999);
                            cand.half_v = std::clamp(cand.half_v * std::pow(fe, iv), 1e-5, 0.499999);
                            cand.angle.radians =
                                std::clamp(cand.angle.radians + ia * da, -theta, theta);
                            if (mode == DiscMode::periodic) {
                                cand.center = torus_wrap(cand.center);
                            } else {
                                cand.center.x = std::clamp(cand.center.x, 0.0, 1.0);
                                cand.center.y = std::clamp(cand.center.y, 0.0, 1.0);
                            }
                            consider(cand);
                        }
        dc *= 0.5;
        da *= 0.5;
        fe = std::sqrt(fe);
    }

    result.value = best;
    result.argmax = best_rect;
    return result;
}

/// Truncated Fourier-series value of the periodic L^2(dq) discrepancy of the
/// square with half-side r and angle nu:
///   sum_{0 < |m|_inf <= trunc} |1hat_{r,nu}(m)|^2 |mu_hat(m)|^2.
/// Conjugate symmetry m <-> -m halves the work.
inline double l2_disc_fourier(const PointSet& P, double r, Angle nu, int trunc,
                              unsigned workers = 0) {
    if (!(r > 0.0 && r < 0.5))
        throw std::invalid_argument("l2_disc_fourier: r must lie in (0, 1/2)");
    if (trunc < 1) throw std::invalid_argument("l2_disc_fourier: trunc must be >= 1");

    const RotRect square{{0.0, 0.0}, r, r, nu};
    std::vector<Mode> half;
    half.reserve(static_cast<std::size_t>(trunc) * (2 * trunc + 1) + trunc);
    for (int m1 = 0; m1 <= trunc; ++m1) {
        const int lo = (m1 == 0) ? 1 : -trunc;
        for (int m2 = lo; m2 <= trunc; ++m2) half.push_back({m1, m2});
    }
    std::vector<double> terms(half.size());
    parallel_for(
        half.size(),
        [&](std::size_t i) {
            const Mode m = half[i];
            const double ft =
                indicator_ft(square, {static_cast<double>(m.first), static_cast<double>(m.second)});
            terms[i] = ft * ft * exp_sum_sq(P, m);
        },
        workers);
    NeumaierSum acc;
    for (double t : terms) acc.add(t);
    return 2.0 * acc.value();
}

/// Heuristic upper estimate of the truncation tail of l2_disc_fourier: the
/// 1-D Parseval tail of the square decays like 1/trunc and |mu_hat|^2 <= N^2.
inline double l2_fourier_tail_estimate(std::size_t n_points, double r, int trunc) {
    const double n = static_cast<double>(n_points);
    return n * n * 8.0 * r / (kPi * kPi * static_cast<double>(trunc));
}

/// Midpoint-rule oracle for the same quantity: int_{T^2} D(P, S(q,r,nu))^2 dq
/// over a grid x grid mesh of centers with exact periodic counting.
inline double l2_disc_quadrature(const PointSet& P, double r, Angle nu, int grid) {
    if (!(r > 0.0 && r < 0.5))
        throw std::invalid_argument("l2_disc_quadrature: r must lie in (0, 1/2)");
    if (grid < 64) throw std::invalid_argument("l2_disc_quadrature: grid must be >= 64");

    // rotate(w + z, -nu) = rotate(w, -nu) + rotate(z, -nu): rotate the offset
    // once per (point, center) and add precomputed rotated translates.
    std::array<Vec2, 9> shifts;
    {
        int k = 0;
        for (int zx = -1; zx <= 1; ++zx)
            for (int zy = -1; zy <= 1; ++zy)
                shifts[k++] = rotate_vec({static_cast<double>(zx), static_cast<double>(zy)},
                                         Angle{-nu.radians});
    }
    const double area = 4.0 * r * r;
    const double n_pts = static_cast<double>(P.size());
    const Angle back{-nu.radians};
    NeumaierSum acc;
    for (int i = 0; i < grid; ++i) {
        const double qx = (i + 0.5) / grid;
        for (int j = 0; j < grid; ++j) {
            const double qy = (j + 0.5) / grid;
            std::size_t count = 0;
            for (const Vec2& p : P.points) {
                const Vec2 w = torus_wrap({p.x - qx, p.y - qy});
                const Vec2 d = rotate_vec(w, back);
                for (const Vec2& s : shifts) {
                    if (std::fabs(d.x + s.x) <= r && std::fabs(d.y + s.y) <= r) {
                        ++count;
                        break;
                    }
                }
            }
            const double dloc = static_cast<double>(count) - n_pts * area;
            acc.add(dloc * dloc);
        }
    }
    return acc.value() / (static_cast<double>(grid) * grid);
}

/// Dilation/rotation-averaged L^2 discrepancy by exchanging sum and average:
///   sum_{0 < |m|_inf <= trunc} phi_{R,theta}(m) |mu_hat(m)|^2.
/// phi is evaluated on the closed first quadrant (it is even in each
/// coordinate) and every term is nonnegative.
inline double avg_l2_disc(const PointSet& P, Angle theta, double R, int trunc,
                          const QuadSpec& q = {}, unsigned workers = 0) {
    if (!(R > 0.0 && R < 1.0)) throw std::invalid_argument("avg_l2_disc: R must lie in (0,1)");
    if (trunc < 1) throw std::invalid_argument("avg_l2_disc: trunc must be >= 1");

    const std::size_t side = static_cast<std::size_t>(trunc) + 1;
    std::vector<double> phi_quadrant(side * side, 0.0);
    std::vector<Mode> quadrant;
    quadrant.reserve(side * side - 1);
    for (int m1 = 0; m1 <= trunc; ++m1)
        for (int m2 = (m1 == 0) ? 1 : 0; m2 <= trunc; ++m2) quadrant.push_back({m1, m2});
    parallel_for(
        quadrant.size(),
        [&](std::size_t i) {
            const Mode m = quadrant[i];
            phi_quadrant[static_cast<std::size_t>(m.first) * side + m.second] = phi_avg(
                R, theta, {static_cast<double>(m.first), static_cast<double>(m.second)}, q);
        },
        workers);

    std::vector<Mode> half;
    half.reserve(static_cast<std::size_t>(trunc) * (2 * trunc + 1) + trunc);
    for (int m1 = 0; m1 <= trunc; ++m1) {
        const int lo = (m1 == 0) ? 1 : -trunc;
        for (int m2 = lo; m2 <= trunc; ++m2) half.push_back({m1, m2});
    }
    std::vector<double> terms(half.size());
    parallel_for(
        half.size(),
        [&](std::size_t i) {
            const Mode m = half[i];
            const double phi =
                phi_quadrant[static_cast<std::size_t>(m.first) * side + std::abs(m.second)];
            terms[i] = phi * exp_sum_sq(P, m);
        },
        workers);
    NeumaierSum acc;
    for (double t : terms) acc.add(t);
    return 2.0 * acc.value();
}

}  // namespace disclab
