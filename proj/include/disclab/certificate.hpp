#pragma once

// Sector covers in frequency space, the counting function Phi, Montgomery
// sums, and per-point-set lower-bound certificates for the averaged L^2
// directional discrepancy.
//
// The certificate sums phi(m)*|mu_hat(m)|^2 over the lattice points of the
// cover: every term of the full decomposition is nonnegative, so any partial
// sum is a rigorous lower bound (up to quadrature tolerance). The classical
// minorant rho*Phi(m) is kept alongside as a diagnostic; it needs the
// calibrated constant, the phi-weighted sum does not.

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "disclab/constants.hpp"
#include "disclab/discrepancy.hpp"
#include "disclab/fourier.hpp"
#include "disclab/geometry.hpp"
#include "disclab/parallel.hpp"
#include "disclab/pointsets.hpp"

namespace disclab {

/// Fixed dilation scale of certificates; the averaged decay is used with
/// R = 1/16 throughout.
inline constexpr double kCertificateR = 1.0 / 16.0;

struct InfeasibleCoverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Family of 2M+1 frequency rectangles R_j with dimensions X x Y, rotation
/// step psi = Y/X, approximating the sector of arguments (-theta/2, theta/2).
struct SectorCover {
    Angle theta;
    double kappa = 1.0;
    std::size_t n_target = 0;

    double X = 0.0;  // kappa^{3/5} n^{3/5}
    double Y = 0.0;  // kappa^{2/5} n^{2/5}
    double psi = 0.0;
    int M = 0;

    bool cond_aspect = false;  // theta*X >= c*Y
    bool cond_scale = false;   // theta*Y >= c
    bool degenerate = false;   // M == 0: single-rectangle cover

    std::vector<RotRect> rects;                         // j = -M .. M
    std::vector<std::pair<double, double>> rect_axes;   // (cos, sin) per rect

    /// Infeasible covers break the aspect or scale condition and void the
    /// construction; a degenerate cover (M = 0) is merely a warning.
    bool feasible() const { return cond_aspect && cond_scale; }

    double bounding_radius() const { return 0.5 * std::hypot(X, Y); }
};

inline SectorCover build_cover(std::size_t n, Angle theta, double kappa,
                               const FrozenConstants& fc = frozen_constants()) {
    const double th = theta.radians;
    if (n < 1) throw std::invalid_argument("build_cover: n must be >= 1");
    if (!(th > 0.0 && th < kPi / 4.0 + 1e-12))
        throw std::invalid_argument("build_cover: theta must lie in (0, pi/4)");
    if (!(kappa > 0.0)) throw std::invalid_argument("build_cover: kappa must be > 0");

    SectorCover cover;
    cover.theta = theta;
    cover.kappa = kappa;
    cover.n_target = n;
    const double kn = kappa * static_cast<double>(n);
    cover.X = std::pow(kn, 0.6);
    cover.Y = std::pow(kn, 0.4);
    cover.psi = cover.Y / cover.X;
    cover.M = static_cast<int>(std::floor(th / (2.0 * cover.psi)));
    cover.cond_aspect = th * cover.X >= fc.feasibility_aspect * cover.Y;
    cover.cond_scale = th * cover.Y >= fc.feasibility_scale;
    cover.degenerate = cover.M == 0;
    cover.rects.reserve(2 * cover.M + 1);
    for (int j = -cover.M; j <= cover.M; ++j) {
        const double ang = j * cover.psi;
        cover.rects.push_back({{0.0, 0.0}, 0.5 * cover.X, 0.5 * cover.Y, Angle{ang}});
        cover.rect_axes.emplace_back(std::cos(ang), std::sin(ang));
    }
    return cover;
}

/// Phi(m): how many cover rectangles contain the lattice point (closed
/// membership, same rotation test as contains()).
inline int cover_count(const SectorCover& cover, Mode m) {
    const double mx = static_cast<double>(m.first);
    const double my = static_cast<double>(m.second);
    const double hu = 0.5 * cover.X;
    const double hv = 0.5 * cover.Y;
    int count = 0;
    for (const auto& [c, s] : cover.rect_axes) {
        const double u = mx * c + my * s;
        const double v = -mx * s + my * c;
        if (std::fabs(u) <= hu && std::fabs(v) <= hv) ++count;
    }
    return count;
}

/// All lattice points of the cover union with their multiplicities, in
/// row-major order. Intended for certificate-scale parameters; the row scan
/// covers the bounding box of the union.
inline std::vector<std::pair<Mode, int>> enumerate_cover_lattice(const SectorCover& cover,
                                                                 unsigned workers = 0) {
    const int B = static_cast<int>(std::ceil(cover.bounding_radius()));
    const std::size_t rows = static_cast<std::size_t>(2 * B + 1);
    std::vector<std::vector<std::pair<Mode, int>>> per_row(rows);
    parallel_for(
        rows,
        [&](std::size_t row) {
            const int m1 = static_cast<int>(row) - B;
            auto& out = per_row[row];
            for (int m2 = -B; m2 <= B; ++m2) {
                const int phi = cover_count(cover, {m1, m2});
                if (phi > 0) out.push_back({{m1, m2}, phi});
            }
        },
        workers);
    std::vector<std::pair<Mode, int>> all;
    std::size_t total = 0;
    for (const auto& r : per_row) total += r.size();
    all.reserve(total);
    for (const auto& r : per_row) all.insert(all.end(), r.begin(), r.end());
    return all;
}

/// Empirical maxima of the two normalized counting-function bounds:
/// Phi(m)*|m|/X for |m| >= Y and Phi(m)*Y/(theta*X) everywhere.
struct CoverBoundsReport {
    std::size_t lattice_points = 0;
    std::uint64_t phi_total = 0;
    int phi_max = 0;
    double max_phi_norm_far = 0.0;
    double max_phi_norm_all = 0.0;
    bool c1_ok = true;
    bool c2_ok = true;
};

/// Streams over the full bounding box; violations of the frozen constants
/// are reported, not thrown.
inline CoverBoundsReport check_cover_bounds(const SectorCover& cover,
                                            const FrozenConstants& fc = frozen_constants(),
                                            unsigned workers = 0) {
    const int B = static_cast<int>(std::ceil(cover.bounding_radius()));
    const std::size_t rows = static_cast<std::size_t>(2 * B + 1);
    std::vector<CoverBoundsReport> partial(rows);
    parallel_for(
        rows,
        [&](std::size_t row) {
            const int m1 = static_cast<int>(row) - B;
            CoverBoundsReport& rep = partial[row];
            for (int m2 = -B; m2 <= B; ++m2) {
                const int phi = cover_count(cover, {m1, m2});
                if (phi == 0) continue;
                ++rep.lattice_points;
                rep.phi_total += static_cast<std::uint64_t>(phi);
                rep.phi_max = std::max(rep.phi_max, phi);
                const double mag = std::hypot(static_cast<double>(m1), static_cast<double>(m2));
                if (mag >= cover.Y)
                    rep.max_phi_norm_far =
                        std::max(rep.max_phi_norm_far, phi * mag / cover.X);
                rep.max_phi_norm_all =
                    std::max(rep.max_phi_norm_all,
                             phi * cover.Y / (cover.theta.radians * cover.X));
            }
        },
        workers);
    CoverBoundsReport rep;
    for (const auto& p : partial) {
        rep.lattice_points += p.lattice_points;
        rep.phi_total += p.phi_total;
        rep.phi_max = std::max(rep.phi_max, p.phi_max);
        rep.max_phi_norm_far = std::max(rep.max_phi_norm_far, p.max_phi_norm_far);
        rep.max_phi_norm_all = std::max(rep.max_phi_norm_all, p.max_phi_norm_all);
    }
    rep.c1_ok = rep.max_phi_norm_far <= fc.cover_c1;
    rep.c2_ok = rep.phi_max <= fc.cover_c2 * cover.theta.radians * cover.X / cover.Y;
    return rep;
}

/// rho = c * min(1/(theta X^3), 1/(theta X Y^3)); with the balanced X, Y of
/// build_cover the two arguments coincide.
inline double rho(const SectorCover& cover, double c) {
    if (!(c > 0.0)) throw std::invalid_argument("rho: c must be > 0");
    const double th = cover.theta.radians;
    return c * std::min(1.0 / (th * cover.X * cover.X * cover.X),
                        1.0 / (th * cover.X * cover.Y * cover.Y * cover.Y));
}

/// Montgomery sum over the lattice points of a symmetric convex rectangle U
/// outside the ball of radius B_radius.
inline double montgomery_sum(const PointSet& P, const RotRect& U, double B_radius,
                             unsigned workers = 0) {
    assert(std::fabs(U.center.x) < 1e-12 && std::fabs(U.center.y) < 1e-12);
    if (B_radius < 0.0) throw std::invalid_argument("montgomery_sum: B_radius must be >= 0");
    const int B = static_cast<int>(std::ceil(std::hypot(U.half_u, U.half_v)));
    std::vector<Mode> modes;
    for (int m1 = -B; m1 <= B; ++m1)
        for (int m2 = -B; m2 <= B; ++m2) {
            if (std::hypot(static_cast<double>(m1), static_cast<double>(m2)) <= B_radius)
                continue;
            if (m1 == 0 && m2 == 0) continue;
            if (contains(U, {static_cast<double>(m1), static_cast<double>(m2)}))
                modes.push_back({m1, m2});
        }
    std::vector<double> terms(modes.size());
    parallel_for(
        modes.size(), [&](std::size_t i) { terms[i] = exp_sum_sq(P, modes[i]); }, workers);
    NeumaierSum acc;
    for (double t : terms) acc.add(t);
    return acc.value();
}

struct MontgomeryAxisResult {
    double sum = 0.0;
    double bound = 0.0;
    bool holds = false;
};

/// Exact axis-rectangle inequality: sum over |k1| <= X1, |k2| <= X2, k != 0
/// of |mu_hat(k)|^2 is at least N*X1*X2 - N^2, with no free constant.
inline MontgomeryAxisResult montgomery_axis_bound(const PointSet& P, double X1, double X2,
                                                  unsigned workers = 0) {
    if (!(X1 > 0.0 && X2 > 0.0))
        throw std::invalid_argument("montgomery_axis_bound: X1, X2 must be > 0");
    const int k1max = static_cast<int>(std::floor(X1));
    const int k2max = static_cast<int>(std::floor(X2));
    std::vector<Mode> modes;
    modes.reserve(static_cast<std::size_t>(2 * k1max + 1) * (2 * k2max + 1));
    for (int k1 = -k1max; k1 <= k1max; ++k1)
        for (int k2 = -k2max; k2 <= k2max; ++k2)
            if (k1 != 0 || k2 != 0) modes.push_back({k1, k2});
    std::vector<double> terms(modes.size());
    parallel_for(
        modes.size(), [&](std::size_t i) { terms[i] = exp_sum_sq(P, modes[i]); }, workers);
    NeumaierSum acc;
    for (double t : terms) acc.add(t);
    MontgomeryAxisResult res;
    res.sum = acc.value();
    const double n = static_cast<double>(P.size());
    res.bound = n * X1 * X2 - n * n;
    res.holds = res.sum >= res.bound;
    return res;
}

struct MontgomeryRecord {
    double sum = 0.0;
    double bound = 0.0;
    bool holds = false;
};

struct Certificate {
    std::string point_set_label;
    std::size_t n = 0;
    double theta = 0.0;
    double kappa = 0.0;
    double K = 0.0;
    std::size_t mode_count = 0;
    double phi_sum = 0.0;        // the certified lower bound
    double rho_weight = 0.0;     // rho(cover, frozen c)
    double rho_variant = 0.0;    // rho * sum Phi(m) |mu_hat(m)|^2, diagnostic
    std::optional<double> direct_value;  // avg_l2_disc over a window containing the cover
    int direct_trunc = 0;
    MontgomeryRecord montgomery;
    double timing_ms = 0.0;
};

/// Certified lower bound for the dilation/rotation-averaged L^2 discrepancy
/// of P: enumerate S = {m in union R_j, m != 0, |m| >= K} and sum
/// phi_{1/16,theta}(m) |mu_hat(m)|^2 over S. Throws InfeasibleCoverError
/// when the cover construction's side conditions fail.
inline Certificate certified_lower_bound(const PointSet& P, Angle theta, double kappa,
                                         double K, const QuadSpec& q = {},
                                         bool with_direct = false,
                                         const FrozenConstants& fc = frozen_constants(),
                                         unsigned workers = 0) {
    const auto t0 = std::chrono::steady_clock::now();
    const SectorCover cover = build_cover(P.size(), theta, kappa, fc);
    if (!cover.feasible())
        throw InfeasibleCoverError(
            "sector cover infeasible: the construction needs N on the order of "
            "theta^-5 or larger (theta*X >= Y and theta*Y >= 1 fail at n=" +
            std::to_string(P.size()) + ", theta=" + std::to_string(theta.radians) + ")");

    auto lattice = enumerate_cover_lattice(cover, workers);
    std::vector<std::pair<Mode, int>> S;
    S.reserve(lattice.size());
    for (const auto& [m, phi] : lattice) {
        if (m.first == 0 && m.second == 0) continue;
        if (std::hypot(static_cast<double>(m.first), static_cast<double>(m.second)) < K)
            continue;
        S.push_back({m, phi});
    }

    // phi and |mu_hat|^2 are even under m -> -m (bit-exactly along this code
    // path), so both are evaluated on canonical representatives only.
    const auto canonical = [](Mode m) -> Mode {
        if (m.first > 0 || (m.first == 0 && m.second > 0)) return m;
        return {-m.first, -m.second};
    };
    std::map<Mode, std::size_t> canon_index;
    std::vector<Mode> canon_modes;
    for (const auto& [m, phi] : S) {
        const Mode c = canonical(m);
        if (canon_index.emplace(c, canon_modes.size()).second) canon_modes.push_back(c);
    }
    std::vector<double> phi_vals(canon_modes.size());
    std::vector<double> exp_vals(canon_modes.size());
    parallel_for(
        canon_modes.size(),
        [&](std::size_t i) {
            const Mode m = canon_modes[i];
            const Vec2 xi{static_cast<double>(m.first), static_cast<double>(m.second)};
            phi_vals[i] = phi_avg(kCertificateR, theta, xi, q);
            exp_vals[i] = exp_sum_sq(P, m);
        },
        workers);

    Certificate cert;
    cert.point_set_label = P.label;
    cert.n = P.size();
    cert.theta = theta.radians;
    cert.kappa = kappa;
    cert.K = K;
    cert.mode_count = S.size();
    cert.rho_weight = rho(cover, fc.rho_c);

    NeumaierSum phi_acc, rho_acc;
    for (const auto& [m, phi_count] : S) {
        const std::size_t idx = canon_index.at(canonical(m));
        phi_acc.add(phi_vals[idx] * exp_vals[idx]);
        rho_acc.add(static_cast<double>(phi_count) * exp_vals[idx]);
    }
    cert.phi_sum = phi_acc.value();
    cert.rho_variant = cert.rho_weight * rho_acc.value();

    const RotRect& axis_rect = cover.rects[static_cast<std::size_t>(cover.M)];
    cert.montgomery.sum = montgomery_sum(P, axis_rect, K, workers);
    cert.montgomery.bound = static_cast<double>(P.size()) * (cover.X * cover.Y) / 4.0 -
                            fc.montgomery_c * static_cast<double>(P.size()) *
                                static_cast<double>(P.size());
    cert.montgomery.holds = cert.montgomery.sum >= cert.montgomery.bound;

    if (with_direct) {
        cert.direct_trunc = static_cast<int>(std::ceil(cover.X));
        cert.direct_value = avg_l2_disc(P, theta, kCertificateR, cert.direct_trunc, q, workers);
        // the certified sum covers a subset of the direct window's
        // nonnegative terms; anything beyond tolerance is a bug
        if (cert.phi_sum > *cert.direct_value * 1.02)
            throw std::logic_error("certificate exceeds the direct average: phi_sum=" +
                                   std::to_string(cert.phi_sum) + " direct=" +
                                   std::to_string(*cert.direct_value));
    }

    cert.timing_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
    return cert;
}

/// Least-squares slope of log(value) against log(n).
inline double scaling_exponent(const std::vector<std::pair<double, double>>& series) {
    if (series.size() < 3)
        throw std::invalid_argument("scaling_exponent: need at least 3 pairs");
    for (const auto& [n, v] : series)
        if (!(n > 0.0) || !(v > 0.0))
            throw std::invalid_argument("scaling_exponent: entries must be positive");
    double sx = 0.0, sy = 0.0;
    for (const auto& [n, v] : series) {
        sx += std::log(n);
        sy += std::log(v);
    }
    const double mx = sx / static_cast<double>(series.size());
    const double my = sy / static_cast<double>(series.size());
    double num = 0.0, den = 0.0;
    for (const auto& [n, v] : series) {
        const double dx = std::log(n) - mx;
        num += dx * (std::log(v) - my);
        den += dx * dx;
    }
    return num / den;
}

}  // namespace disclab
