#pragma once

// Closed-form Fourier transforms of rotated rectangles, exponential sums of
// point sets, and the rotation/dilation-averaged decay functional
//
//   phi_{R,theta}(xi) = 1/(R*theta) * int_{R/2}^{R} int_{-theta}^{theta}
//                         |1hat_{r,nu}(xi)|^2 dnu dr.
//
// The transform of the square rotated by nu at frequency xi equals the
// axis-aligned transform at the back-rotated frequency, so the integrand
// factorizes as F(a;r)^2 F(b;r)^2 with (a,b) = rotate(xi, -nu) and
// F(t;r) = sin(2*pi*t*r)/(pi*t). The r-integral of that product reduces to
// cosine moments int r^k cos(c r) dr and is evaluated in closed form; only
// the nu-average needs quadrature. Panel counts grow linearly with
// |xi|*R*theta (the integrand oscillates that often across the window) and
// every evaluation is re-checked by panel doubling.

#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "disclab/geometry.hpp"
#include "disclab/parallel.hpp"
#include "disclab/pointsets.hpp"

namespace disclab {

/// Lattice frequency m = (m1, m2) in Z^2.
using Mode = std::pair<int, int>;

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Quadrature resolution request. panels_r / panels_nu are floors; the
/// oscillation rule raises them with |xi|. rel_tol is enforced by comparing
/// against a once-doubled panel count.
struct QuadSpec {
    int panels_r = 4;
    int panels_nu = 4;
    int nodes_per_panel = 8;
    double rel_tol = 1e-6;
};

/// Squared-modulus table of the exponential sum at selected lattice modes.
struct ExpSumTable {
    std::map<Mode, double> entries;
    std::size_t n_points = 0;
};

namespace detail {

struct GaussRule {
    std::vector<double> nodes;    // on (-1, 1)
    std::vector<double> weights;  // sum to 2
};

// Gauss-Legendre nodes as Newton-refined roots of P_n.
inline GaussRule make_gauss_rule(int n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        rule.nodes[n - 1 - i] = x;
        rule.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

inline const GaussRule& gauss_rule(int n) {
    static std::map<int, GaussRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make_gauss_rule(n)).first;
    return it->second;
}

// int_lo^hi r^k dr
inline double power_integral(int k, double lo, double hi) {
    return (std::pow(hi, k + 1) - std::pow(lo, k + 1)) / (k + 1);
}

// int_lo^hi r^k cos(c r) dr, stable for every c. Small |c|*hi goes through
// the Taylor series of cos; otherwise the classic integration-by-parts
// ladder over (K_j, L_j) = int r^j (cos, sin)(c r) dr.
inline double cos_moment(int k, double c, double lo, double hi) {
    c = std::fabs(c);  // cos is even
    if (c * hi < 0.5) {
        double acc = 0.0;
        double coef = 1.0;  // (-1)^j c^(2j) / (2j)!
        for (int j = 0; j < 40; ++j) {
            const double term = coef * power_integral(k + 2 * j, lo, hi);
            acc += term;
            if (std::fabs(term) < 1e-18 * std::fabs(acc) + 1e-300) break;
            coef *= -c * c / ((2.0 * j + 1.0) * (2.0 * j + 2.0));
        }
        return acc;
    }
    const double slo = std::sin(c * lo), shi = std::sin(c * hi);
    const double clo = std::cos(c * lo), chi = std::cos(c * hi);
    double K = (shi - slo) / c;          // K_0
    double L = (clo - chi) / c;          // L_0
    double plo = 1.0, phi_pow = 1.0;     // lo^j, hi^j
    for (int j = 1; j <= k; ++j) {
        plo *= lo;
        phi_pow *= hi;
        const double Kj = (phi_pow * shi - plo * slo) / c - (j / c) * L;
        const double Lj = (plo * clo - phi_pow * chi) / c + (j / c) * K;
        K = Kj;
        L = Lj;
    }
    return K;
}

// int_lo^hi r^n sinc^2(A r) dr for A*hi away from 0 (callers handle small A).
inline double sinc_sq_moment(int n, double A, double lo, double hi) {
    return (power_integral(n - 2, lo, hi) - cos_moment(n - 2, 2.0 * A, lo, hi)) /
           (2.0 * A * A);
}

// int_lo^hi F(a;r)^2 F(b;r)^2 dr with F(t;r) = sin(2 pi t r)/(pi t)
//                                            = 2 r sinc(2 pi t r).
//
// Three regimes, switched on u = 2*pi*|t|*hi per factor:
//   u < 0.05 for both: product of sinc^2 Taylor series, polynomial integral;
//   u < 0.05 for one:  series for that factor against exact sinc^2 moments;
//   otherwise:         expand sin^2 sin^2 into four cosine moments.
// The thresholds keep both series truncation (~u^6/315) and the cancellation
// in the cosine-moment route (~eps/u^2) below 1e-10 relative.
inline double radial_product_integral(double a, double b, double lo, double hi) {
    double A = kTwoPi * std::fabs(a);
    double B = kTwoPi * std::fabs(b);
    if (A < B) std::swap(A, B);
    const double cutoff = 0.05 / hi;

    double result;
    if (B < cutoff) {
        const double B2 = B * B;
        if (A < cutoff) {
            const double A2 = A * A;
            result = 16.0 * (power_integral(4, lo, hi) -
                             (A2 + B2) / 3.0 * power_integral(6, lo, hi) +
                             ((2.0 / 45.0) * (A2 * A2 + B2 * B2) + A2 * B2 / 9.0) *
                                 power_integral(8, lo, hi));
        } else {
            result = 16.0 * (sinc_sq_moment(4, A, lo, hi) -
                             B2 / 3.0 * sinc_sq_moment(6, A, lo, hi) +
                             (2.0 / 45.0) * B2 * B2 * sinc_sq_moment(8, A, lo, hi));
        }
    } else {
        const double quarter =
            0.25 * ((hi - lo) - cos_moment(0, 2.0 * A, lo, hi) -
                    cos_moment(0, 2.0 * B, lo, hi) +
                    0.5 * (cos_moment(0, 2.0 * (A - B), lo, hi) +
                           cos_moment(0, 2.0 * (A + B), lo, hi)));
        result = 16.0 * quarter / (A * A * B * B);
    }
    return std::max(0.0, result);
}

inline double sinc(double u) {
    if (std::fabs(u) < 1e-4) {
        const double u2 = u * u;
        return 1.0 - u2 / 6.0 + u2 * u2 / 120.0;
    }
    return std::sin(u) / u;
}

}  // namespace detail

/// Fourier transform of the origin-centered rectangle at frequency xi under
/// the e^{-2 pi i x.xi} convention; the center field is ignored (a center
/// shift only contributes a unimodular phase and downstream consumers use
/// squared magnitudes). Separable form F(t;r) = sin(2 pi t r)/(pi t) with the
/// frequency back-rotated by the rectangle angle.
inline double indicator_ft(const RotRect& rect, const Vec2& xi) {
    const Vec2 w = rotate_vec(xi, Angle{-rect.angle.radians});
    const double fu = 2.0 * rect.half_u * detail::sinc(kTwoPi * w.x * rect.half_u);
    const double fv = 2.0 * rect.half_v * detail::sinc(kTwoPi * w.y * rect.half_v);
    return fu * fv;
}

/// |sum_j e^{2 pi i m.p_j}|^2, accumulated with compensated summation in
/// point order. m = (0,0) is rejected: the discrepancy measure has no DC term.
inline double exp_sum_sq(const PointSet& P, Mode m) {
    if (m.first == 0 && m.second == 0)
        throw std::invalid_argument("exp_sum_sq: mode (0,0) is excluded");
    NeumaierSum re, im;
    for (const Vec2& p : P.points) {
        const double phase = kTwoPi * (m.first * p.x + m.second * p.y);
        re.add(std::cos(phase));
        im.add(std::sin(phase));
    }
    const double r = re.value();
    const double i = im.value();
    return r * r + i * i;
}

/// Batch exp_sum_sq over an explicit mode list; each entry is bit-identical
/// to the per-mode call.
inline ExpSumTable build_exp_sum_table(const PointSet& P, const std::vector<Mode>& modes,
                                       unsigned workers = 0) {
    for (const Mode& m : modes)
        if (m.first == 0 && m.second == 0)
            throw std::invalid_argument("build_exp_sum_table: mode (0,0) is excluded");
    std::vector<double> values(modes.size());
    parallel_for(
        modes.size(), [&](std::size_t i) { values[i] = exp_sum_sq(P, modes[i]); },
        workers);
    ExpSumTable table;
    table.n_points = P.size();
    for (std::size_t i = 0; i < modes.size(); ++i) table.entries[modes[i]] = values[i];
    return table;
}

/// Averaged squared decay phi_{R,theta}(xi). The radial factor is integrated
/// in closed form; the rotation average uses composite Gauss-Legendre with
/// panels_nu >= max(q.panels_nu, 4*ceil(2*|xi|*R*theta)) and is accepted only
/// if doubling the panel count moves the value by at most q.rel_tol.
inline double phi_avg(double R, Angle theta, const Vec2& xi, const QuadSpec& q = {}) {
    const double th = theta.radians;
    if (!(R > 0.0)) throw std::invalid_argument("phi_avg: R must be positive");
    if (!(th > 0.0 && th <= kPi / 4.0 + 1e-12))
        throw std::invalid_argument("phi_avg: theta must lie in (0, pi/4]");
    if (q.nodes_per_panel < 4)
        throw std::invalid_argument("phi_avg: nodes_per_panel must be >= 4");

    const double mag = xi.norm();
    const int osc = static_cast<int>(std::ceil(2.0 * mag * R * th));
    const int base_panels = std::max(q.panels_nu, 4 * std::max(osc, 1));
    const detail::GaussRule& rule = detail::gauss_rule(q.nodes_per_panel);

    const auto eval = [&](int panels) {
        const double width = 2.0 * th / panels;
        NeumaierSum acc;
        for (int p = 0; p < panels; ++p) {
            const double mid = -th + (p + 0.5) * width;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                const double nu = mid + 0.5 * width * rule.nodes[i];
                const Vec2 w = rotate_vec(xi, Angle{-nu});
                const double inner =
                    detail::radial_product_integral(w.x, w.y, 0.5 * R, R);
                acc.add(rule.weights[i] * 0.5 * width * inner);
            }
        }
        return acc.value() / (R * th);
    };

    const double coarse = eval(base_panels);
    const double fine = eval(2 * base_panels);
    const double scale = std::max({std::fabs(coarse), std::fabs(fine), 1e-300});
    if (std::fabs(fine - coarse) > q.rel_tol * scale)
        throw QuadratureError("phi_avg did not converge at rel_tol for |xi|=" +
                              std::to_string(mag));
    return std::max(0.0, fine);
}

/// phi * theta * |xi|^3 / R: bounded below by a positive constant on the
/// sector arg(xi) in (-theta/2, theta/2) once |xi| >= c'/(theta R).
inline double decay_ratio_sector(double R, Angle theta, const Vec2& xi,
                                 const QuadSpec& q = {}) {
    const double mag = xi.norm();
    return phi_avg(R, theta, xi, q) * theta.radians * mag * mag * mag / R;
}

/// phi * |xi|^4: bounded below by a positive constant for every direction
/// once |xi| >= c''/R.
inline double decay_ratio_global(double R, Angle theta, const Vec2& xi,
                                 const QuadSpec& q = {}) {
    const double mag = xi.norm();
    return phi_avg(R, theta, xi, q) * mag * mag * mag * mag;
}

/// phi_{aR,pi/4}(xi) / (a * phi_{R,pi/4}(xi)): the linear-growth factor of
/// the all-rotations amplification step.
inline double amplification_ratio(double a, double R, const Vec2& xi,
                                  const QuadSpec& q = {}) {
    if (!(a >= 1.0)) throw std::invalid_argument("amplification_ratio: a must be >= 1");
    const Angle quarter{kPi / 4.0};
    return phi_avg(a * R, quarter, xi, q) / (a * phi_avg(R, quarter, xi, q));
}

/// int_1^2 sin^2(C t) dt = 1/2 - (sin 4C - sin 2C)/(4C); at least 1/4 once
/// C >= 4, the dilation-averaging floor.
inline double sin_sq_dilation_avg(double C) {
    if (!(C > 0.0)) throw std::invalid_argument("sin_sq_dilation_avg: C must be > 0");
    return 0.5 - (std::sin(4.0 * C) - std::sin(2.0 * C)) / (4.0 * C);
}

}  // namespace disclab
