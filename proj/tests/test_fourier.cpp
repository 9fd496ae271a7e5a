#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "disclab/fourier.hpp"
#include "oracles.hpp"

using namespace disclab;

TEST_CASE("indicator_ft closed form at axis frequencies") {
    const RotRect sq{{0.0, 0.0}, 0.25, 0.25, Angle{0.0}};
    CHECK(indicator_ft(sq, {0.0, 0.0}) == Catch::Approx(0.25));
    CHECK(std::fabs(indicator_ft(sq, {2.0, 0.0})) < 1e-15);
    CHECK(indicator_ft(sq, {1.0, 0.0}) == Catch::Approx(0.5 / kPi).epsilon(1e-14));
}

TEST_CASE("indicator_ft rotation covariance is exact") {
    const RotRect rot{{0.0, 0.0}, 0.25, 0.25, Angle{kPi / 6.0}};
    const RotRect axis{{0.0, 0.0}, 0.25, 0.25, Angle{0.0}};
    const Vec2 xi{1.0, 1.0};
    const Vec2 back = rotate_vec(xi, Angle{-kPi / 6.0});
    CHECK(indicator_ft(rot, xi) == indicator_ft(axis, back));
}

TEST_CASE("indicator_ft agrees with the defining integral") {
    // tensor-product quadrature of the rotated-square integral, >= 10^4 nodes
    const RotRect rot{{0.0, 0.0}, 0.25, 0.25, Angle{kPi / 6.0}};
    const double brute = oracle::indicator_ft_quadrature(rot, {1.0, 1.0}, 128);
    CHECK(indicator_ft(rot, {1.0, 1.0}) == Catch::Approx(brute).margin(1e-6));

    const RotRect wide{{0.0, 0.0}, 0.3, 0.125, Angle{-0.4}};
    for (const Vec2 xi : {Vec2{3.0, -2.0}, Vec2{0.0, 5.0}, Vec2{7.5, 0.25}}) {
        const double b = oracle::indicator_ft_quadrature(wide, xi, 256);
        CHECK(indicator_ft(wide, xi) == Catch::Approx(b).margin(2e-6));
    }
}

TEST_CASE("torus Parseval: truncated sum approaches the square area") {
    for (const double r : {0.25, 0.125}) {
        for (const double ang : {0.0, 0.2}) {
            const RotRect sq{{0.0, 0.0}, r, r, Angle{ang}};
            NeumaierSum sum;
            const int T = 512;
            for (int m1 = -T; m1 <= T; ++m1)
                for (int m2 = -T; m2 <= T; ++m2) {
                    const double ft =
                        indicator_ft(sq, {static_cast<double>(m1), static_cast<double>(m2)});
                    sum.add(ft * ft);
                }
            const double area = 4.0 * r * r;
            CHECK(sum.value() == Catch::Approx(area).epsilon(0.01));
        }
    }
}

TEST_CASE("exp_sum_sq small cases and symmetry") {
    PointSet P;
    P.points = {{0.0, 0.0}, {0.5, 0.5}};
    CHECK(exp_sum_sq(P, {1, 1}) == Catch::Approx(4.0).margin(1e-12));
    CHECK(exp_sum_sq(P, {1, 0}) == Catch::Approx(0.0).margin(1e-12));
    CHECK_THROWS_AS(exp_sum_sq(P, {0, 0}), std::invalid_argument);

    const PointSet R = gen_random(33, 5);
    for (const Mode m : {Mode{3, -2}, Mode{7, 0}, Mode{-5, 11}}) {
        const double v = exp_sum_sq(R, m);
        CHECK(v == exp_sum_sq(R, {-m.first, -m.second}));
        CHECK(v >= 0.0);
        CHECK(v <= 33.0 * 33.0 + 1e-9);
    }
    // coincident phases reach N^2
    PointSet C;
    C.points = {{0.25, 0.25}, {0.25, 0.25}, {0.25, 0.25}};
    CHECK(exp_sum_sq(C, {4, 4}) == Catch::Approx(9.0).epsilon(1e-12));
}

TEST_CASE("build_exp_sum_table matches per-mode values bit-for-bit") {
    const PointSet P = gen_random(17, 99);
    const std::vector<Mode> modes{{1, 0}, {0, 1}, {-3, 2}, {5, 5}, {2, -7}};
    const ExpSumTable table = build_exp_sum_table(P, modes);
    REQUIRE(table.entries.size() == modes.size());
    CHECK(table.n_points == 17);
    for (const Mode& m : modes) CHECK(table.entries.at(m) == exp_sum_sq(P, m));
    CHECK_THROWS_AS(build_exp_sum_table(P, {{0, 0}}), std::invalid_argument);
}

TEST_CASE("radial closed form matches Simpson across all regimes") {
    const double lo = 1.0 / 32.0, hi = 1.0 / 16.0;
    // (a, b) spanning: both tiny, one tiny, near the series/cosine switch,
    // both oscillatory, nearly equal (the A-B degeneracy)
    const double cutoff = 0.05 / (kTwoPi * hi);
    const std::pair<double, double> cases[] = {
        {0.0, 0.0},       {1e-9, 2e-9},     {5.0, 1e-8},        {40.0, 0.0},
        {40.0, cutoff * 0.99}, {40.0, cutoff * 1.01}, {64.0, 64.0},  {64.0, 63.999999},
        {300.0, 7.0},     {1000.0, 500.0},  {2.0, 1.0},         {cutoff * 1.5, cutoff * 1.4}};
    for (const auto& [a, b] : cases) {
        const double fast = detail::radial_product_integral(a, b, lo, hi);
        const double mag = std::max(1.0, std::max(a, b) * hi);
        const double slow =
            oracle::radial_product_simpson(a, b, lo, hi, 512 * static_cast<int>(mag));
        const double scale = std::max({std::fabs(slow), 1e-30});
        INFO("a=" << a << " b=" << b);
        CHECK(std::fabs(fast - slow) / scale < 1e-7);
    }
}

TEST_CASE("phi_avg analytic anchor at xi = 0") {
    for (const double R : {1.0 / 16.0, 0.25}) {
        for (const double th : {kPi / 16.0, kPi / 4.0}) {
            const double v = phi_avg(R, Angle{th}, {0.0, 0.0});
            CHECK(v == Catch::Approx(6.2 * std::pow(R, 4)).epsilon(1e-6));
        }
    }
}

TEST_CASE("phi_avg matches the high-resolution trapezoid oracle") {
    const double R = 1.0 / 16.0;
    const Angle th{kPi / 8.0};
    const Vec2 xi{64.0, 0.0};
    const double fast = phi_avg(R, th, xi);
    const double slow = oracle::phi_trapezoid(R, th, xi, 8);
    CHECK(fast == Catch::Approx(slow).epsilon(0.005));

    const Vec2 xi2{33.0, 21.0};
    CHECK(phi_avg(R, th, xi2) == Catch::Approx(oracle::phi_trapezoid(R, th, xi2, 8)).epsilon(0.005));
}

TEST_CASE("phi_avg symmetry under reflection and negation") {
    const double R = 1.0 / 16.0;
    const Angle th{kPi / 8.0};
    const Vec2 xi{17.0, 9.0};
    const double base = phi_avg(R, th, xi);
    CHECK(phi_avg(R, th, {17.0, -9.0}) == Catch::Approx(base).epsilon(1e-12));
    CHECK(phi_avg(R, th, {-17.0, -9.0}) == Catch::Approx(base).epsilon(1e-12));
    CHECK(base >= 0.0);
}

TEST_CASE("phi_avg is stable under global panel doubling") {
    std::mt19937_64 eng(17);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int i = 0; i < 12; ++i) {
        const double R = 0.02 + 0.2 * u01(eng);
        const Angle th{kPi / 16.0 + (kPi / 4.0 - kPi / 16.0) * u01(eng)};
        const double mag = std::pow(10.0, 3.0 * u01(eng));
        const double arg = kPi * (u01(eng) - 0.5);
        const Vec2 xi{mag * std::cos(arg), mag * std::sin(arg)};
        QuadSpec q;
        const double v1 = phi_avg(R, th, xi, q);
        QuadSpec q2 = q;
        q2.panels_nu = 2 * std::max(q.panels_nu, 4 * std::max(1, static_cast<int>(std::ceil(
                                                         2.0 * mag * R * th.radians))));
        const double v2 = phi_avg(R, th, xi, q2);
        CHECK(v1 == Catch::Approx(v2).epsilon(2e-6));
    }
}

TEST_CASE("amplification is near 1 when both scales sit in the decay regime") {
    // with |xi| >> 1/R and 1/(aR), phi ~ R/|xi|^3, so phi_{aR}/(a phi_R) ~ 1
    const double R = 1.0 / 64.0;
    for (const double a : {2.0, 4.0})
        for (const double mag : {256.0, 512.0}) {
            const double r = amplification_ratio(a, R, {mag, 0.0});
            CHECK(r == Catch::Approx(1.0).epsilon(0.2));
        }
}

TEST_CASE("decay ratios are even in xi and amplification is 1 at a = 1") {
    const double R = 1.0 / 16.0;
    const Angle th{kPi / 8.0};
    const Vec2 xi{120.0, 3.0};
    CHECK(decay_ratio_sector(R, th, xi) ==
          Catch::Approx(decay_ratio_sector(R, th, {-120.0, -3.0})).epsilon(1e-12));
    CHECK(decay_ratio_global(R, th, xi) ==
          Catch::Approx(decay_ratio_global(R, th, {-120.0, -3.0})).epsilon(1e-12));
    CHECK(amplification_ratio(1.0, 1.0 / 64.0, {30.0, 10.0}) == 1.0);
}

TEST_CASE("sector ratios stay within a bounded spread along the axis") {
    const double R = 1.0 / 16.0;
    const Angle th{kPi / 8.0};
    const double base = 2.0 / (th.radians * R);
    double lo = 1e300, hi = 0.0;
    for (int k = 0; k <= 10; ++k) {
        const double mag = base * std::pow(2.0, k);
        const double ratio = decay_ratio_sector(R, th, {mag, 0.0});
        CHECK(ratio > 0.0);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    CHECK(hi / lo <= 50.0);

    // off-axis direction within the sector stays within a factor 10
    const double mag = 8.0 / (th.radians * R);
    const double on_axis = decay_ratio_sector(R, th, {mag, 0.0});
    const double rot = th.radians / 4.0;
    const double off = decay_ratio_sector(R, th, {mag * std::cos(rot), mag * std::sin(rot)});
    CHECK(off > 0.0);
    CHECK(std::max(on_axis, off) / std::min(on_axis, off) <= 10.0);
}

TEST_CASE("phi_avg reports non-convergence instead of returning a bad value") {
    QuadSpec q;
    q.nodes_per_panel = 4;
    q.rel_tol = 1e-18;  // unreachable: panel doubling always moves the value more
    CHECK_THROWS_AS(phi_avg(1.0 / 16.0, Angle{kPi / 8.0}, {64.0, 17.0}, q), QuadratureError);
    CHECK_THROWS_AS(phi_avg(-1.0, Angle{kPi / 8.0}, {1.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(phi_avg(0.5, Angle{1.0}, {1.0, 0.0}), std::invalid_argument);
}

TEST_CASE("sin_sq_dilation_avg closed form and limits") {
    CHECK(sin_sq_dilation_avg(4.0) >= 0.25);
    CHECK(sin_sq_dilation_avg(1000.0) == Catch::Approx(0.5).margin(1e-3));
    for (double C = 4.0; C <= 100.0; C += 0.37) {
        const double v = sin_sq_dilation_avg(C);
        CHECK(v >= 0.25);
        CHECK(v <= 1.0);
    }
    // cross-check against direct Simpson of sin^2(Ct) on [1,2]
    const double C = 7.3;
    double acc = 0.0;
    const int n = 20000;
    for (int i = 0; i <= n; ++i) {
        const double t = 1.0 + static_cast<double>(i) / n;
        const double w = (i == 0 || i == n) ? 0.5 : 1.0;
        acc += w * std::sin(C * t) * std::sin(C * t);
    }
    CHECK(sin_sq_dilation_avg(C) == Catch::Approx(acc / n).epsilon(1e-6));
}
