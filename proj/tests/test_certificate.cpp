#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>

#include "disclab/certificate.hpp"
#include "disclab/pointsets.hpp"

using namespace disclab;

TEST_CASE("build_cover parameterization at powers of two") {
    const SectorCover big = build_cover(1u << 20, Angle{kPi / 8.0}, 1.0);
    CHECK(big.X == Catch::Approx(4096.0).epsilon(1e-12));
    CHECK(big.Y == Catch::Approx(256.0).epsilon(1e-12));
    CHECK(big.psi == Catch::Approx(1.0 / 16.0).epsilon(1e-12));
    CHECK(big.M == 3);
    CHECK(big.rects.size() == 7);
    CHECK(big.feasible());
    CHECK_FALSE(big.degenerate);

    const SectorCover small = build_cover(1u << 10, Angle{kPi / 8.0}, 1.0);
    CHECK(small.X == Catch::Approx(64.0).epsilon(1e-12));
    CHECK(small.Y == Catch::Approx(16.0).epsilon(1e-12));
    CHECK(small.M == 0);
    CHECK(small.degenerate);
    CHECK(small.feasible());  // aspect/scale conditions still hold
    CHECK(small.rects.size() == 1);
}

TEST_CASE("cover invariants: XY = kappa n and the construction power laws") {
    for (const std::size_t n : {300u, 4096u, 100000u}) {
        for (const double kappa : {0.5, 1.0, 3.0}) {
            const SectorCover c = build_cover(n, Angle{kPi / 8.0}, kappa);
            CHECK(c.X * c.Y == Catch::Approx(kappa * static_cast<double>(n)).epsilon(1e-12));
            const SectorCover c2 = build_cover(2 * n, Angle{kPi / 8.0}, kappa);
            CHECK(c2.X / c.X == Catch::Approx(std::pow(2.0, 0.6)).epsilon(1e-12));
            CHECK(c2.Y / c.Y == Catch::Approx(std::pow(2.0, 0.4)).epsilon(1e-12));
            CHECK(rho(c2, 1.0) / rho(c, 1.0) ==
                  Catch::Approx(std::pow(2.0, -1.8)).epsilon(1e-12));
        }
    }
}

TEST_CASE("rho: balanced min arguments and explicit value") {
    const SectorCover c = build_cover(1u << 20, Angle{kPi / 8.0}, 1.0);
    const double th = kPi / 8.0;
    CHECK(c.X * c.X * c.X ==
          Catch::Approx(c.X * c.Y * c.Y * c.Y).epsilon(1e-12));  // X^3 = X Y^3
    CHECK(rho(c, 1.0) == Catch::Approx(1.0 / (th * std::pow(2.0, 36))).epsilon(1e-9));
    CHECK_THROWS_AS(rho(c, 0.0), std::invalid_argument);
}

TEST_CASE("cover_count equals per-rectangle membership and is symmetric") {
    const SectorCover c = build_cover(4096, Angle{kPi / 8.0}, 1.0);
    CHECK(c.M >= 1);
    CHECK(cover_count(c, {0, 0}) == static_cast<int>(c.rects.size()));
    const int far = static_cast<int>(std::ceil(c.bounding_radius())) + 1;
    CHECK(cover_count(c, {far, far}) == 0);

    for (const Mode m : {Mode{31, 2}, Mode{-14, 5}, Mode{60, -8}, Mode{3, 0}}) {
        int direct = 0;
        for (const RotRect& r : c.rects)
            direct += contains(r, {static_cast<double>(m.first), static_cast<double>(m.second)})
                          ? 1
                          : 0;
        CHECK(cover_count(c, m) == direct);
        CHECK(cover_count(c, m) == cover_count(c, {-m.first, -m.second}));
    }
}

TEST_CASE("enumerated cover satisfies the counting-function bounds") {
    const SectorCover c = build_cover(1u << 12, Angle{kPi / 8.0}, 1.0);
    const auto lattice = enumerate_cover_lattice(c);
    REQUIRE(!lattice.empty());

    // double-counting identity: sum of Phi equals the sum of per-rect counts
    std::uint64_t phi_total = 0;
    std::map<Mode, int> phi_of;
    for (const auto& [m, phi] : lattice) {
        phi_total += static_cast<std::uint64_t>(phi);
        phi_of[m] = phi;
        CHECK(phi <= static_cast<int>(c.rects.size()));
        CHECK(phi >= 1);
    }
    std::uint64_t per_rect = 0;
    const int B = static_cast<int>(std::ceil(c.bounding_radius()));
    for (const RotRect& r : c.rects)
        for (int m1 = -B; m1 <= B; ++m1)
            for (int m2 = -B; m2 <= B; ++m2)
                per_rect += contains(r, {static_cast<double>(m1), static_cast<double>(m2)}) ? 1 : 0;
    CHECK(phi_total == per_rect);

    for (const auto& [m, phi] : lattice) CHECK(phi_of.at({-m.first, -m.second}) == phi);

    const CoverBoundsReport rep = check_cover_bounds(c);
    CHECK(rep.lattice_points == lattice.size());
    CHECK(rep.phi_total == phi_total);
    CHECK(rep.phi_max <= static_cast<int>(c.rects.size()));
    CHECK(rep.max_phi_norm_far > 0.0);
    CHECK(std::isfinite(rep.max_phi_norm_far));
    // within the frozen constants: Phi(m)|m|/X <= c1 past Y, Phi <= c2*theta*X/Y
    CHECK(rep.c1_ok);
    CHECK(rep.c2_ok);
}

TEST_CASE("degenerate cover has Phi in {0, 1}") {
    const SectorCover c = build_cover(1u << 10, Angle{kPi / 8.0}, 1.0);
    REQUIRE(c.M == 0);
    const CoverBoundsReport rep = check_cover_bounds(c);
    CHECK(rep.phi_max == 1);
}

TEST_CASE("montgomery_sum counts the punctured lattice of a small square") {
    PointSet one;
    one.points = {{0.123, 0.456}};
    const RotRect U{{0.0, 0.0}, 2.0, 2.0, Angle{0.0}};
    CHECK(montgomery_sum(one, U, 0.5) == Catch::Approx(24.0).epsilon(1e-12));
    // every term is 1 for a single point, so shrinking B only adds terms
    CHECK(montgomery_sum(one, U, 0.0) == Catch::Approx(24.0).epsilon(1e-12));
}

TEST_CASE("montgomery lemma floor holds with the frozen constant") {
    const FrozenConstants& fc = frozen_constants();
    for (const std::uint64_t seed : {1ull, 2ull, 3ull}) {
        for (const int n : {4, 16, 64}) {
            const PointSet P = gen_random(n, seed);
            for (const double ang : {0.0, 0.2}) {
                const RotRect U{{0.0, 0.0}, 24.0, 9.0, Angle{ang}};
                const double sum = montgomery_sum(P, U, 0.0);
                const double area = 4.0 * U.half_u * U.half_v;
                CHECK(sum >= n * area / 4.0 - fc.montgomery_c * n * n - 1e-6);
            }
        }
    }
}

TEST_CASE("montgomery axis inequality is exact") {
    PointSet one;
    one.points = {{0.9, 0.1}};
    const MontgomeryAxisResult r1 = montgomery_axis_bound(one, 2.0, 2.0);
    CHECK(r1.sum == Catch::Approx(24.0).epsilon(1e-12));
    CHECK(r1.bound == Catch::Approx(3.0));
    CHECK(r1.holds);

    // bound <= 0 holds vacuously
    const PointSet big = gen_random(64, 10);
    const MontgomeryAxisResult r2 = montgomery_axis_bound(big, 4.0, 4.0);
    CHECK(r2.bound <= 0.0);
    CHECK(r2.holds);

    const PointSet P = gen_random(32, 77);
    const MontgomeryAxisResult r3 = montgomery_axis_bound(P, 48.0, 48.0);
    CHECK(r3.bound > 0.0);
    CHECK(r3.holds);
}

TEST_CASE("certificate for one point is a pure phi sum") {
    PointSet solo;
    solo.points = {{0.31, 0.62}};
    solo.label = "solo";
    // kappa = 1 leaves n = 1 infeasible; a large kappa restores feasibility
    CHECK_THROWS_AS(certified_lower_bound(solo, Angle{kPi / 8.0}, 1.0, 0.0),
                    InfeasibleCoverError);
    const double kappa = 128.0;
    const SectorCover cover = build_cover(1, Angle{kPi / 8.0}, kappa);
    REQUIRE(cover.feasible());

    const Certificate cert = certified_lower_bound(solo, Angle{kPi / 8.0}, kappa, 0.0);
    // |mu_hat(m)|^2 = 1 for a single point, so the certified sum is sum phi(m)
    NeumaierSum phis;
    for (const auto& [m, phi] : enumerate_cover_lattice(cover)) {
        if (m.first == 0 && m.second == 0) continue;
        phis.add(phi_avg(kCertificateR, cover.theta,
                         {static_cast<double>(m.first), static_cast<double>(m.second)}));
    }
    CHECK(cert.phi_sum == Catch::Approx(phis.value()).epsilon(1e-9));
    CHECK(cert.mode_count > 0);
}

TEST_CASE("certificate soundness against the direct average") {
    for (const int n : {256, 1024}) {
        const PointSet P = gen_random(n, 42);
        const Certificate cert =
            certified_lower_bound(P, Angle{kPi / 8.0}, 1.0, 0.0, QuadSpec{}, true);
        REQUIRE(cert.direct_value.has_value());
        CHECK(cert.phi_sum > 0.0);
        CHECK(cert.phi_sum <= *cert.direct_value * 1.02);
        CHECK(cert.mode_count > 0);
        CHECK(cert.montgomery.holds);  // bound is negative at kappa = 1
        CHECK(cert.rho_variant >= 0.0);
        CHECK(cert.rho_variant <= cert.phi_sum * 1.0001);
        CHECK(cert.n == static_cast<std::size_t>(n));
    }
}

TEST_CASE("infeasible covers are rejected with exit-code semantics") {
    const PointSet tiny = gen_random(64, 3);
    CHECK_THROWS_AS(certified_lower_bound(tiny, Angle{kPi / 16.0}, 1.0, 0.0),
                    InfeasibleCoverError);
    const SectorCover c = build_cover(64, Angle{kPi / 16.0}, 1.0);
    CHECK_FALSE(c.feasible());
    CHECK_FALSE(c.cond_aspect);
}

TEST_CASE("K > 0 prunes low modes and lowers the bound") {
    const PointSet P = gen_random(512, 9);
    const Certificate k0 = certified_lower_bound(P, Angle{kPi / 8.0}, 1.0, 0.0);
    const Certificate k8 = certified_lower_bound(P, Angle{kPi / 8.0}, 1.0, 8.0);
    CHECK(k8.mode_count < k0.mode_count);
    CHECK(k8.phi_sum <= k0.phi_sum + 1e-15);
}

TEST_CASE("scaling_exponent recovers exact power laws") {
    CHECK(scaling_exponent({{10.0, std::pow(10.0, 0.25)},
                            {100.0, std::pow(10.0, 0.5)},
                            {1000.0, std::pow(10.0, 0.75)}}) ==
          Catch::Approx(0.25).margin(1e-10));
    CHECK(scaling_exponent({{10.0, 3.0}, {100.0, 3.0}, {1000.0, 3.0}}) ==
          Catch::Approx(0.0).margin(1e-12));
    CHECK_THROWS_AS(scaling_exponent({{10.0, 1.0}, {20.0, 2.0}}), std::invalid_argument);
    CHECK_THROWS_AS(scaling_exponent({{10.0, 1.0}, {20.0, -2.0}, {30.0, 1.0}}),
                    std::invalid_argument);
}
