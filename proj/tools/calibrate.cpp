// Calibration sweeps behind the frozen constants in
// include/disclab/constants.hpp. Run after any change to the decay or cover
// machinery, compare against the frozen values, and refreeze (with margin)
// when they drift.

#include <cstdio>
#include <vector>

#include "disclab/certificate.hpp"
#include "disclab/constants.hpp"
#include "disclab/discrepancy.hpp"
#include "disclab/fourier.hpp"
#include "disclab/pointsets.hpp"

using namespace disclab;

int main() {
    const double R = 1.0 / 16.0;

    std::printf("== sector ratio phi*theta*|xi|^3/R, 3 decades above 4/(theta R) ==\n");
    for (const double th : {kPi / 16.0, kPi / 8.0, kPi / 4.0}) {
        double lo = 1e300, hi = 0.0;
        const double base = 4.0 / (th * R);
        for (int ia = 0; ia < 10; ++ia) {
            const double arg = -th / 2.0 + th * (ia + 0.5) / 10.0;
            for (int im = 0; im < 20; ++im) {
                const double mag = base * std::pow(10.0, 3.0 * (im + 0.5) / 20.0);
                const Vec2 xi{mag * std::cos(arg), mag * std::sin(arg)};
                const double ratio = decay_ratio_sector(R, Angle{th}, xi);
                lo = std::min(lo, ratio);
                hi = std::max(hi, ratio);
            }
        }
        std::printf("theta=%.5f  min=%.6g max=%.6g spread=%.3f\n", th, lo, hi, hi / lo);
    }

    std::printf("\n== global ratio phi*|xi|^4 over 16 directions x 8 magnitudes ==\n");
    double gmin = 1e300;
    for (const double th : {kPi / 16.0, kPi / 8.0, kPi / 4.0}) {
        double tmin = 1e300;
        for (int id = 0; id < 16; ++id) {
            const double arg = (kPi / 2.0) * id / 15.0;  // both axes included
            for (int im = 0; im < 8; ++im) {
                const double mag =
                    (16.0 / R) * std::pow((1000.0 / 16.0), im / 7.0);
                const Vec2 xi{mag * std::cos(arg), mag * std::sin(arg)};
                tmin = std::min(tmin, decay_ratio_global(R, Angle{th}, xi));
            }
        }
        std::printf("theta=%.5f  min=%.6g\n", th, tmin);
        gmin = std::min(gmin, tmin);
    }
    std::printf("overall min=%.6g\n", gmin);

    std::printf("\n== amplification ratio at theta=pi/4, R=1/64 ==\n");
    double amin = 1e300;
    for (const double a : {2.0, 4.0, 8.0})
        for (const double mag : {16.0, 64.0, 256.0})
            for (const double arg : {0.0, kPi / 8.0}) {
                const Vec2 xi{mag * std::cos(arg), mag * std::sin(arg)};
                const double r = amplification_ratio(a, 1.0 / 64.0, xi);
                amin = std::min(amin, r);
                std::printf("a=%g |xi|=%g arg=%.3f  ratio=%.4f\n", a, mag, arg, r);
            }
    std::printf("min=%.6g\n", amin);

    std::printf("\n== cover counting bounds ==\n");
    double c1max = 0.0, c2max = 0.0;
    for (const std::size_t n : {std::size_t(1) << 12, std::size_t(1) << 16, std::size_t(1) << 20})
        for (const double th : {kPi / 8.0, kPi / 6.0}) {
            const SectorCover cover = build_cover(n, Angle{th}, 1.0);
            const CoverBoundsReport rep = check_cover_bounds(cover);
            const double c2 = rep.phi_max * cover.Y / (th * cover.X);
            std::printf("n=%zu theta=%.4f M=%d points=%zu phi_max=%d c1=%.4f c2=%.4f\n", n,
                        th, cover.M, rep.lattice_points, rep.phi_max, rep.max_phi_norm_far,
                        c2);
            c1max = std::max(c1max, rep.max_phi_norm_far);
            c2max = std::max(c2max, c2);
        }
    std::printf("max c1=%.4f  max c2=%.4f\n", c1max, c2max);

    std::printf("\n== Montgomery lemma constant c ==\n");
    double cmont = 0.0;
    for (const std::uint64_t seed : {1, 2, 3, 4, 5})
        for (const int n : {4, 8, 16, 32, 64}) {
            const PointSet P = gen_random(n, seed);
            for (const double ang : {0.0, 0.2, kPi / 8.0})
                for (const double hu : {8.0, 16.0, 32.0})
                    for (const double aspect : {1.0, 0.25}) {
                        const RotRect U{{0.0, 0.0}, hu, hu * aspect, Angle{ang}};
                        const double sum = montgomery_sum(P, U, 0.0);
                        const double need =
                            (n * 4.0 * U.half_u * U.half_v / 4.0 - sum) / (double(n) * n);
                        cmont = std::max(cmont, need);
                    }
        }
    std::printf("max needed c=%.6f\n", cmont);

    std::printf("\n== rho constant: min phi(m) / (Phi(m) * min-arg) over covers ==\n");
    double rmin = 1e300;
    for (const std::size_t n : {std::size_t(256), std::size_t(1024), std::size_t(4096)})
        for (const double th : {kPi / 8.0, kPi / 6.0}) {
            const SectorCover cover = build_cover(n, Angle{th}, 1.0);
            if (!cover.feasible()) continue;
            const double unit = std::min(1.0 / (th * cover.X * cover.X * cover.X),
                                         1.0 / (th * cover.X * cover.Y * cover.Y * cover.Y));
            double local = 1e300;
            for (const auto& [m, phi_count] : enumerate_cover_lattice(cover)) {
                if (m.first == 0 && m.second == 0) continue;
                const double phi = phi_avg(kCertificateR, Angle{th},
                                           {double(m.first), double(m.second)});
                local = std::min(local, phi / (phi_count * unit));
            }
            std::printf("n=%zu theta=%.4f  min ratio=%.6g\n", n, th, local);
            rmin = std::min(rmin, local);
        }
    std::printf("overall min=%.6g\n", rmin);

    return 0;
}
