// disclab: directional-discrepancy experiments from the command line.
//
// Subcommands: generate, discrepancy, decay, certify, scaling. Outputs are
// CSV/JSON (17 significant digits) or simple SVG log-log plots; every file
// embeds the tool version, the frozen-constants version, and a full
// parameter echo. Exit codes: 0 success, 2 I/O, 3 validation, 4 infeasible
// mathematics (degenerate cover construction or quadrature failure).

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "disclab/certificate.hpp"
#include "disclab/constants.hpp"
#include "disclab/discrepancy.hpp"
#include "disclab/fourier.hpp"
#include "disclab/geometry.hpp"
#include "disclab/pointset_io.hpp"
#include "disclab/pointsets.hpp"
#include "disclab/version.hpp"

#include "svg.hpp"

using json = nlohmann::json;
using namespace disclab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 2;
constexpr int kExitValidation = 3;
constexpr int kExitInfeasible = 4;

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// constants file override (env DISCLAB_CONSTANTS points at a JSON file)

FrozenConstants load_constants() {
    FrozenConstants fc = frozen_constants();
    const char* path = std::getenv("DISCLAB_CONSTANTS");
    if (path == nullptr || *path == '\0') return fc;
    std::ifstream is(path);
    if (!is) throw IoError(std::string("cannot open constants file: ") + path);
    json j;
    try {
        is >> j;
    } catch (const json::exception& e) {
        throw IoError(std::string("malformed constants file ") + path + ": " + e.what());
    }
    const auto get = [&](const char* key, double& slot) {
        if (j.contains(key)) slot = j.at(key).get<double>();
    };
    if (j.contains("version")) fc.version = j.at("version").get<std::string>();
    get("sector_xi_min_mult", fc.sector_xi_min_mult);
    get("global_xi_min_mult", fc.global_xi_min_mult);
    get("sector_spread_max", fc.sector_spread_max);
    get("global_ratio_floor", fc.global_ratio_floor);
    get("amplification_floor", fc.amplification_floor);
    get("cover_c1", fc.cover_c1);
    get("cover_c2", fc.cover_c2);
    get("montgomery_c", fc.montgomery_c);
    get("rho_c", fc.rho_c);
    get("feasibility_aspect", fc.feasibility_aspect);
    get("feasibility_scale", fc.feasibility_scale);
    get("montgomery_slack", fc.montgomery_slack);
    return fc;
}

// ---------------------------------------------------------------------------
// shared option bundles

struct PointSource {
    std::string points_path;
    std::string generator;
    int n = 0;
    std::uint64_t seed = 1;
};

void add_point_source(CLI::App* cmd, PointSource& src) {
    cmd->add_option("--points", src.points_path, "point-set file (one 'x,y' per line)");
    cmd->add_option("--generator", src.generator,
                    "point-set generator: grid|halton|fibonacci|jittered|random")
        ->check(CLI::IsMember({"grid", "halton", "fibonacci", "jittered", "random"}));
    cmd->add_option("--n", src.n, "number of points for --generator");
    cmd->add_option("--seed", src.seed, "seed for seeded generators");
}

int nearest_fibonacci_index(int n) {
    int best_k = 2;
    double best_diff = 1e300;
    for (int k = 2; k <= 64; ++k) {
        const double diff =
            std::fabs(static_cast<double>(fibonacci_number(k)) - static_cast<double>(n));
        if (diff < best_diff) {
            best_diff = diff;
            best_k = k;
        }
        if (fibonacci_number(k) > static_cast<std::uint64_t>(n) * 2 + 8) break;
    }
    return best_k;
}

PointSet make_generated(const std::string& generator, int n, std::uint64_t seed) {
    if (n < 1) throw ValidationError("--n must be >= 1");
    if (generator == "random") return gen_random(n, seed);
    if (generator == "halton") return gen_halton(n);
    if (generator == "fibonacci") return gen_fibonacci(nearest_fibonacci_index(n));
    const int k = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
    if (k * k != n)
        throw ValidationError("--n must be a perfect square for generator '" + generator + "'");
    if (generator == "grid") return gen_grid(k);
    return gen_jittered(k, seed);
}

PointSet resolve_points(const PointSource& src) {
    if (!src.points_path.empty()) return read_pointset_file(src.points_path);
    if (src.generator.empty())
        throw ValidationError("either --points or --generator is required");
    return make_generated(src.generator, src.n, src.seed);
}

// ---------------------------------------------------------------------------
// output plumbing

void write_output(const std::string& out_path, const std::string& payload) {
    if (out_path.empty() || out_path == "-") {
        std::cout << payload;
        return;
    }
    std::ofstream os(out_path, std::ios::binary);
    if (!os) throw IoError("cannot open output file: " + out_path);
    os << payload;
}

json meta_json(const FrozenConstants& fc, const json& params) {
    return json{{"tool", "disclab"},
                {"version", kVersion},
                {"constants_version", fc.version},
                {"params", params}};
}

std::string meta_csv(const FrozenConstants& fc, const json& params) {
    std::ostringstream os;
    os << "# disclab " << kVersion << "\n";
    os << "# constants " << fc.version << "\n";
    os << "# params " << params.dump() << "\n";
    return os.str();
}

double require_theta(double theta) {
    if (!(theta > 0.0 && theta <= kPi / 4.0 + 1e-12))
        throw ValidationError("--theta must lie in (0, pi/4]");
    return theta;
}

// ---------------------------------------------------------------------------
// subcommands

struct CommonOpts {
    std::string out;
    std::string format;
    unsigned workers = 0;
};

int cmd_generate(const PointSource& src, const CommonOpts& common, const FrozenConstants& fc) {
    if (src.generator.empty()) throw ValidationError("--generator is required");
    const PointSet ps = make_generated(src.generator, src.n, src.seed);
    const json params{{"command", "generate"},
                      {"generator", src.generator},
                      {"n", src.n},
                      {"seed", src.seed}};
    std::ostringstream os;
    os << meta_csv(fc, params);
    write_pointset(os, ps);
    write_output(common.out, os.str());
    return kExitOk;
}

struct DiscrepancyOpts {
    double theta = kPi / 8.0;
    std::string mode = "periodic";
    SearchBudget budget;
    bool with_l2 = false;
    double r = 0.25;
    double nu = 0.0;
    int trunc = 512;
};

int cmd_discrepancy(const PointSource& src, const DiscrepancyOpts& opt,
                    const CommonOpts& common, const FrozenConstants& fc) {
    require_theta(opt.theta);
    const PointSet P = resolve_points(src);
    const DiscMode mode = opt.mode == "clipped" ? DiscMode::clipped : DiscMode::periodic;
    const DiscrepancyResult res =
        extremal_disc_search(P, RotationSet{Angle{opt.theta}}, mode, opt.budget);

    json params{{"command", "discrepancy"}, {"theta", opt.theta},      {"mode", opt.mode},
                {"label", P.label},         {"n", P.size()},           {"angles", opt.budget.angles},
                {"grid", opt.budget.grid},  {"rounds", opt.budget.rounds}};
    json out{{"meta", meta_json(fc, params)},
             {"value", res.value},
             {"argmax",
              {{"cx", res.argmax->center.x},
               {"cy", res.argmax->center.y},
               {"hu", res.argmax->half_u},
               {"hv", res.argmax->half_v},
               {"angle", res.argmax->angle.radians}}},
             {"mode", opt.mode},
             {"evaluations", res.meta.evaluations},
             {"resolution", res.meta.resolution}};
    if (opt.with_l2) {
        if (!(opt.r > 0.0 && opt.r < 0.5)) throw ValidationError("--r must lie in (0, 1/2)");
        out["l2"] = {{"r", opt.r},
                     {"nu", opt.nu},
                     {"trunc", opt.trunc},
                     {"value", l2_disc_fourier(P, opt.r, Angle{opt.nu}, opt.trunc, common.workers)},
                     {"tail_estimate", l2_fourier_tail_estimate(P.size(), opt.r, opt.trunc)}};
    }

    if (common.format == "csv") {
        std::ostringstream os;
        os << meta_csv(fc, params);
        os << "value,cx,cy,hu,hv,angle,mode,evaluations,resolution";
        if (opt.with_l2) os << ",l2_r,l2_nu,l2_trunc,l2_value,l2_tail_estimate";
        os << "\n";
        os << fmt17(res.value) << ',' << fmt17(res.argmax->center.x) << ','
           << fmt17(res.argmax->center.y) << ',' << fmt17(res.argmax->half_u) << ','
           << fmt17(res.argmax->half_v) << ',' << fmt17(res.argmax->angle.radians) << ','
           << opt.mode << ',' << res.meta.evaluations << ',' << res.meta.resolution;
        if (opt.with_l2) {
            const auto& l2 = out.at("l2");
            os << ',' << fmt17(opt.r) << ',' << fmt17(opt.nu) << ',' << opt.trunc << ','
               << fmt17(l2.at("value").get<double>()) << ','
               << fmt17(l2.at("tail_estimate").get<double>());
        }
        os << "\n";
        write_output(common.out, os.str());
    } else {
        write_output(common.out, out.dump(2) + "\n");
    }
    return kExitOk;
}

struct DecayOpts {
    double theta = kPi / 8.0;
    double R = 1.0 / 16.0;
    int mags = 12;
    double decades = 3.0;
    int dirs_sector = 5;
    int dirs_global = 6;
};

int cmd_decay(const DecayOpts& opt, const CommonOpts& common, const FrozenConstants& fc) {
    require_theta(opt.theta);
    if (!(opt.R > 0.0 && opt.R < 1.0)) throw ValidationError("--R must lie in (0, 1)");
    if (opt.mags < 2 || opt.dirs_sector < 1 || opt.dirs_global < 1)
        throw ValidationError("decay sweep sizes must be positive (--mags >= 2)");

    const double th = opt.theta;
    std::vector<double> args;
    for (int i = 0; i < opt.dirs_sector; ++i)
        args.push_back(-th / 2.0 + th * (i + 0.5) / opt.dirs_sector);
    for (int i = 0; i < opt.dirs_global; ++i)
        args.push_back((kPi / 2.0) * i / (opt.dirs_global - 1));

    const double lo = std::max(fc.sector_xi_min_mult / (th * opt.R),
                               fc.global_xi_min_mult / opt.R);
    json params{{"command", "decay"}, {"theta", th},       {"R", opt.R},
                {"mags", opt.mags},   {"decades", opt.decades}, {"dirs_sector", opt.dirs_sector},
                {"dirs_global", opt.dirs_global}};

    struct Row {
        double arg, mag, phi, rs, rg;
    };
    std::vector<Row> rows;
    for (const double arg : args)
        for (int im = 0; im < opt.mags; ++im) {
            const double mag = lo * std::pow(10.0, opt.decades * im / (opt.mags - 1));
            const Vec2 xi{mag * std::cos(arg), mag * std::sin(arg)};
            const double phi = phi_avg(opt.R, Angle{th}, xi);
            rows.push_back({arg, mag, phi, phi * th * mag * mag * mag / opt.R,
                            phi * mag * mag * mag * mag});
        }

    if (common.format == "svg") {
        std::vector<disclab_cli::SvgSeries> series;
        for (std::size_t a = 0; a < args.size(); ++a) {
            char name[64];
            std::snprintf(name, sizeof(name), "arg=%.4f", args[a]);
            disclab_cli::SvgSeries s;
            s.name = name;
            for (int im = 0; im < opt.mags; ++im) {
                const Row& r = rows[a * opt.mags + im];
                s.points.push_back({r.mag, r.phi});
            }
            series.push_back(std::move(s));
        }
        const double ax = rows.front().mag, ay = rows.front().phi;
        std::ostringstream os;
        disclab_cli::write_svg_loglog(os, "phi vs |xi| (reference slopes -3, -4)", series,
                                      {{-3.0, ax, ay}, {-4.0, ax, ay}});
        write_output(common.out, os.str());
        return kExitOk;
    }

    std::ostringstream os;
    os << meta_csv(fc, params);
    os << "theta,R,xi1,xi2,phi,ratio_sector,ratio_global\n";
    for (const Row& r : rows) {
        const double x1 = r.mag * std::cos(r.arg);
        const double x2 = r.mag * std::sin(r.arg);
        os << fmt17(th) << ',' << fmt17(opt.R) << ',' << fmt17(x1) << ',' << fmt17(x2) << ','
           << fmt17(r.phi) << ',' << fmt17(r.rs) << ',' << fmt17(r.rg) << "\n";
    }
    write_output(common.out, os.str());
    return kExitOk;
}

struct CertifyOpts {
    double theta = kPi / 8.0;
    double kappa = 1.0;
    double K = 0.0;
    bool direct = false;
    bool paper_variant = false;
};

json certificate_json(const Certificate& cert, bool paper_variant, const FrozenConstants& fc,
                      const json& params) {
    json out{{"meta", meta_json(fc, params)},
             {"label", cert.point_set_label},
             {"n", cert.n},
             {"theta", cert.theta},
             {"kappa", cert.kappa},
             {"K", cert.K},
             {"mode_count", cert.mode_count},
             {"phi_sum", cert.phi_sum},
             {"rho_variant", nullptr},
             {"direct_value", nullptr},
             {"montgomery",
              {{"sum", cert.montgomery.sum},
               {"bound", cert.montgomery.bound},
               {"holds", cert.montgomery.holds}}},
             {"timing_ms", cert.timing_ms}};
    if (paper_variant) {
        out["rho_variant"] = cert.rho_variant;
        out["rho_weight"] = cert.rho_weight;
    }
    if (cert.direct_value) {
        out["direct_value"] = *cert.direct_value;
        out["direct_trunc"] = cert.direct_trunc;
    }
    return out;
}

int cmd_certify(const PointSource& src, const CertifyOpts& opt, const CommonOpts& common,
                const FrozenConstants& fc) {
    require_theta(opt.theta);
    if (!(opt.kappa > 0.0)) throw ValidationError("--kappa must be > 0");
    if (opt.K < 0.0) throw ValidationError("--K must be >= 0");
    const PointSet P = resolve_points(src);
    const Certificate cert = certified_lower_bound(P, Angle{opt.theta}, opt.kappa, opt.K,
                                                   QuadSpec{}, opt.direct, fc, common.workers);
    json params{{"command", "certify"}, {"theta", opt.theta}, {"kappa", opt.kappa},
                {"K", opt.K},           {"label", P.label},   {"n", P.size()},
                {"direct", opt.direct}, {"paper_variant", opt.paper_variant}};
    write_output(common.out, certificate_json(cert, opt.paper_variant, fc, params).dump(2) + "\n");
    return kExitOk;
}

struct ScalingOpts {
    std::string quantity = "certificate";
    std::vector<std::string> generators{"random"};
    std::vector<int> sizes;
    int seeds = 1;
    double theta = kPi / 8.0;
    double kappa = 1.0;
    double K = 0.0;
    double R = 1.0 / 16.0;
    int trunc = 128;
    std::string mode = "periodic";
    SearchBudget budget;
};

int cmd_scaling(const ScalingOpts& opt, const CommonOpts& common, const FrozenConstants& fc) {
    require_theta(opt.theta);
    if (opt.sizes.size() < 3)
        throw ValidationError("--n needs at least 3 sizes for a slope fit");
    if (opt.seeds < 1) throw ValidationError("--seeds must be >= 1");

    const auto quantity_of = [&](const PointSet& P) -> double {
        if (opt.quantity == "search")
            return extremal_disc_search(P, RotationSet{Angle{opt.theta}},
                                        opt.mode == "clipped" ? DiscMode::clipped
                                                              : DiscMode::periodic,
                                        opt.budget)
                .value;
        if (opt.quantity == "avgl2")
            return avg_l2_disc(P, Angle{opt.theta}, opt.R, opt.trunc, QuadSpec{},
                               common.workers);
        return certified_lower_bound(P, Angle{opt.theta}, opt.kappa, opt.K, QuadSpec{}, false,
                                     fc, common.workers)
            .phi_sum;
    };

    json params{{"command", "scaling"},   {"quantity", opt.quantity},
                {"theta", opt.theta},     {"kappa", opt.kappa},
                {"K", opt.K},             {"R", opt.R},
                {"trunc", opt.trunc},     {"seeds", opt.seeds},
                {"generators", opt.generators}, {"n", opt.sizes}};

    struct Row {
        std::string generator;
        int n;
        double value;
    };
    std::vector<Row> rows;
    std::vector<std::pair<std::string, double>> fits;
    for (const std::string& gen : opt.generators) {
        std::vector<std::pair<double, double>> series;
        bool all_positive = true;
        for (const int n : opt.sizes) {
            NeumaierSum acc;
            for (int s = 1; s <= opt.seeds; ++s)
                acc.add(quantity_of(make_generated(gen, n, static_cast<std::uint64_t>(s))));
            const double mean = acc.value() / opt.seeds;
            rows.push_back({gen, n, mean});
            series.push_back({static_cast<double>(n), mean});
            // lattices whose nonzero frequencies miss the cover leave only
            // cancellation dust (~1e-30); no log-log fit exists for those
            all_positive = all_positive && mean > 1e-15;
        }
        fits.push_back({gen, all_positive ? scaling_exponent(series)
                                          : std::numeric_limits<double>::quiet_NaN()});
    }

    if (common.format == "svg") {
        std::vector<disclab_cli::SvgSeries> series;
        for (const std::string& gen : opt.generators) {
            disclab_cli::SvgSeries s;
            s.name = gen;
            for (const Row& r : rows)
                if (r.generator == gen) s.points.push_back({static_cast<double>(r.n), r.value});
            series.push_back(std::move(s));
        }
        std::ostringstream os;
        disclab_cli::write_svg_loglog(os, opt.quantity + " vs n", series);
        write_output(common.out, os.str());
        return kExitOk;
    }

    std::ostringstream os;
    os << meta_csv(fc, params);
    os << "generator,n,value\n";
    for (const Row& r : rows)
        os << r.generator << ',' << r.n << ',' << fmt17(r.value) << "\n";
    for (const auto& [gen, slope] : fits)
        os << "# fit generator=" << gen << " slope=" << fmt17(slope) << "\n";
    write_output(common.out, os.str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"directional discrepancy laboratory"};
    app.require_subcommand(1);

    CommonOpts common;
    PointSource src;
    DiscrepancyOpts disc;
    DecayOpts decay;
    CertifyOpts cert;
    ScalingOpts scaling;

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--out", common.out, "output path ('-' for stdout)");
        cmd->add_option("--format", common.format, "output format")
            ->check(CLI::IsMember({"csv", "json", "svg"}));
        cmd->add_option("--workers", common.workers, "worker threads (0 = hardware)");
    };

    CLI::App* g = app.add_subcommand("generate", "write a point set file");
    add_point_source(g, src);
    add_common(g);

    CLI::App* d = app.add_subcommand("discrepancy", "extremal directional discrepancy search");
    add_point_source(d, src);
    d->add_option("--theta", disc.theta, "rotation half-interval (radians)");
    d->add_option("--mode", disc.mode, "periodic|clipped")
        ->check(CLI::IsMember({"periodic", "clipped"}));
    d->add_option("--budget-angles", disc.budget.angles, "angle grid size");
    d->add_option("--budget-grid", disc.budget.grid, "center/extent grid size");
    d->add_option("--budget-rounds", disc.budget.rounds, "refinement rounds");
    d->add_flag("--l2", disc.with_l2, "also report the truncated Fourier L2 discrepancy");
    d->add_option("--r", disc.r, "square half-side for --l2");
    d->add_option("--nu", disc.nu, "square angle for --l2");
    d->add_option("--trunc", disc.trunc, "Fourier truncation for --l2");
    add_common(d);

    CLI::App* dec = app.add_subcommand("decay", "averaged Fourier decay sweep");
    dec->add_option("--theta", decay.theta, "rotation half-interval (radians)");
    dec->add_option("--R", decay.R, "dilation scale");
    dec->add_option("--mags", decay.mags, "magnitudes per direction");
    dec->add_option("--decades", decay.decades, "decades spanned above the validity floor");
    dec->add_option("--dirs-sector", decay.dirs_sector, "directions inside the sector");
    dec->add_option("--dirs-global", decay.dirs_global, "directions across [0, pi/2]");
    add_common(dec);

    CLI::App* c = app.add_subcommand("certify", "certified averaged-L2 lower bound");
    add_point_source(c, src);
    c->add_option("--theta", cert.theta, "rotation half-interval (radians)");
    c->add_option("--kappa", cert.kappa, "cover area constant (XY = kappa*N)");
    c->add_option("--K", cert.K, "low-frequency exclusion radius");
    c->add_flag("--direct", cert.direct, "also compute avg_l2_disc for comparison");
    c->add_flag("--paper-variant", cert.paper_variant, "report the rho*Phi diagnostic");
    add_common(c);

    CLI::App* s = app.add_subcommand("scaling", "quantity vs n with fitted exponents");
    s->add_option("--quantity", scaling.quantity, "certificate|avgl2|search")
        ->check(CLI::IsMember({"certificate", "avgl2", "search"}));
    s->add_option("--generator", scaling.generators, "generators to sweep")
        ->check(CLI::IsMember({"grid", "halton", "fibonacci", "jittered", "random"}));
    s->add_option("--n", scaling.sizes, "point counts (>= 3 values)");
    s->add_option("--seeds", scaling.seeds, "seeds averaged per (generator, n)");
    s->add_option("--theta", scaling.theta, "rotation half-interval (radians)");
    s->add_option("--kappa", scaling.kappa, "cover area constant");
    s->add_option("--K", scaling.K, "low-frequency exclusion radius");
    s->add_option("--R", scaling.R, "dilation scale for avgl2");
    s->add_option("--trunc", scaling.trunc, "Fourier truncation for avgl2");
    s->add_option("--mode", scaling.mode, "periodic|clipped for search")
        ->check(CLI::IsMember({"periodic", "clipped"}));
    s->add_option("--budget-angles", scaling.budget.angles, "angle grid size for search");
    s->add_option("--budget-grid", scaling.budget.grid, "center/extent grid size for search");
    s->add_option("--budget-rounds", scaling.budget.rounds, "refinement rounds for search");
    add_common(s);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "disclab: " << e.what() << "\n";
        return kExitValidation;
    }

    const auto format_or = [&](const char* dflt) {
        if (common.format.empty()) common.format = dflt;
    };

    try {
        const FrozenConstants fc = load_constants();
        if (g->parsed()) return cmd_generate(src, common, fc);
        if (d->parsed()) {
            format_or("json");
            return cmd_discrepancy(src, disc, common, fc);
        }
        if (dec->parsed()) {
            format_or("csv");
            return cmd_decay(decay, common, fc);
        }
        if (c->parsed()) {
            format_or("json");
            return cmd_certify(src, cert, common, fc);
        }
        if (s->parsed()) {
            format_or("csv");
            return cmd_scaling(scaling, common, fc);
        }
        std::cerr << "disclab: no subcommand\n";
        return kExitValidation;
    } catch (const IoError& e) {
        std::cerr << "disclab: " << e.what() << "\n";
        return kExitIo;
    } catch (const ValidationError& e) {
        std::cerr << "disclab: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "disclab: " << e.what() << "\n";
        return kExitValidation;
    } catch (const InfeasibleCoverError& e) {
        std::cerr << "disclab: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const QuadratureError& e) {
        std::cerr << "disclab: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "disclab: " << e.what() << "\n";
        return 1;
    }
}
