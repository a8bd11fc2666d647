#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include "ifslab/area_map.hpp"
#include "ifslab/boxdim.hpp"
#include "ifslab/continuum_io.hpp"
#include "ifslab/detect.hpp"
#include "ifslab/experiment.hpp"
#include "ifslab/ifs.hpp"
#include "ifslab/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ifslab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerification = 2;

json load_json(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error("cannot open config: " + path);
    json j;
    is >> j;
    return j;
}

void store_json(const fs::path& path, const json& j) {
    std::ofstream os(path);
    if (!os) throw Error("cannot write: " + path.string());
    os << j.dump(2) << "\n";
}

fs::path prepare_out_dir(const std::string& dir) {
    fs::path p(dir);
    fs::create_directories(p);
    return p;
}

Band band_from_json(const json& j) {
    return Band{j.at("lo").get<double>(), j.at("hi").get<double>()};
}

int cmd_coverage(const std::string& config_path, const std::string& out_dir) {
    const json cfg = load_json(config_path);
    const AreaMap f = AreaMap::from_json(cfg.at("f"));
    const AreaMap g = AreaMap::from_json(cfg.at("g"));
    const ChartPoint start{cfg.at("start").at(0).get<double>(),
                           cfg.at("start").at(1).get<double>()};
    const int resolution = cfg.value("resolution", 32);
    const int budget = cfg.value("budget", 10000);

    const CoverageReport report = coverage_test(f, g, start, resolution, budget);

    const fs::path out = prepare_out_dir(out_dir);
    write_coverage_csv((out / "coverage.csv").string(), report);
    store_json(out / "coverage.json",
               json{{"resolution", report.resolution},
                    {"budget", report.budget},
                    {"covered", report.covered},
                    {"fraction", report.final_fraction()},
                    {"saturated", report.saturated}});
    std::printf("coverage: %lld/%d cells (fraction %.6f)%s\n",
                static_cast<long long>(report.covered), resolution * resolution,
                report.final_fraction(), report.saturated ? " [saturated]" : "");
    return kExitOk;
}

int cmd_detect(const std::string& config_path, const std::string& out_dir) {
    const json cfg = load_json(config_path);
    const AreaMap f = AreaMap::from_json(cfg.at("map"));
    const Band band = band_from_json(cfg.at("band"));

    DetectParams params;
    params.power = cfg.value("power", 1);
    params.count = cfg.value("count", 10);
    params.iterations = cfg.value("iterations", 8192);
    params.spread_tol = cfg.value("spread_tol", 0.05);
    params.resolution = cfg.value("resolution", 256);

    const DetectionResult result = detect_circle_family(f, band, params);

    const fs::path out = prepare_out_dir(out_dir);
    write_family_pgm_file((out / "family.pgm").string(), result.family);
    write_candidates_csv((out / "candidates.csv").string(), result.candidates);
    json keys = json::array();
    for (const auto& k : result.family.order_keys()) keys.push_back(k);
    store_json(out / "detect.json", json{{"members", result.family.size()},
                                         {"candidates", result.candidates.size()},
                                         {"order_keys", keys}});
    std::printf("detected %zu essential invariant circles (%zu seeds tried)\n",
                result.family.size(), result.candidates.size());
    return kExitOk;
}

int cmd_separate(const std::string& config_path, const std::string& out_dir,
                 std::uint64_t seed) {
    const json cfg = load_json(config_path);
    const AreaMap f = AreaMap::from_json(cfg.at("f"));
    const AreaMap g = AreaMap::from_json(cfg.at("g"));
    const Band band = band_from_json(cfg.at("band"));
    SeparationConfig config = cfg.value("config", SeparationConfig{});
    config.seed = seed;

    const SeparationOutcome outcome = run_separation(f, g, band, config);

    const fs::path out = prepare_out_dir(out_dir);
    json summary = outcome.summary_json();
    summary["config"] = config;
    summary["g_conjugated"] = outcome.conjugated_g.to_json();
    store_json(out / "outcome.json", summary);
    write_coverage_csv((out / "coverage_before.csv").string(), outcome.coverage_before);
    write_coverage_csv((out / "coverage_after.csv").string(), outcome.coverage_after);
    if (!outcome.detection_f.family.empty())
        write_family_pgm_file((out / "family_f.pgm").string(), outcome.detection_f.family);
    if (!outcome.detection_g.family.empty())
        write_family_pgm_file((out / "family_g.pgm").string(), outcome.detection_g.family);
    if (!outcome.translated_family_g.empty())
        write_family_pgm_file((out / "family_g_translated.pgm").string(),
                              outcome.translated_family_g);

    if (outcome.trivially_separated) {
        std::printf("trivially separated: a family is empty; g left unchanged\n");
    } else {
        std::printf("separated %zu x %zu pairs; translation (%.6f, %.6f, %.6f); "
                    "min witness margin %.6f\n",
                    outcome.square_family_g.size(), outcome.square_family_f.size(),
                    outcome.translation[0], outcome.translation[1],
                    outcome.translation[2], outcome.min_witness_margin);
        std::printf("coverage %.6f -> %.6f\n", outcome.coverage_before.final_fraction(),
                    outcome.coverage_after.final_fraction());
    }
    return kExitOk;
}

int cmd_boxdim(const std::string& in_path, const std::string& out_dir, int lo_exp,
               int hi_exp, bool chain, const std::string& against, double epsilon,
               double margin, int budget, std::uint64_t seed) {
    const PointCloud3 cloud = read_cloud_csv(in_path);
    const auto sides = dyadic_sides(lo_exp, hi_exp);
    const DimensionEstimate est = upper_box_dimension(cloud, sides);

    json j{{"points", cloud.size()},
           {"sides", est.sides},
           {"counts", est.counts},
           {"slope", est.slope},
           {"slope_stderr", est.slope_stderr}};
    std::printf("box-dimension slope %.4f (stderr %.4f) over %zu scales\n", est.slope,
                est.slope_stderr, est.sides.size());

    if (chain) {
        const auto image = sum_embed(cloud);
        j["chain"] = true;
        j["sum_embed_min"] = image.front();
        j["sum_embed_max"] = image.back();
        std::printf("chain verified; sum image spans [%.6f, %.6f]\n", image.front(),
                    image.back());
    }

    int code = kExitOk;
    if (!against.empty()) {
        const PointCloud3 other = read_cloud_csv(against);
        try {
            const auto t = find_separating_translation(cloud, other, epsilon, margin,
                                                       budget, Rng(seed));
            j["translation"] = t;
            std::printf("separating translation (%.8f, %.8f, %.8f)\n", t[0], t[1], t[2]);
        } catch (const BudgetExhausted& e) {
            j["translation_error"] = e.what();
            j["best_margin"] = e.best_margin;
            std::printf("budget exhausted: best margin %.8f\n", e.best_margin);
            code = kExitVerification;
        }
    }
    const fs::path out = prepare_out_dir(out_dir);
    store_json(out / "boxdim.json", j);
    return code;
}

int cmd_frontier(const std::string& in_path, const std::string& out_dir, double band_lo,
                 double band_hi) {
    const GridContinuum k = read_pbm_file(in_path, Chart::annulus());
    const Band band{band_lo, band_hi};
    const FrontierDecomposition d = extract_frontier(k, band);

    const fs::path out = prepare_out_dir(out_dir);
    write_pbm_file((out / "frontier.pbm").string(), d.frontier);
    write_cellset_pbm_file((out / "lower.pbm").string(), d.lower);
    write_cellset_pbm_file((out / "upper.pbm").string(), d.upper);
    store_json(out / "frontier.json",
               json{{"input_cells", k.cell_count()},
                    {"frontier_cells", d.frontier.cell_count()},
                    {"lower_cells", d.lower.count()},
                    {"upper_cells", d.upper.count()}});
    std::printf("frontier: %zu cells (from %zu)\n", d.frontier.cell_count(),
                k.cell_count());
    return kExitOk;
}

int cmd_finite_oracle(int models, int max_n, std::uint64_t seed) {
    Rng rng(seed);
    int agree = 0;
    for (int m = 0; m < models; ++m) {
        Rng stream = rng.substream(static_cast<std::uint64_t>(m));
        const int n = stream.uniform_int(1, max_n);
        const FinitePermModel model = FinitePermModel::random(n, stream);
        const TransitivityReport report = finite_transitivity_suite(model);
        if (report.all_agree()) ++agree;
    }
    std::printf("9/9 equivalent in %d/%d models\n", agree, models);
    return agree == models ? kExitOk : kExitVerification;
}

int cmd_jacobian_audit(int points, std::uint64_t seed, double step,
                       const std::string& config_path) {
    struct Entry {
        std::string name;
        AreaMap map;
        Band sample_band;
        double tolerance;
    };
    std::vector<Entry> battery;
    if (!config_path.empty()) {
        const json cfg = load_json(config_path);
        battery.push_back({"config map", AreaMap::from_json(cfg.at("map")),
                           Band{cfg.value("band_lo", 0.1), cfg.value("band_hi", 0.9)},
                           cfg.value("tolerance", 1e-6)});
    } else {
        const AreaMap twist = AreaMap::integrable_twist(Chart::annulus(), 1.0);
        const AreaMap kicked_t = AreaMap::kicked_twist(Chart::torus(), 1.2);
        const AreaMap kicked_a = AreaMap::kicked_twist(Chart::annulus(), 0.3);
        SeparatorSpec spec = SeparatorSpec::standard();
        spec.times = {0.03, -0.02, 0.025};
        const AreaMap h = build_separator(spec);
        const AreaMap embedded = AreaMap::band_embedded(h, Band{0.1, 0.9});
        battery.push_back({"integrable_twist", twist, {0.05, 0.95}, 1e-8});
        battery.push_back({"kicked_twist (torus, k=1.2)", kicked_t, {0.0, 1.0}, 1e-8});
        battery.push_back({"kicked_twist (annulus, k=0.3)", kicked_a, {0.3, 0.7}, 1e-8});
        battery.push_back({"separator h", h, {0.05, 0.95}, 1e-6});
        battery.push_back({"conjugated twist h g h^-1",
                           AreaMap::conjugate(twist, embedded), {0.05, 0.95}, 1e-6});
        battery.push_back({"composite twist o kicked o twist^-1",
                           AreaMap::composite({twist,
                                               AreaMap::kicked_twist(Chart::annulus(), 0.2),
                                               AreaMap::inverse(twist)}),
                           {0.3, 0.7}, 1e-6});
    }

    bool ok = true;
    for (const Entry& e : battery) {
        Rng rng = Rng(seed).substream(e.name);
        double worst = 0;
        for (int k = 0; k < points; ++k) {
            const ChartPoint p{rng.uniform(step, 1.0 - step),
                               rng.uniform(e.sample_band.lo + step,
                                           e.sample_band.hi - step)};
            worst = std::max(worst, std::abs(jacobian_det(e.map, p, step) - 1.0));
        }
        const bool pass = worst < e.tolerance;
        ok = ok && pass;
        std::printf("%-36s max |det J - 1| = %.3e  (tol %.0e) %s\n", e.name.c_str(),
                    worst, e.tolerance, pass ? "ok" : "FAIL");
    }
    return ok ? kExitOk : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ifslab: invariant-circle families, bump-flow separators, and IFS "
                 "coverage experiments for area-preserving surface maps"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", in_path, against;
    std::uint64_t seed = 0;
    bool have_seed = false;
    int models = 500, max_n = 12, lo_exp = 2, hi_exp = 8, budget = 1000, points = 1000;
    double band_lo = 0.0, band_hi = 1.0, epsilon = 0.02, margin = 0.01, step = 1e-5;
    bool chain = false;

    auto add_seed = [&](CLI::App* cmd, bool required) {
        auto* opt = cmd->add_option_function<std::uint64_t>(
            "--seed",
            [&](std::uint64_t s) {
                seed = s;
                have_seed = true;
            },
            "master seed (fans out to per-stage substreams)");
        if (required) opt->required();
        return opt;
    };

    auto* coverage = app.add_subcommand("coverage", "IFS cell-coverage curve");
    coverage->add_option("--config", config_path, "maps, start, resolution, budget")
        ->required();
    coverage->add_option("--out", out_dir, "output directory");
    add_seed(coverage, false);

    auto* detect = app.add_subcommand("detect", "detect essential invariant circles");
    detect->add_option("--config", config_path, "map, band, detection parameters")
        ->required();
    detect->add_option("--out", out_dir, "output directory");
    add_seed(detect, false);

    auto* separate = app.add_subcommand("separate", "end-to-end family separation");
    separate->add_option("--config", config_path, "maps, band, pipeline config")
        ->required();
    separate->add_option("--out", out_dir, "output directory");
    add_seed(separate, true);

    auto* boxdim = app.add_subcommand("boxdim", "box-dimension pipeline on a CSV cloud");
    boxdim->add_option("--in", in_path, "x,y,z CSV")->required();
    boxdim->add_option("--out", out_dir, "output directory");
    boxdim->add_option("--lo-exp", lo_exp, "smallest dyadic exponent (side 2^-e)");
    boxdim->add_option("--hi-exp", hi_exp, "largest dyadic exponent");
    boxdim->add_flag("--chain", chain, "verify the chain property / sum embedding");
    boxdim->add_option("--against", against, "second cloud: search a separating translation");
    boxdim->add_option("--epsilon", epsilon, "translation bound");
    boxdim->add_option("--margin", margin, "required sup-norm separation");
    boxdim->add_option("--budget", budget, "sample budget");
    add_seed(boxdim, false);

    auto* frontier = app.add_subcommand("frontier", "extract the frontier of a PBM continuum");
    frontier->add_option("--in", in_path, "P1 bitmap")->required();
    frontier->add_option("--out", out_dir, "output directory");
    frontier->add_option("--band-lo", band_lo, "ambient band low edge");
    frontier->add_option("--band-hi", band_hi, "ambient band high edge");

    auto* oracle = app.add_subcommand("finite-oracle",
                                      "exact transitivity equivalence on finite models");
    oracle->add_option("--models", models, "number of random models");
    oracle->add_option("--max-n", max_n, "largest ground-set size");
    add_seed(oracle, true);

    auto* audit = app.add_subcommand("jacobian-audit", "finite-difference area audit");
    audit->add_option("--points", points, "sample points per map");
    audit->add_option("--step", step, "finite-difference step");
    audit->add_option("--config", config_path, "optional: audit a single config map");
    add_seed(audit, true);

    CLI11_PARSE(app, argc, argv);

    try {
        if (coverage->parsed()) return cmd_coverage(config_path, out_dir);
        if (detect->parsed()) return cmd_detect(config_path, out_dir);
        if (separate->parsed()) return cmd_separate(config_path, out_dir, seed);
        if (boxdim->parsed()) {
            if (!against.empty() && !have_seed) {
                std::fprintf(stderr, "boxdim --against needs --seed\n");
                return kExitUsage;
            }
            return cmd_boxdim(in_path, out_dir, lo_exp, hi_exp, chain, against, epsilon,
                              margin, budget, seed);
        }
        if (frontier->parsed()) return cmd_frontier(in_path, out_dir, band_lo, band_hi);
        if (oracle->parsed()) return cmd_finite_oracle(models, max_n, seed);
        if (audit->parsed()) return cmd_jacobian_audit(points, seed, step, config_path);
    } catch (const VerificationFailed& e) {
        std::fprintf(stderr, "verification failed: %s\n", e.what());
        return kExitVerification;
    } catch (const NotEmptyInterior& e) {
        std::fprintf(stderr, "NotEmptyInterior: %s\n", e.what());
        return kExitVerification;
    } catch (const NotAnnular& e) {
        std::fprintf(stderr, "NotAnnular: %s\n", e.what());
        return kExitVerification;
    } catch (const BudgetExhausted& e) {
        std::fprintf(stderr, "budget exhausted: %s\n", e.what());
        return kExitVerification;
    } catch (const NoneFound& e) {
        std::fprintf(stderr, "none found: %s\n", e.what());
        return kExitVerification;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }
    return kExitUsage;
}
