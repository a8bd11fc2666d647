#include "ifslab/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "ifslab/errors.hpp"
#include "ifslab/rng.hpp"

namespace ifslab {

void to_json(nlohmann::json& j, const SeparationConfig& c) {
    j = nlohmann::json{{"power", c.power},
                       {"delta", c.delta},
                       {"raster_resolution", c.raster_resolution},
                       {"separation_resolution", c.separation_resolution},
                       {"detect_count", c.detect_count},
                       {"detect_iterations", c.detect_iterations},
                       {"detect_spread_tol", c.detect_spread_tol},
                       {"plateau_margin", c.plateau_margin},
                       {"translation_budget", c.translation_budget},
                       {"coverage_resolution", c.coverage_resolution},
                       {"coverage_budget", c.coverage_budget},
                       {"coverage_start", {c.coverage_start.x, c.coverage_start.y}},
                       {"seed", c.seed},
                       {"force_zero_translation", c.force_zero_translation}};
}

void from_json(const nlohmann::json& j, SeparationConfig& c) {
    c.power = j.value("power", c.power);
    c.delta = j.value("delta", c.delta);
    c.raster_resolution = j.value("raster_resolution", c.raster_resolution);
    c.separation_resolution = j.value("separation_resolution", c.separation_resolution);
    c.detect_count = j.value("detect_count", c.detect_count);
    c.detect_iterations = j.value("detect_iterations", c.detect_iterations);
    c.detect_spread_tol = j.value("detect_spread_tol", c.detect_spread_tol);
    c.plateau_margin = j.value("plateau_margin", c.plateau_margin);
    c.translation_budget = j.value("translation_budget", c.translation_budget);
    c.coverage_resolution = j.value("coverage_resolution", c.coverage_resolution);
    c.coverage_budget = j.value("coverage_budget", c.coverage_budget);
    if (j.contains("coverage_start")) {
        c.coverage_start.x = j["coverage_start"].at(0).get<double>();
        c.coverage_start.y = j["coverage_start"].at(1).get<double>();
    }
    c.seed = j.value("seed", c.seed);
    c.force_zero_translation = j.value("force_zero_translation", c.force_zero_translation);
}

namespace {

// Re-rasterize an annulus member into unit-square coordinates via the affine
// band-to-square identification.
GridContinuum band_to_square(const GridContinuum& member, const Band& qband,
                             int resolution) {
    const int n = member.resolution();
    std::vector<ChartPoint> pts;
    for (const CellIndex c : member.cells().cells()) {
        const ChartPoint p = cell_center(c, n);
        pts.push_back({p.x, (p.y - qband.lo) / qband.span()});
    }
    std::sort(pts.begin(), pts.end(), [](ChartPoint a, ChartPoint b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    return rasterize(pts, Chart::square(), resolution);
}

GridContinuum apply_square_map(const GridContinuum& member, const AreaMap& h) {
    const int n = member.resolution();
    std::vector<ChartPoint> pts;
    for (const CellIndex c : member.cells().cells()) pts.push_back(cell_center(c, n));
    std::sort(pts.begin(), pts.end(), [](ChartPoint a, ChartPoint b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    for (ChartPoint& p : pts) p = h.apply(p);
    return rasterize(pts, Chart::square(), n);
}

// Triple of max heights at the three columns; no margin check (translated
// members may legitimately leave the margin bands).
std::array<double, 3> triple_at_columns(const GridContinuum& k,
                                        const std::array<double, 3>& xs) {
    const int n = k.resolution();
    std::array<double, 3> out{};
    for (int c = 0; c < 3; ++c) {
        const int col = cell_of(k.chart(), {xs[c], 0.0}, n).i;
        int best = -1;
        for (int j = n - 1; j >= 0 && best < 0; --j)
            if (k.cells().test(col, j)) best = j;
        if (best < 0) throw ColumnMiss("triple_at_columns: column misses the member");
        out[c] = (best + 0.5) / n;
    }
    return out;
}

ContinuumFamily detect_or_empty(const AreaMap& m, const Band& band,
                                const DetectParams& params, DetectionResult& out) {
    try {
        out = detect_circle_family(m, band, params);
    } catch (const NoneFound&) {
        out = DetectionResult{};
    }
    return out.family;
}

}  // namespace

SeparationOutcome run_separation(const AreaMap& f, const AreaMap& g, const Band& band,
                                 const SeparationConfig& config) {
    if (!(f.chart() == Chart::annulus() && g.chart() == Chart::annulus()))
        throw ChartMismatch("run_separation: annulus maps required");
    if (!(config.delta > 0 && config.delta < 0.5))
        throw SpecError("run_separation: delta must lie in (0, 1/2)");

    const Rng master(config.seed);

    DetectParams detect;
    detect.power = config.power;
    detect.count = config.detect_count;
    detect.iterations = config.detect_iterations;
    detect.spread_tol = config.detect_spread_tol;
    detect.resolution = config.raster_resolution;

    SeparationOutcome outcome{.separator = SeparatorSpec::standard(config.delta,
                                                                   config.plateau_margin),
                              .coverage_before = {},
                              .coverage_after = {},
                              .conjugated_g = g};

    detect_or_empty(f, band, detect, outcome.detection_f);
    detect_or_empty(g, band, detect, outcome.detection_g);

    const int cov_n = config.coverage_resolution;
    outcome.coverage_before = coverage_test(f, g, config.coverage_start, cov_n,
                                            config.coverage_budget);

    if (outcome.detection_f.family.empty() || outcome.detection_g.family.empty()) {
        // Nothing to separate: the conjugation short-circuits to g itself.
        outcome.trivially_separated = true;
        outcome.coverage_after = outcome.coverage_before;
        return outcome;
    }

    // Affine identification of the padded band with the unit square; the pad
    // is chosen so the band lands exactly on [delta, 1-delta].
    const double pad = config.delta * band.span() / (1.0 - 2.0 * config.delta);
    const Band qband{band.lo - pad, band.hi + pad};
    if (qband.lo < 0.0 || qband.hi > 1.0)
        throw SpecError("run_separation: padded band leaves the annulus; shrink delta");

    auto to_square_family = [&](const ContinuumFamily& family) {
        std::vector<GridContinuum> members;
        for (const GridContinuum& m : family.members())
            members.push_back(band_to_square(m, qband, config.raster_resolution));
        return ContinuumFamily::assemble(std::move(members));
    };
    outcome.square_family_f = to_square_family(outcome.detection_f.family);
    outcome.square_family_g = to_square_family(outcome.detection_g.family);

    const std::array<double, 3> columns{outcome.separator.bumps[0].line_x,
                                        outcome.separator.bumps[1].line_x,
                                        outcome.separator.bumps[2].line_x};
    const auto a_f = chain_coordinates(outcome.square_family_f, columns[0], columns[1],
                                       columns[2], config.delta);
    const auto a_g = chain_coordinates(outcome.square_family_g, columns[0], columns[1],
                                       columns[2], config.delta);
    const PointCloud3 cloud_f = PointCloud3::from_points(
        std::vector<std::array<double, 3>>(a_f.begin(), a_f.end()));
    const PointCloud3 cloud_g = PointCloud3::from_points(
        std::vector<std::array<double, 3>>(a_g.begin(), a_g.end()));

    const int sep_n = config.separation_resolution;
    const double margin = 2.0 / sep_n;
    if (config.force_zero_translation) {
        outcome.translation = {0.0, 0.0, 0.0};
    } else {
        outcome.translation = find_separating_translation(
            cloud_g, cloud_f, outcome.separator.epsilon(), margin,
            config.translation_budget, master.substream("translation"));
    }

    outcome.separator.times = outcome.translation;
    outcome.separator.validate();
    const AreaMap h = build_separator(outcome.separator);
    outcome.conjugated_g = AreaMap::conjugate(g, AreaMap::band_embedded(h, qband));

    // Pairwise verification at grid scale: some column must separate the
    // translated member from the fixed one by more than a cell width.
    {
        std::vector<GridContinuum> translated;
        for (const GridContinuum& m : outcome.square_family_g.members())
            translated.push_back(apply_square_map(m, h));

        const double witness_margin = 1.0 / sep_n;
        outcome.min_witness_margin = 1e300;
        int failing = 0;
        for (std::size_t a = 0; a < translated.size(); ++a) {
            const auto ta = triple_at_columns(translated[a], columns);
            for (std::size_t b = 0; b < outcome.square_family_f.size(); ++b) {
                const auto tb = triple_at_columns(outcome.square_family_f.members()[b],
                                                  columns);
                int best_col = -1;
                double best_diff = 0;
                for (int c = 0; c < 3; ++c) {
                    const double d = std::abs(ta[c] - tb[c]);
                    if (d > best_diff) {
                        best_diff = d;
                        best_col = c;
                    }
                }
                if (best_col < 0 || best_diff <= witness_margin) {
                    ++failing;
                    continue;
                }
                outcome.verification.push_back({static_cast<int>(a),
                                                static_cast<int>(b), best_col,
                                                best_diff});
                outcome.min_witness_margin = std::min(outcome.min_witness_margin,
                                                      best_diff);
            }
        }
        if (failing > 0)
            throw VerificationFailed(
                "run_separation: " + std::to_string(failing) +
                    " pair(s) have no witnessing column; the translation is too "
                    "small for the grid scale",
                failing);
        outcome.translated_family_g = ContinuumFamily::assemble(std::move(translated));
    }

    outcome.coverage_after = coverage_test(f, outcome.conjugated_g,
                                           config.coverage_start, cov_n,
                                           config.coverage_budget);
    return outcome;
}

nlohmann::json SeparationOutcome::summary_json() const {
    nlohmann::json j;
    j["trivially_separated"] = trivially_separated;
    j["family_f_size"] = detection_f.family.size();
    j["family_g_size"] = detection_g.family.size();
    j["translation"] = translation;
    j["separator_epsilon"] = separator.epsilon();
    j["min_witness_margin"] = min_witness_margin;
    j["verified_pairs"] = verification.size();
    nlohmann::json pairs = nlohmann::json::array();
    for (const PairWitness& w : verification)
        pairs.push_back({w.translated_index, w.fixed_index, w.column, w.difference});
    j["verification"] = pairs;
    j["coverage_before"] = {{"resolution", coverage_before.resolution},
                            {"covered", coverage_before.covered},
                            {"fraction", coverage_before.final_fraction()},
                            {"saturated", coverage_before.saturated}};
    j["coverage_after"] = {{"resolution", coverage_after.resolution},
                           {"covered", coverage_after.covered},
                           {"fraction", coverage_after.final_fraction()},
                           {"saturated", coverage_after.saturated}};
    return j;
}

ClosednessProbe closedness_probe(const ContinuumFamily& family,
                                 std::span<const AreaMap> maps, const Band& ambient) {
    if (family.size() < 3)
        throw NotMonotone("closedness_probe: need at least three members");

    const int n = family.members().front().resolution();
    const Chart chart = family.members().front().chart();

    CellSet lower_union(n);
    for (const GridContinuum& m : family.members()) {
        const FrontierDecomposition d = extract_frontier(m, ambient);
        lower_union |= d.lower;
    }

    // boundary of the union: cells outside it that touch it (8-adjacency)
    CellSet boundary(n);
    const int row_lo = ambient.first_row(n), row_hi = ambient.last_row(n);
    for (int j = row_lo; j <= row_hi; ++j) {
        for (int i = 0; i < n; ++i) {
            if (lower_union.test(i, j)) continue;
            bool touches = false;
            for (int di = -1; di <= 1 && !touches; ++di) {
                for (int dj = -1; dj <= 1 && !touches; ++dj) {
                    if (di == 0 && dj == 0) continue;
                    int oi = i + di, oj = j + dj;
                    if (chart.wraps_x()) oi = (oi % n + n) % n;
                    if (oi < 0 || oi >= n || oj < row_lo || oj > row_hi) continue;
                    if (lower_union.test(oi, oj)) touches = true;
                }
            }
            if (touches) boundary.set(i, j);
        }
    }

    GridContinuum limit = GridContinuum::from_cells(chart, std::move(boundary));
    ClosednessProbe probe{limit, {}, extract_frontier(limit, ambient).frontier};
    for (const AreaMap& m : maps)
        probe.invariance_residuals.push_back(invariance_residual(m, limit, 256));
    return probe;
}

}  // namespace ifslab
