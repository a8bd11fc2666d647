#include "ifslab/detect.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "ifslab/errors.hpp"

namespace ifslab {

RotationNumberEstimate rotation_number(const AreaMap& f, ChartPoint p, int iterations) {
    if (iterations < 100) throw SpecError("rotation_number: need >= 100 iterations");
    if (!f.chart().wraps_x())
        throw ChartMismatch("rotation_number: map must live on a wrapped-x chart");

    double lift = 0.0;
    double lift_half = 0.0;
    ChartPoint q = p;
    try {
        for (int k = 0; k < iterations; ++k) {
            auto [next, dx] = f.apply_with_lift(q);
            lift += dx;
            if (k == iterations / 2 - 1) lift_half = lift;
            q = next;
        }
    } catch (const DomainError& e) {
        throw EscapedBand(std::string("rotation_number: orbit left the chart: ") + e.what());
    }

    RotationNumberEstimate est;
    est.iterations = iterations;
    est.value = wrap_unit(lift / iterations);
    est.residual = std::abs(lift / iterations - lift_half / (iterations / 2));
    return est;
}

namespace {

bool near_low_order_rational(double value, int max_q, double tol) {
    for (int q = 1; q <= max_q; ++q) {
        const double scaled = value * q;
        if (std::abs(scaled - std::round(scaled)) <= tol * q) return true;
    }
    return false;
}

AreaMap power_of(const AreaMap& f, int n) {
    if (n == 1) return f;
    std::vector<AreaMap> maps(static_cast<std::size_t>(n), f);
    return AreaMap::composite(std::move(maps));
}

}  // namespace

DetectionResult detect_circle_family(const AreaMap& f, const Band& band,
                                     const DetectParams& params) {
    if (params.count < 1) throw SpecError("detect_circle_family: count must be >= 1");
    if (params.power < 1) throw SpecError("detect_circle_family: power must be >= 1");
    if (!(f.chart() == Chart::annulus()))
        throw ChartMismatch("detect_circle_family: annulus chart required");

    const AreaMap fn = power_of(f, params.power);
    const int T = params.iterations;
    const int bins = params.bins;

    DetectionResult result;
    std::vector<GridContinuum> accepted;

    const int max_seeds = params.count * params.max_seed_factor;
    const double spacing = band.span() / params.count;
    constexpr double kGoldenOffset = 0.30901699437494742;  // irrational seed shift
    constexpr double kGoldenRatio = 0.61803398874989485;

    // First pass: evenly spaced seeds with an irrational offset. Rejected
    // seeds are replaced from a low-discrepancy fill.
    auto seed_height = [&](int s) {
        if (s < params.count) return band.lo + (s + kGoldenOffset) * spacing;
        const double u = std::fmod((s - params.count + 1) * kGoldenRatio, 1.0);
        return band.lo + u * band.span();
    };

    for (int s = 0; s < max_seeds && static_cast<int>(accepted.size()) < params.count; ++s) {
        CircleCandidate cand;
        cand.seed = {params.seed_x, seed_height(s)};

        // (a) orbit confined to the band
        std::vector<ChartPoint> samples;
        samples.reserve(T);
        ChartPoint q = cand.seed;
        double lift = 0.0, lift_half = 0.0;
        bool escaped = false;
        try {
            for (int k = 0; k < T; ++k) {
                auto [next, dx] = fn.apply_with_lift(q);
                lift += dx;
                if (k == T / 2 - 1) lift_half = lift;
                q = next;
                if (!band.contains(q.y)) {
                    escaped = true;
                    break;
                }
                samples.push_back(q);
            }
        } catch (const DomainError&) {
            escaped = true;
        }
        if (escaped) {
            cand.rejection = "escaped band";
            result.candidates.push_back(std::move(cand));
            continue;
        }

        cand.rotation.iterations = T;
        cand.rotation.value = wrap_unit(lift / T);
        cand.rotation.residual = std::abs(lift / T - lift_half / (T / 2));

        // (b) rotation estimate converged
        if (!(cand.rotation.residual < 1.0 / std::sqrt(static_cast<double>(T)))) {
            cand.rejection = "rotation residual";
            result.candidates.push_back(std::move(cand));
            continue;
        }
        // (c) aperiodicity proxy: no low-order rational rotation
        if (near_low_order_rational(cand.rotation.value, 20, 1e-6)) {
            cand.rejection = "rational rotation";
            result.candidates.push_back(std::move(cand));
            continue;
        }

        // (d) every angular bin occupied, with small vertical spread
        std::vector<double> bin_lo(bins, 1e300), bin_hi(bins, -1e300);
        for (const ChartPoint& pt : samples) {
            const int b = std::min(bins - 1, static_cast<int>(pt.x * bins));
            bin_lo[b] = std::min(bin_lo[b], pt.y);
            bin_hi[b] = std::max(bin_hi[b], pt.y);
        }
        bool all_occupied = true;
        double spread = 0;
        for (int b = 0; b < bins; ++b) {
            if (bin_hi[b] < bin_lo[b]) {
                all_occupied = false;
                break;
            }
            spread = std::max(spread, bin_hi[b] - bin_lo[b]);
        }
        cand.spread = spread;
        if (!all_occupied) {
            cand.rejection = "empty angular bin";
            result.candidates.push_back(std::move(cand));
            continue;
        }
        if (!(spread < params.spread_tol)) {
            cand.rejection = "spread";
            result.candidates.push_back(std::move(cand));
            continue;
        }

        // rasterize the circle: sort by angle and close the loop
        std::sort(samples.begin(), samples.end(),
                  [](ChartPoint a, ChartPoint b) { return a.x < b.x; });
        samples.push_back(samples.front());
        GridContinuum raster = rasterize(samples, f.chart(), params.resolution);
        samples.pop_back();

        if (!is_essential(raster, band)) {
            cand.rejection = "not essential";
            result.candidates.push_back(std::move(cand));
            continue;
        }
        if (invariance_residual(fn, raster, 256) != 0.0) {
            cand.rejection = "not invariant at grid scale";
            result.candidates.push_back(std::move(cand));
            continue;
        }

        cand.samples = std::move(samples);
        cand.accepted = true;
        result.candidates.push_back(std::move(cand));
        accepted.push_back(std::move(raster));
    }

    if (accepted.empty())
        throw NoneFound("detect_circle_family: no circle candidate accepted");
    result.family = ContinuumFamily::assemble(std::move(accepted));
    return result;
}

double invariance_residual(const AreaMap& f, const GridContinuum& k, int samples) {
    if (samples < 1) throw SpecError("invariance_residual: need >= 1 sample");
    const auto cells = k.cells().cells();
    const int n = k.resolution();
    const std::size_t stride = std::max<std::size_t>(1, cells.size() / samples);

    // dilate by one cell (8-neighborhood, wrap-aware)
    CellSet dilated = k.cells();
    for (const CellIndex c : cells) {
        for (int di = -1; di <= 1; ++di) {
            for (int dj = -1; dj <= 1; ++dj) {
                int i = c.i + di, j = c.j + dj;
                if (k.chart().wraps_x()) i = (i % n + n) % n;
                if (k.chart().wraps_y()) j = (j % n + n) % n;
                if (i >= 0 && i < n && j >= 0 && j < n) dilated.set(i, j);
            }
        }
    }

    std::size_t tested = 0, outside = 0;
    for (std::size_t c = 0; c < cells.size(); c += stride) {
        ++tested;
        ChartPoint image;
        try {
            image = f.apply(cell_center(cells[c], n));
        } catch (const DomainError&) {
            ++outside;
            continue;
        }
        if (!dilated.test(cell_of(k.chart(), image, n))) ++outside;
    }
    return static_cast<double>(outside) / static_cast<double>(tested);
}

void write_candidates_csv(const std::string& path,
                          const std::vector<CircleCandidate>& candidates) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open for writing: " + path);
    os << "seed_y,accepted,rotation,residual,spread,rejection\n";
    char buf[160];
    for (const CircleCandidate& c : candidates) {
        std::snprintf(buf, sizeof buf, "%.17g,%d,%.17g,%.17g,%.17g,", c.seed.y,
                      c.accepted ? 1 : 0, c.rotation.value, c.rotation.residual,
                      c.spread);
        os << buf << c.rejection << "\n";
    }
}

}  // namespace ifslab
