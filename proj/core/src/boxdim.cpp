#include "ifslab/boxdim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <tuple>

#include "ifslab/errors.hpp"

namespace ifslab {

PointCloud3 PointCloud3::from_points(std::vector<std::array<double, 3>> pts) {
    if (pts.empty()) throw SpecError("PointCloud3: empty point set");
    std::sort(pts.begin(), pts.end());
    std::vector<std::array<double, 3>> dedup;
    dedup.reserve(pts.size());
    constexpr double kTol = 1e-12;
    for (const auto& p : pts) {
        if (!dedup.empty()) {
            const auto& q = dedup.back();
            if (std::abs(p[0] - q[0]) <= kTol && std::abs(p[1] - q[1]) <= kTol &&
                std::abs(p[2] - q[2]) <= kTol)
                continue;
        }
        dedup.push_back(p);
    }
    PointCloud3 cloud;
    cloud.pts_ = std::move(dedup);
    return cloud;
}

PointCloud3 PointCloud3::translated(std::array<double, 3> t) const {
    std::vector<std::array<double, 3>> pts = pts_;
    for (auto& p : pts)
        for (int c = 0; c < 3; ++c) p[c] += t[c];
    PointCloud3 cloud;
    cloud.pts_ = std::move(pts);  // translation preserves dedup
    return cloud;
}

std::int64_t box_count(const PointCloud3& cloud, double side) {
    if (!(side > 0.0 && side <= 1.0)) throw SpecError("box_count: side must lie in (0, 1]");
    std::set<std::tuple<std::int64_t, std::int64_t, std::int64_t>> boxes;
    for (const auto& p : cloud.points()) {
        boxes.emplace(static_cast<std::int64_t>(std::floor(p[0] / side)),
                      static_cast<std::int64_t>(std::floor(p[1] / side)),
                      static_cast<std::int64_t>(std::floor(p[2] / side)));
    }
    return static_cast<std::int64_t>(boxes.size());
}

std::vector<double> dyadic_sides(int lo_exp, int hi_exp) {
    std::vector<double> sides;
    for (int e = lo_exp; e <= hi_exp; ++e) sides.push_back(std::ldexp(1.0, -e));
    return sides;
}

DimensionEstimate upper_box_dimension(const PointCloud3& cloud,
                                      std::span<const double> sides) {
    if (cloud.size() < 16) throw SpecError("upper_box_dimension: need >= 16 points");
    if (sides.size() < 4) throw SpecError("upper_box_dimension: need >= 4 scales");

    DimensionEstimate est;
    est.sides.assign(sides.begin(), sides.end());
    std::sort(est.sides.begin(), est.sides.end(), std::greater<>());
    for (double s : est.sides) est.counts.push_back(box_count(cloud, s));

    bool all_equal = true;
    for (std::size_t k = 1; k < est.counts.size(); ++k)
        if (est.counts[k] != est.counts[0]) all_equal = false;
    if (all_equal) throw DegenerateFit("upper_box_dimension: all box counts equal");

    // least squares of log(count) against log(1/side)
    const std::size_t m = est.sides.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < m; ++k) {
        const double x = std::log(1.0 / est.sides[k]);
        const double y = std::log(static_cast<double>(est.counts[k]));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = m * sxx - sx * sx;
    est.slope = (m * sxy - sx * sy) / denom;
    const double intercept = (sy - est.slope * sx) / m;
    double ss_res = 0;
    for (std::size_t k = 0; k < m; ++k) {
        const double x = std::log(1.0 / est.sides[k]);
        const double y = std::log(static_cast<double>(est.counts[k]));
        const double r = y - (intercept + est.slope * x);
        ss_res += r * r;
    }
    if (m > 2) est.slope_stderr = std::sqrt(ss_res / (m - 2) / (sxx - sx * sx / m));
    return est;
}

namespace {

// -1: p < q, 1: p > q, 0: equal; NotChain if incomparable.
int chain_cmp(const std::array<double, 3>& p, const std::array<double, 3>& q) {
    bool le = true, ge = true;
    for (int c = 0; c < 3; ++c) {
        if (p[c] > q[c]) le = false;
        if (p[c] < q[c]) ge = false;
    }
    if (le && ge) return 0;
    if (le) return -1;
    if (ge) return 1;
    throw NotChain("point cloud is not a chain in the coordinatewise order", p, q);
}

}  // namespace

std::vector<double> sum_embed(const PointCloud3& cloud) {
    // Sorting by coordinate sum sorts a chain; checking consecutive pairs is
    // then enough (comparability is transitive along the sorted order).
    std::vector<std::array<double, 3>> pts = cloud.points();
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
        return a[0] + a[1] + a[2] < b[0] + b[1] + b[2];
    });
    std::vector<double> image;
    image.reserve(pts.size());
    for (std::size_t k = 0; k < pts.size(); ++k) {
        if (k > 0) chain_cmp(pts[k - 1], pts[k]);
        image.push_back(pts[k][0] + pts[k][1] + pts[k][2]);
    }
    return image;
}

bool translation_separates(const PointCloud3& a, const PointCloud3& a_prime,
                           std::array<double, 3> t, double margin) {
    for (const auto& p : a.points()) {
        const double x = p[0] + t[0], y = p[1] + t[1], z = p[2] + t[2];
        for (const auto& q : a_prime.points()) {
            const double d = std::max({std::abs(x - q[0]), std::abs(y - q[1]),
                                       std::abs(z - q[2])});
            if (d <= margin) return false;
        }
    }
    return true;
}

namespace {

// Minimum pairwise sup distance, scanning no further once the running
// minimum drops to `floor` (the exact value is then irrelevant).
double min_pair_distance(const PointCloud3& a, const PointCloud3& a_prime,
                         std::array<double, 3> t, double floor) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : a.points()) {
        const double x = p[0] + t[0], y = p[1] + t[1], z = p[2] + t[2];
        for (const auto& q : a_prime.points()) {
            const double d = std::max({std::abs(x - q[0]), std::abs(y - q[1]),
                                       std::abs(z - q[2])});
            if (d < best) {
                best = d;
                if (best <= floor) return best;
            }
        }
    }
    return best;
}

}  // namespace

std::array<double, 3> find_separating_translation(const PointCloud3& a,
                                                  const PointCloud3& a_prime,
                                                  double epsilon, double margin,
                                                  int budget, Rng rng) {
    if (!(epsilon > 0)) throw SpecError("find_separating_translation: epsilon must be > 0");
    if (margin < 0) throw SpecError("find_separating_translation: margin must be >= 0");
    if (budget < 1) throw SpecError("find_separating_translation: budget must be >= 1");

    double best_margin = -1.0;
    std::array<double, 3> best_t{0, 0, 0};

    // As long as no sample has succeeded, best_margin <= margin, so a scan
    // aborted at the best_margin floor is already a certified failure and
    // the max-of-mins stays exact.
    auto try_translation = [&](std::array<double, 3> t) -> bool {
        const double m = min_pair_distance(a, a_prime, t, best_margin);
        if (m > margin) return true;
        if (m > best_margin) {
            best_margin = m;
            best_t = t;
        }
        return false;
    };

    const std::array<double, 3> zero{0, 0, 0};
    if (try_translation(zero)) return zero;
    for (int s = 0; s < budget; ++s) {
        const std::array<double, 3> t{rng.uniform(-epsilon, epsilon),
                                      rng.uniform(-epsilon, epsilon),
                                      rng.uniform(-epsilon, epsilon)};
        if (try_translation(t)) return t;
    }
    throw BudgetExhausted("find_separating_translation: no sample met the margin " +
                              std::to_string(margin) + " (best " +
                              std::to_string(best_margin) + ")",
                          best_margin, best_t);
}

void write_cloud_csv(const std::string& path, const PointCloud3& cloud) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open for writing: " + path);
    char buf[128];
    for (const auto& p : cloud.points()) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", p[0], p[1], p[2]);
        os << buf;
    }
}

PointCloud3 read_cloud_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error("cannot open for reading: " + path);
    std::vector<std::array<double, 3>> pts;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::array<double, 3> p{};
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        if (!(ss >> p[0] >> p[1] >> p[2]))
            throw Error("read_cloud_csv: malformed row: " + line);
        pts.push_back(p);
    }
    return PointCloud3::from_points(std::move(pts));
}

}  // namespace ifslab
