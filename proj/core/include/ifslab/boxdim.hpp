#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ifslab/rng.hpp"

namespace ifslab {

/// Finite point set in the unit cube, deduplicated to 1e-12.
class PointCloud3 {
public:
    static PointCloud3 from_points(std::vector<std::array<double, 3>> pts);

    const std::vector<std::array<double, 3>>& points() const { return pts_; }
    std::size_t size() const { return pts_.size(); }

    PointCloud3 translated(std::array<double, 3> t) const;

private:
    std::vector<std::array<double, 3>> pts_;
};

/// Number of origin-anchored grid boxes of the given side meeting the cloud.
std::int64_t box_count(const PointCloud3& cloud, double side);

struct DimensionEstimate {
    std::vector<double> sides;
    std::vector<std::int64_t> counts;
    double slope = 0;         // log-log least squares
    double slope_stderr = 0;  // standard error of the slope
};

/// Log-log slope of counts against 1/side over the given sides. Needs at
/// least 16 points and 4 scales; throws DegenerateFit when all counts agree.
DimensionEstimate upper_box_dimension(const PointCloud3& cloud,
                                      std::span<const double> sides);

/// Dyadic sides 2^-lo .. 2^-hi.
std::vector<double> dyadic_sides(int lo_exp, int hi_exp);

/// Image of a chain under (x1,x2,x3) -> x1+x2+x3, sorted. On a chain the map
/// is injective and the l1 distance of any two points equals the difference
/// of their images. Throws NotChain with a violating pair otherwise.
std::vector<double> sum_embed(const PointCloud3& cloud);

/// Search for a translation t in (-epsilon, epsilon)^3 such that every point
/// of a + t is farther than `margin` from every point of a_prime in the
/// sup norm. t = 0 is tried first; then seeded uniform samples. The returned
/// translation always passes the exhaustive pairwise check; BudgetExhausted
/// carries the best margin seen.
std::array<double, 3> find_separating_translation(const PointCloud3& a,
                                                  const PointCloud3& a_prime,
                                                  double epsilon, double margin,
                                                  int budget, Rng rng);

/// Exhaustive verification predicate used by the search.
bool translation_separates(const PointCloud3& a, const PointCloud3& a_prime,
                           std::array<double, 3> t, double margin);

/// CSV with one x,y,z row per point at 17 significant digits.
void write_cloud_csv(const std::string& path, const PointCloud3& cloud);
PointCloud3 read_cloud_csv(const std::string& path);

}  // namespace ifslab
