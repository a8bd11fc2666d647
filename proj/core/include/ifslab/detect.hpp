#pragma once

#include <string>
#include <vector>

#include "ifslab/area_map.hpp"
#include "ifslab/grid_continuum.hpp"

namespace ifslab {

struct RotationNumberEstimate {
    double value = 0;     // mod 1, in [0, 1)
    int iterations = 0;
    double residual = 0;  // |Birkhoff average at T - average at T/2|
};

/// Average lifted horizontal displacement along the orbit of p under an
/// annulus map. Throws EscapedBand if the orbit leaves the chart.
RotationNumberEstimate rotation_number(const AreaMap& f, ChartPoint p, int iterations);

struct CircleCandidate {
    ChartPoint seed;
    std::vector<ChartPoint> samples;  // sorted by angle when accepted
    RotationNumberEstimate rotation;
    double spread = 0;         // max vertical extent of an angular bin
    bool accepted = false;
    std::string rejection;     // empty when accepted
};

struct DetectParams {
    int power = 1;            // detect circles of f^power
    int count = 10;           // target family size
    int iterations = 8192;    // orbit length per seed
    double spread_tol = 0.05;
    int resolution = 256;     // rasterization grid
    int bins = 64;            // angular bins for the occupancy/spread gates
    double seed_x = 0.5;      // transversal abscissa
    int max_seed_factor = 4;  // give up after count * factor seeds
};

struct DetectionResult {
    ContinuumFamily family;
    std::vector<CircleCandidate> candidates;
};

/// Sweep a vertical transversal of the band with evenly spaced seeds (offset
/// by an irrational fraction of the spacing so exact low-order rational
/// heights are not hit); accept a seed when its orbit stays in the band, the
/// rotation estimate has converged, the rotation value is not within 1e-6 of
/// a rational p/q with q <= 20, every angular bin is occupied with vertical
/// spread below tolerance, and the rasterized circle is essential and
/// invariant at grid scale. Accepted circles are assembled into a pairwise
/// disjoint family (the later of an overlapping pair is dropped). Throws
/// NoneFound when no seed is accepted.
DetectionResult detect_circle_family(const AreaMap& f, const Band& band,
                                     const DetectParams& params);

/// Fraction of sampled continuum cells whose center image lands outside the
/// continuum dilated by one cell; zero means invariant at grid scale.
double invariance_residual(const AreaMap& f, const GridContinuum& k, int samples);

/// Candidate diagnostics as CSV (seed_y, accepted, rotation, residual,
/// spread, rejection).
void write_candidates_csv(const std::string& path,
                          const std::vector<CircleCandidate>& candidates);

}  // namespace ifslab
