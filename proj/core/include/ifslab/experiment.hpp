#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "ifslab/area_map.hpp"
#include "ifslab/boxdim.hpp"
#include "ifslab/detect.hpp"
#include "ifslab/grid_continuum.hpp"
#include "ifslab/ifs.hpp"

namespace ifslab {

struct SeparationConfig {
    int power = 1;                  // separate families of f^n and g^n
    double delta = 0.125;           // vertical margin after the band-to-square map
    int raster_resolution = 256;    // grid for family rasters
    int separation_resolution = 64; // N: search margin 2/N, witness margin 1/N
    int detect_count = 50;
    int detect_iterations = 8192;
    double detect_spread_tol = 0.05;
    double plateau_margin = 0.04;   // separator translation-law bound
    int translation_budget = 1000;
    int coverage_resolution = 32;
    int coverage_budget = 10000;
    ChartPoint coverage_start{0.51, 0.5};
    std::uint64_t seed = 1;
    bool force_zero_translation = false;  // negative control
};

void to_json(nlohmann::json& j, const SeparationConfig& c);
void from_json(const nlohmann::json& j, SeparationConfig& c);

/// One verified pair: the column where the translated member and the other
/// family's member have max heights differing by more than one cell width.
struct PairWitness {
    int translated_index = 0;  // member of h(K(g^n))
    int fixed_index = 0;       // member of K(f^n)
    int column = 0;            // 0..2
    double difference = 0;
};

struct SeparationOutcome {
    bool trivially_separated = false;  // one family was empty
    DetectionResult detection_f;
    DetectionResult detection_g;
    ContinuumFamily square_family_f;  // band mapped onto the unit square
    ContinuumFamily square_family_g;
    ContinuumFamily translated_family_g;  // h applied to the square g-family
    SeparatorSpec separator;
    std::array<double, 3> translation{};
    std::vector<PairWitness> verification;
    double min_witness_margin = 0;
    CoverageReport coverage_before;
    CoverageReport coverage_after;
    AreaMap conjugated_g;

    nlohmann::json summary_json() const;
};

/// End-to-end pipeline: detect both invariant circle families in the band,
/// identify the padded band with the unit square, build the three-bump
/// separator from a verified translation of the coordinate triples,
/// conjugate g by the embedded separator, verify that every pair of members
/// is separated at some column by more than one cell width, and compare IFS
/// coverage before and after from the same start. Throws NoneFound /
/// BudgetExhausted from the stages and VerificationFailed when a pair has no
/// witnessing column.
SeparationOutcome run_separation(const AreaMap& f, const AreaMap& g, const Band& band,
                                 const SeparationConfig& config);

struct ClosednessProbe {
    GridContinuum limit;
    std::vector<double> invariance_residuals;  // one per supplied map
    GridContinuum frontier;                    // extract_frontier of the limit
};

/// Grid Hausdorff limit of a monotone family, taken as the boundary of the
/// union of the members' lower components; needs at least three members
/// (NotMonotone otherwise).
ClosednessProbe closedness_probe(const ContinuumFamily& family,
                                 std::span<const AreaMap> maps, const Band& ambient);

}  // namespace ifslab
