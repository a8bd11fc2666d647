#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ifslab/bump_flow.hpp"
#include "ifslab/chart.hpp"

namespace ifslab {

enum class KickShape { Sine, TwoHarmonic };

namespace detail {
class MapNode;
}

/// Immutable descriptor of an exactly area-preserving self-map of a chart.
/// Values are cheap to copy (shared descriptor graph) and evaluation is pure,
/// so a single map may be evaluated from many threads.
class AreaMap {
public:
    const Chart& chart() const;

    ChartPoint apply(ChartPoint p) const;
    ChartPoint apply_inverse(ChartPoint p) const;

    /// Image together with the unreduced horizontal displacement (the lift
    /// used by rotation-number estimation on the annulus). Closed-form kinds
    /// report their exact lift; near-identity kinds use the shortest
    /// representative.
    std::pair<ChartPoint, double> apply_with_lift(ChartPoint p) const;

    std::string kind_name() const;
    nlohmann::json to_json() const;
    static AreaMap from_json(const nlohmann::json& j);

    static AreaMap identity(Chart chart);

    /// (x, y) -> (x + slope*y + offset mod 1, y); requires a wrapped x axis.
    static AreaMap integrable_twist(Chart chart, double slope, double offset = 0.0);

    /// (x, y) -> (x + y' mod 1, y') with y' = y + (k/2pi) s(2pi x). On the
    /// torus y' wraps; on the annulus an image outside [0,1] raises
    /// DomainError, so the kick must be small enough for the orbits in use.
    static AreaMap kicked_twist(Chart chart, double kick, KickShape shape = KickShape::Sine);

    /// Composition of the three bump flows of a separator spec (unit square).
    static AreaMap separator(SeparatorSpec spec);

    /// maps[0] applied first.
    static AreaMap composite(std::vector<AreaMap> maps);

    static AreaMap inverse(AreaMap m);

    /// h o g o h^{-1} on a shared chart.
    static AreaMap conjugate(AreaMap g, AreaMap h);

    /// Annulus map acting as `square_map` on the band (affinely identified
    /// with the unit square) and as the identity outside. The square map must
    /// be the identity near the square boundary for the extension to be
    /// continuous; separator maps are.
    static AreaMap band_embedded(AreaMap square_map, Band band);

private:
    explicit AreaMap(std::shared_ptr<const detail::MapNode> node);
    std::shared_ptr<const detail::MapNode> node_;
};

/// Same composition as AreaMap::conjugate; named entry point for the zoo.
AreaMap conjugate(const AreaMap& g, const AreaMap& h);

/// Separator map h = phi_1^{t1} o phi_2^{t2} o phi_3^{t3} from a validated
/// spec. Identity near the square boundary; area-preserving within the
/// integrator audit tolerance.
AreaMap build_separator(const SeparatorSpec& spec);

/// Central finite-difference Jacobian determinant. Step must lie in
/// [1e-7, 1e-4]; displacements are taken with wrap-aware differences.
double jacobian_det(const AreaMap& m, ChartPoint p, double step = 1e-5);

}  // namespace ifslab
