#pragma once

#include <compare>

#include "ifslab/errors.hpp"

namespace ifslab {

enum class ChartKind { Square, Annulus, Torus };

/// One of the three model surfaces in unit-normalized coordinates:
/// the square [0,1]^2, the flat annulus S^1 x [0,1] (axis 0 wraps), and the
/// flat torus (both axes wrap).
struct Chart {
    ChartKind kind = ChartKind::Square;

    static constexpr Chart square() { return {ChartKind::Square}; }
    static constexpr Chart annulus() { return {ChartKind::Annulus}; }
    static constexpr Chart torus() { return {ChartKind::Torus}; }

    constexpr bool wraps_x() const { return kind != ChartKind::Square; }
    constexpr bool wraps_y() const { return kind == ChartKind::Torus; }

    friend constexpr bool operator==(Chart, Chart) = default;
};

struct ChartPoint {
    double x = 0;
    double y = 0;
};

struct Vec2 {
    double x = 0;
    double y = 0;
};

struct CellIndex {
    int i = 0;
    int j = 0;
    friend constexpr auto operator<=>(CellIndex, CellIndex) = default;
};

/// Closed horizontal band lo <= y <= hi of a chart.
struct Band {
    double lo = 0;
    double hi = 1;

    double span() const { return hi - lo; }
    bool contains(double y) const { return y >= lo && y <= hi; }

    /// Cell rows covered by the band at a resolution (inclusive range).
    int first_row(int resolution) const;
    int last_row(int resolution) const;
};

/// Reduce to [0, 1); exact integers map to 0.
double wrap_unit(double x);

/// Wrap the wrapped axes and validate the others (tolerance 1e-9 at the
/// endpoints, clamped). Throws DomainError for points off the chart.
ChartPoint reduce(const Chart& chart, ChartPoint p);

bool valid_point(const Chart& chart, ChartPoint p);

/// Metric respecting the wrap flags: per-axis shortest representative,
/// combined Euclideanly.
double chart_distance(const Chart& chart, ChartPoint p, ChartPoint q);

/// Shortest representative of (to - from); wrapped axes reduced to
/// [-1/2, 1/2).
Vec2 displacement(const Chart& chart, ChartPoint from, ChartPoint to);

/// Cell of a point at resolution N. Wrapped axes reduce mod 1 first; on an
/// unwrapped axis the endpoint 1 belongs to the last cell.
CellIndex cell_of(const Chart& chart, ChartPoint p, int resolution);

ChartPoint cell_center(CellIndex c, int resolution);

}  // namespace ifslab
