#include "ifslab/chart.hpp"

#include <algorithm>
#include <cmath>

namespace ifslab {

namespace {

constexpr double kEdgeTol = 1e-9;

double wrap_axis_delta(double d) {
    // shortest representative of d mod 1 in [-1/2, 1/2)
    d -= std::floor(d);
    if (d >= 0.5) d -= 1.0;
    return d;
}

double clamp_unwrapped(double x, const char* axis) {
    if (x < -kEdgeTol || x > 1.0 + kEdgeTol) {
        throw DomainError(std::string("coordinate ") + axis + " outside [0,1]: " +
                          std::to_string(x));
    }
    return std::clamp(x, 0.0, 1.0);
}

}  // namespace

int Band::first_row(int resolution) const {
    const int j = static_cast<int>(std::lround(lo * resolution));
    return std::clamp(j, 0, resolution - 1);
}

int Band::last_row(int resolution) const {
    const int j = static_cast<int>(std::lround(hi * resolution)) - 1;
    return std::clamp(j, 0, resolution - 1);
}

double wrap_unit(double x) {
    double r = x - std::floor(x);
    if (r >= 1.0) r = 0.0;  // guards x = -eps rounding up
    return r;
}

ChartPoint reduce(const Chart& chart, ChartPoint p) {
    ChartPoint q = p;
    if (chart.wraps_x())
        q.x = wrap_unit(q.x);
    else
        q.x = clamp_unwrapped(q.x, "x");
    if (chart.wraps_y())
        q.y = wrap_unit(q.y);
    else
        q.y = clamp_unwrapped(q.y, "y");
    return q;
}

bool valid_point(const Chart& chart, ChartPoint p) {
    const bool x_ok = chart.wraps_x() || (p.x >= -kEdgeTol && p.x <= 1.0 + kEdgeTol);
    const bool y_ok = chart.wraps_y() || (p.y >= -kEdgeTol && p.y <= 1.0 + kEdgeTol);
    return x_ok && y_ok && std::isfinite(p.x) && std::isfinite(p.y);
}

double chart_distance(const Chart& chart, ChartPoint p, ChartPoint q) {
    double dx = q.x - p.x;
    double dy = q.y - p.y;
    if (chart.wraps_x()) dx = wrap_axis_delta(dx);
    if (chart.wraps_y()) dy = wrap_axis_delta(dy);
    return std::hypot(dx, dy);
}

Vec2 displacement(const Chart& chart, ChartPoint from, ChartPoint to) {
    double dx = to.x - from.x;
    double dy = to.y - from.y;
    if (chart.wraps_x()) dx = wrap_axis_delta(dx);
    if (chart.wraps_y()) dy = wrap_axis_delta(dy);
    return {dx, dy};
}

CellIndex cell_of(const Chart& chart, ChartPoint p, int resolution) {
    if (resolution < 2) throw SpecError("cell_of: resolution must be >= 2");
    const ChartPoint q = reduce(chart, p);
    auto index = [&](double v, bool wraps) {
        int k = static_cast<int>(std::floor(v * resolution));
        if (wraps)
            k = ((k % resolution) + resolution) % resolution;
        else
            k = std::clamp(k, 0, resolution - 1);  // endpoint 1 -> last cell
        return k;
    };
    return {index(q.x, chart.wraps_x()), index(q.y, chart.wraps_y())};
}

ChartPoint cell_center(CellIndex c, int resolution) {
    return {(c.i + 0.5) / resolution, (c.j + 0.5) / resolution};
}

}  // namespace ifslab
