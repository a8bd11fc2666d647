#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "ifslab/chart.hpp"

namespace ifslab {

/// Bit-set over the N x N cell grid.
class CellSet {
public:
    CellSet() = default;
    explicit CellSet(int resolution)
        : n_(resolution),
          bits_(static_cast<std::size_t>(resolution) * resolution / 64 + 1, 0) {}

    int resolution() const { return n_; }

    bool test(int i, int j) const {
        const std::size_t k = idx(i, j);
        return (bits_[k >> 6] >> (k & 63)) & 1u;
    }
    bool test(CellIndex c) const { return test(c.i, c.j); }

    void set(int i, int j) {
        const std::size_t k = idx(i, j);
        bits_[k >> 6] |= std::uint64_t{1} << (k & 63);
    }
    void set(CellIndex c) { set(c.i, c.j); }

    void reset(int i, int j) {
        const std::size_t k = idx(i, j);
        bits_[k >> 6] &= ~(std::uint64_t{1} << (k & 63));
    }

    std::size_t count() const;
    bool any() const;
    bool intersects(const CellSet& other) const;
    CellSet& operator|=(const CellSet& other);

    friend bool operator==(const CellSet&, const CellSet&) = default;

    /// Cells in row-major order (j outer, i inner).
    std::vector<CellIndex> cells() const;

private:
    std::size_t idx(int i, int j) const {
        return static_cast<std::size_t>(j) * n_ + i;
    }

    int n_ = 0;
    std::vector<std::uint64_t> bits_;
};

/// Rasterized continuum: a nonempty, 4-connected cell set on a chart.
/// Connectivity respects the chart's wrapped axes. Immutable.
class GridContinuum {
public:
    /// Validates nonemptiness and 4-connectedness.
    static GridContinuum from_cells(Chart chart, CellSet cells);

    const Chart& chart() const { return chart_; }
    int resolution() const { return cells_.resolution(); }
    const CellSet& cells() const { return cells_; }
    std::size_t cell_count() const { return cells_.count(); }
    bool contains(CellIndex c) const { return cells_.test(c); }

private:
    GridContinuum(Chart chart, CellSet cells)
        : chart_(chart), cells_(std::move(cells)) {}

    Chart chart_;
    CellSet cells_;
};

struct FrontierDecomposition {
    GridContinuum frontier;
    CellSet lower;  // open side whose closure touches the lower boundary
    CellSet upper;
};

enum class Order { Less, Greater };

/// True iff the bottom and top sides of the square lie in different
/// 8-connected components of the complement.
bool crosses_horizontally(const GridContinuum& k);

/// True iff the band minus the continuum has exactly two 8-connected
/// components, one touching each boundary row, and both wrap the periodic
/// axis. Annulus charts only; the continuum must lie inside the band.
bool is_essential(const GridContinuum& k, const Band& band);

/// Frontier of an essential continuum with empty interior at grid scale:
/// U+- are the one-cell-erosions of the one-cell-dilations of the two
/// complementary components, and the frontier is the set of cells outside
/// both that are 8-adjacent to each. Throws NotEmptyInterior / NotAnnular.
FrontierDecomposition extract_frontier(const GridContinuum& k, const Band& ambient);

/// Compare two disjoint continua by the highest row each occupies in the
/// column at abscissa x. Throws ColumnMiss if the column misses one of them.
/// In debug builds every shared column is checked to give the same answer.
Order order_compare(const GridContinuum& a, const GridContinuum& b, double x);

/// Mark the cells hit by a point sequence and bridge consecutive samples
/// with 4-connected digital segments (shortest representatives on wrapped
/// axes). At least one sample is required.
GridContinuum rasterize(std::span<const ChartPoint> samples, Chart chart,
                        int resolution);

/// Ordered family of pairwise disjoint continua. Assembly drops the later
/// member of any overlapping pair, sorts by the column order, and records a
/// coordinate triple per member at three fixed columns.
class ContinuumFamily {
public:
    static constexpr std::array<double, 3> kOrderColumns{0.25, 0.5, 0.75};

    static ContinuumFamily assemble(std::vector<GridContinuum> members);

    const std::vector<GridContinuum>& members() const { return members_; }
    const std::vector<std::array<double, 3>>& order_keys() const { return keys_; }
    std::size_t size() const { return members_.size(); }
    bool empty() const { return members_.empty(); }

private:
    std::vector<GridContinuum> members_;
    std::vector<std::array<double, 3>> keys_;
};

/// Triple (y_1, y_2, y_3) of cell-center heights of the highest cells met by
/// the three columns, per member. Members must stay inside
/// [delta, 1 - delta] vertically (MarginViolation) and meet every column
/// (ColumnMiss). The result is a chain in the coordinatewise order.
std::vector<std::array<double, 3>> chain_coordinates(const ContinuumFamily& family,
                                                     double x1, double x2, double x3,
                                                     double delta);

}  // namespace ifslab
