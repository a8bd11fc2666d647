#include "ifslab/grid_continuum.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <optional>
#include <queue>

#include "ifslab/errors.hpp"

namespace ifslab {

std::size_t CellSet::count() const {
    std::size_t c = 0;
    for (std::uint64_t w : bits_) c += static_cast<std::size_t>(__builtin_popcountll(w));
    return c;
}

bool CellSet::any() const {
    for (std::uint64_t w : bits_)
        if (w) return true;
    return false;
}

bool CellSet::intersects(const CellSet& other) const {
    const std::size_t n = std::min(bits_.size(), other.bits_.size());
    for (std::size_t k = 0; k < n; ++k)
        if (bits_[k] & other.bits_[k]) return true;
    return false;
}

CellSet& CellSet::operator|=(const CellSet& other) {
    for (std::size_t k = 0; k < bits_.size(); ++k) bits_[k] |= other.bits_[k];
    return *this;
}

std::vector<CellIndex> CellSet::cells() const {
    std::vector<CellIndex> out;
    for (int j = 0; j < n_; ++j)
        for (int i = 0; i < n_; ++i)
            if (test(i, j)) out.push_back({i, j});
    return out;
}

namespace {

struct GridView {
    int n = 0;
    bool wrap_x = false;
    bool wrap_y = false;
    int row_lo = 0;   // inclusive band restriction
    int row_hi = -1;  // inclusive

    bool in_rows(int j) const { return j >= row_lo && j <= row_hi; }

    // Resolves a neighbor offset; returns false if it leaves the grid/band.
    bool neighbor(int i, int j, int di, int dj, int& oi, int& oj) const {
        oi = i + di;
        oj = j + dj;
        if (wrap_x) oi = (oi % n + n) % n;
        else if (oi < 0 || oi >= n) return false;
        if (wrap_y) oj = (oj % n + n) % n;
        else if (oj < 0 || oj >= n) return false;
        return in_rows(oj);
    }
};

GridView view_of(const Chart& chart, int n, const Band* band = nullptr) {
    GridView v;
    v.n = n;
    v.wrap_x = chart.wraps_x();
    v.wrap_y = chart.wraps_y();
    v.row_lo = band ? band->first_row(n) : 0;
    v.row_hi = band ? band->last_row(n) : n - 1;
    return v;
}

constexpr int kOff4[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
constexpr int kOff8[8][2] = {{1, 0},  {-1, 0}, {0, 1},  {0, -1},
                             {1, 1},  {1, -1}, {-1, 1}, {-1, -1}};

// Flood fill inside `region` starting from the given seeds.
CellSet flood(const GridView& v, const CellSet& region,
              std::span<const CellIndex> seeds, bool eight) {
    CellSet seen(v.n);
    std::vector<CellIndex> stack;
    for (CellIndex s : seeds) {
        if (region.test(s) && !seen.test(s)) {
            seen.set(s);
            stack.push_back(s);
        }
    }
    const auto offsets = eight ? std::span<const int[2]>(kOff8)
                               : std::span<const int[2]>(kOff4);
    while (!stack.empty()) {
        const CellIndex c = stack.back();
        stack.pop_back();
        for (const auto& d : offsets) {
            int oi, oj;
            if (!v.neighbor(c.i, c.j, d[0], d[1], oi, oj)) continue;
            if (region.test(oi, oj) && !seen.test(oi, oj)) {
                seen.set(oi, oj);
                stack.push_back({oi, oj});
            }
        }
    }
    return seen;
}

std::vector<CellSet> components(const GridView& v, const CellSet& region, bool eight) {
    std::vector<CellSet> out;
    CellSet assigned(v.n);
    for (int j = v.row_lo; j <= v.row_hi; ++j) {
        for (int i = 0; i < v.n; ++i) {
            if (!region.test(i, j) || assigned.test(i, j)) continue;
            const CellIndex seed{i, j};
            CellSet comp = flood(v, region, std::span(&seed, 1), eight);
            assigned |= comp;
            out.push_back(std::move(comp));
        }
    }
    return out;
}

// A component of an annulus region wraps iff, in the double cover of the
// x axis, some lift connects to its translate by one period.
bool component_wraps_x(const GridView& v, const CellSet& comp) {
    CellIndex start{-1, -1};
    for (int j = v.row_lo; j <= v.row_hi && start.i < 0; ++j)
        for (int i = 0; i < v.n && start.i < 0; ++i)
            if (comp.test(i, j)) start = {i, j};
    if (start.i < 0) return false;

    const int n = v.n;
    const int w = 2 * n;
    std::vector<char> seen(static_cast<std::size_t>(w) * n, 0);
    std::vector<std::pair<int, int>> stack;
    auto push = [&](int i, int j) {
        if (i < 0 || i >= w || !v.in_rows(j)) return;
        if (!comp.test(i % n, j)) return;
        char& s = seen[static_cast<std::size_t>(j) * w + i];
        if (s) return;
        s = 1;
        stack.emplace_back(i, j);
    };
    push(start.i, start.j);
    const int target_i = start.i + n;
    while (!stack.empty()) {
        auto [i, j] = stack.back();
        stack.pop_back();
        if (i == target_i && j == start.j) return true;
        for (const auto& d : kOff8) push(i + d[0], j + d[1]);
    }
    return false;
}

CellSet dilate8(const GridView& v, const CellSet& s) {
    CellSet out = s;
    for (int j = v.row_lo; j <= v.row_hi; ++j) {
        for (int i = 0; i < v.n; ++i) {
            if (!s.test(i, j)) continue;
            for (const auto& d : kOff8) {
                int oi, oj;
                if (v.neighbor(i, j, d[0], d[1], oi, oj)) out.set(oi, oj);
            }
        }
    }
    return out;
}

// Cells of s whose existing 4-neighbors (inside the band) are all in s.
CellSet erode4(const GridView& v, const CellSet& s) {
    CellSet out(v.n);
    for (int j = v.row_lo; j <= v.row_hi; ++j) {
        for (int i = 0; i < v.n; ++i) {
            if (!s.test(i, j)) continue;
            bool keep = true;
            for (const auto& d : kOff4) {
                int oi, oj;
                if (!v.neighbor(i, j, d[0], d[1], oi, oj)) continue;
                if (!s.test(oi, oj)) {
                    keep = false;
                    break;
                }
            }
            if (keep) out.set(i, j);
        }
    }
    return out;
}

bool adjacent8_to(const GridView& v, const CellSet& s, int i, int j) {
    for (const auto& d : kOff8) {
        int oi, oj;
        if (v.neighbor(i, j, d[0], d[1], oi, oj) && s.test(oi, oj)) return true;
    }
    return false;
}

// Highest occupied row in a column, or nullopt if the column misses the set.
std::optional<int> column_max_row(const GridContinuum& k, int column) {
    std::optional<int> best;
    for (int j = k.resolution() - 1; j >= 0; --j) {
        if (k.cells().test(column, j)) {
            best = j;
            break;
        }
    }
    return best;
}

}  // namespace

GridContinuum GridContinuum::from_cells(Chart chart, CellSet cells) {
    const int n = cells.resolution();
    if (n < 2) throw SpecError("GridContinuum: resolution must be >= 2");
    if (!cells.any()) throw SpecError("GridContinuum: cell set is empty");
    const GridView v = view_of(chart, n);
    const auto all = cells.cells();
    const CellIndex seed = all.front();
    const CellSet reached = flood(v, cells, std::span(&seed, 1), /*eight=*/false);
    if (reached.count() != cells.count())
        throw SpecError("GridContinuum: cell set is not 4-connected");
    return GridContinuum(chart, std::move(cells));
}

bool crosses_horizontally(const GridContinuum& k) {
    if (!(k.chart() == Chart::square()))
        throw ChartMismatch("crosses_horizontally: square chart required");
    const int n = k.resolution();
    const GridView v = view_of(k.chart(), n);
    CellSet complement(n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            if (!k.cells().test(i, j)) complement.set(i, j);
    std::vector<CellIndex> bottom;
    for (int i = 0; i < n; ++i)
        if (complement.test(i, 0)) bottom.push_back({i, 0});
    const CellSet reach = flood(v, complement, bottom, /*eight=*/true);
    for (int i = 0; i < n; ++i)
        if (reach.test(i, n - 1)) return false;
    return true;
}

bool is_essential(const GridContinuum& k, const Band& band) {
    if (!(k.chart() == Chart::annulus()))
        throw ChartMismatch("is_essential: annulus chart required");
    const int n = k.resolution();
    const GridView v = view_of(k.chart(), n, &band);
    for (const CellIndex c : k.cells().cells())
        if (!v.in_rows(c.j))
            throw SpecError("is_essential: continuum leaves the band");

    CellSet complement(n);
    for (int j = v.row_lo; j <= v.row_hi; ++j)
        for (int i = 0; i < n; ++i)
            if (!k.cells().test(i, j)) complement.set(i, j);

    const std::vector<CellSet> comps = components(v, complement, /*eight=*/true);
    if (comps.size() != 2) return false;

    auto touches_row = [&](const CellSet& s, int row) {
        for (int i = 0; i < n; ++i)
            if (s.test(i, row)) return true;
        return false;
    };
    const bool split = (touches_row(comps[0], v.row_lo) && touches_row(comps[1], v.row_hi)) ||
                       (touches_row(comps[1], v.row_lo) && touches_row(comps[0], v.row_hi));
    if (!split) return false;
    return component_wraps_x(v, comps[0]) && component_wraps_x(v, comps[1]);
}

FrontierDecomposition extract_frontier(const GridContinuum& k, const Band& ambient) {
    const int n = k.resolution();
    const GridView v = view_of(k.chart(), n, &ambient);

    // Empty interior at grid scale: no cell whose full 8-neighborhood lies
    // in the continuum.
    for (const CellIndex c : k.cells().cells()) {
        bool interior = true;
        for (const auto& d : kOff8) {
            int oi, oj;
            if (!v.neighbor(c.i, c.j, d[0], d[1], oi, oj) || !k.cells().test(oi, oj)) {
                interior = false;
                break;
            }
        }
        if (interior)
            throw NotEmptyInterior("extract_frontier: continuum has interior cells");
    }
    if (!is_essential(k, ambient))
        throw NotAnnular("extract_frontier: continuum is not essential in the band");

    CellSet complement(n);
    for (int j = v.row_lo; j <= v.row_hi; ++j)
        for (int i = 0; i < n; ++i)
            if (!k.cells().test(i, j)) complement.set(i, j);
    std::vector<CellSet> comps = components(v, complement, /*eight=*/true);
    auto touches_row = [&](const CellSet& s, int row) {
        for (int i = 0; i < n; ++i)
            if (s.test(i, row)) return true;
        return false;
    };
    if (!touches_row(comps[0], v.row_lo)) std::swap(comps[0], comps[1]);
    const CellSet& k_minus = comps[0];
    const CellSet& k_plus = comps[1];

    const CellSet u_minus = erode4(v, dilate8(v, k_minus));
    const CellSet u_plus = erode4(v, dilate8(v, k_plus));

    CellSet frontier_cells(n);
    for (int j = v.row_lo; j <= v.row_hi; ++j) {
        for (int i = 0; i < n; ++i) {
            if (u_minus.test(i, j) || u_plus.test(i, j)) continue;
            if (adjacent8_to(v, u_minus, i, j) && adjacent8_to(v, u_plus, i, j))
                frontier_cells.set(i, j);
        }
    }

    for (const CellIndex c : frontier_cells.cells())
        if (!k.cells().test(c))
            throw Error("extract_frontier: internal: frontier escaped the continuum");

    GridContinuum frontier = GridContinuum::from_cells(k.chart(), std::move(frontier_cells));
    if (!is_essential(frontier, ambient))
        throw Error("extract_frontier: internal: frontier lost essentiality");
    return {std::move(frontier), u_minus, u_plus};
}

Order order_compare(const GridContinuum& a, const GridContinuum& b, double x) {
    if (!(a.chart() == b.chart()) || a.resolution() != b.resolution())
        throw ChartMismatch("order_compare: incompatible continua");
    if (a.cells().intersects(b.cells()))
        throw SpecError("order_compare: continua are not disjoint");
    const int n = a.resolution();
    const int column = cell_of(a.chart(), {x, 0.0}, n).i;

    auto compare_at = [&](int col) -> Order {
        const auto ja = column_max_row(a, col);
        const auto jb = column_max_row(b, col);
        if (!ja || !jb)
            throw ColumnMiss("order_compare: column " + std::to_string(col) +
                             " misses a continuum; refine the resolution");
        // Disjointness forces distinct maxima in any shared column.
        return *ja < *jb ? Order::Less : Order::Greater;
    };

    const Order result = compare_at(column);
#ifndef NDEBUG
    for (int col = 0; col < n; ++col) {
        const auto ja = column_max_row(a, col);
        const auto jb = column_max_row(b, col);
        if (ja && jb) assert(compare_at(col) == result && "ordering depends on the column");
    }
#endif
    return result;
}

GridContinuum rasterize(std::span<const ChartPoint> samples, Chart chart,
                        int resolution) {
    if (samples.empty()) throw SpecError("rasterize: need at least one sample");
    CellSet cells(resolution);

    auto lifted_cell = [&](double x, double y) -> CellIndex {
        int i = static_cast<int>(std::floor(x * resolution));
        int j = static_cast<int>(std::floor(y * resolution));
        if (chart.wraps_x()) i = (i % resolution + resolution) % resolution;
        if (chart.wraps_y()) j = (j % resolution + resolution) % resolution;
        return {std::clamp(i, 0, resolution - 1), std::clamp(j, 0, resolution - 1)};
    };

    ChartPoint prev = reduce(chart, samples.front());
    CellIndex prev_cell = cell_of(chart, prev, resolution);
    cells.set(prev_cell);

    for (std::size_t s = 1; s < samples.size(); ++s) {
        const ChartPoint cur = reduce(chart, samples[s]);
        const Vec2 d = displacement(chart, prev, cur);
        // Sample the lifted segment at sub-cell spacing; whenever the marked
        // cell steps diagonally, insert the horizontal intermediate so the
        // bridge stays 4-connected.
        const double span = std::max(std::abs(d.x), std::abs(d.y));
        const int steps = std::max(1, static_cast<int>(std::ceil(span * resolution * 2)));
        CellIndex last = prev_cell;
        auto mark = [&](CellIndex c) {
            if (c == last) return;
            if (c.i != last.i && c.j != last.j) cells.set(c.i, last.j);
            cells.set(c);
            last = c;
        };
        for (int k = 1; k <= steps; ++k) {
            const double t = static_cast<double>(k) / steps;
            mark(lifted_cell(prev.x + d.x * t, prev.y + d.y * t));
        }
        mark(cell_of(chart, cur, resolution));  // guards endpoint rounding
        prev = cur;
        prev_cell = last;
    }
    return GridContinuum::from_cells(chart, std::move(cells));
}

ContinuumFamily ContinuumFamily::assemble(std::vector<GridContinuum> members) {
    ContinuumFamily family;
    if (members.empty()) return family;

    // Drop the later member of any overlapping pair.
    std::vector<GridContinuum> kept;
    for (auto& m : members) {
        bool overlaps = false;
        for (const auto& k : kept)
            if (k.cells().intersects(m.cells())) {
                overlaps = true;
                break;
            }
        if (!overlaps) kept.push_back(std::move(m));
    }

    std::vector<std::array<double, 3>> keys(kept.size());
    const int n = kept.front().resolution();
    for (std::size_t m = 0; m < kept.size(); ++m) {
        for (int c = 0; c < 3; ++c) {
            const int col = cell_of(kept[m].chart(), {kOrderColumns[c], 0.0}, n).i;
            const auto row = column_max_row(kept[m], col);
            if (!row)
                throw ColumnMiss("ContinuumFamily: order column misses a member");
            keys[m][c] = (*row + 0.5) / n;
        }
    }

    std::vector<std::size_t> perm(kept.size());
    for (std::size_t m = 0; m < perm.size(); ++m) perm[m] = m;
    std::sort(perm.begin(), perm.end(),
              [&](std::size_t a, std::size_t b) { return keys[a][1] < keys[b][1]; });

    for (std::size_t m = 0; m < perm.size(); ++m) {
        family.members_.push_back(std::move(kept[perm[m]]));
        family.keys_.push_back(keys[perm[m]]);
    }

    // Strictly increasing under the column order; disjointness makes ties
    // impossible at any column.
    for (std::size_t m = 1; m < family.members_.size(); ++m) {
        const Order o = order_compare(family.members_[m - 1], family.members_[m],
                                      kOrderColumns[1]);
        if (o != Order::Less)
            throw SpecError("ContinuumFamily: members not strictly ordered");
    }
    return family;
}

std::vector<std::array<double, 3>> chain_coordinates(const ContinuumFamily& family,
                                                     double x1, double x2, double x3,
                                                     double delta) {
    if (!(x1 < x2 && x2 < x3))
        throw SpecError("chain_coordinates: columns must satisfy x1 < x2 < x3");
    std::vector<std::array<double, 3>> out;
    const double xs[3] = {x1, x2, x3};
    for (const GridContinuum& k : family.members()) {
        const int n = k.resolution();
        for (const CellIndex c : k.cells().cells()) {
            const double yc = (c.j + 0.5) / n;
            if (yc < delta || yc > 1.0 - delta)
                throw MarginViolation("chain_coordinates: member meets the margin bands");
        }
        std::array<double, 3> triple{};
        for (int c = 0; c < 3; ++c) {
            const int col = cell_of(k.chart(), {xs[c], 0.0}, n).i;
            const auto row = column_max_row(k, col);
            if (!row)
                throw ColumnMiss("chain_coordinates: column misses a member");
            triple[c] = (*row + 0.5) / n;
        }
        out.push_back(triple);
    }
    return out;
}

}  // namespace ifslab
