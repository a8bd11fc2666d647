#include "ifslab/continuum_io.hpp"

#include <fstream>
#include <sstream>

#include "ifslab/errors.hpp"

namespace ifslab {

namespace {

std::string chart_name(const Chart& c) {
    switch (c.kind) {
        case ChartKind::Square: return "square";
        case ChartKind::Annulus: return "annulus";
        case ChartKind::Torus: return "torus";
    }
    return "square";
}

Chart chart_named(const std::string& s) {
    if (s == "square") return Chart::square();
    if (s == "annulus") return Chart::annulus();
    if (s == "torus") return Chart::torus();
    throw SpecError("unknown chart: " + s);
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open for writing: " + path);
    return os;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error("cannot open for reading: " + path);
    return is;
}

}  // namespace

void write_cellset_pbm(std::ostream& os, const CellSet& cells) {
    const int n = cells.resolution();
    os << "P1\n" << n << " " << n << "\n";
    for (int j = n - 1; j >= 0; --j) {
        for (int i = 0; i < n; ++i)
            os << (cells.test(i, j) ? '1' : '0') << (i + 1 < n ? ' ' : '\n');
    }
}

void write_cellset_pbm_file(const std::string& path, const CellSet& cells) {
    auto os = open_out(path);
    write_cellset_pbm(os, cells);
}

void write_pbm(std::ostream& os, const GridContinuum& k) {
    write_cellset_pbm(os, k.cells());
}

void write_pbm_file(const std::string& path, const GridContinuum& k) {
    auto os = open_out(path);
    write_pbm(os, k);
}

GridContinuum read_pbm(std::istream& is, Chart chart) {
    std::string magic;
    is >> magic;
    if (magic != "P1") throw Error("read_pbm: only plain P1 bitmaps are supported");
    auto skip_comments = [&] {
        is >> std::ws;
        while (is.peek() == '#') {
            std::string line;
            std::getline(is, line);
            is >> std::ws;
        }
    };
    skip_comments();
    int w = 0, h = 0;
    is >> w >> h;
    if (!is || w < 2 || w != h) throw Error("read_pbm: need a square bitmap of side >= 2");
    CellSet cells(w);
    for (int row = 0; row < h; ++row) {
        for (int i = 0; i < w; ++i) {
            skip_comments();
            char c = 0;
            is >> c;
            if (c != '0' && c != '1') throw Error("read_pbm: malformed pixel data");
            if (c == '1') cells.set(i, h - 1 - row);
        }
    }
    return GridContinuum::from_cells(chart, std::move(cells));
}

GridContinuum read_pbm_file(const std::string& path, Chart chart) {
    auto is = open_in(path);
    return read_pbm(is, chart);
}

void write_family_pgm(std::ostream& os, const ContinuumFamily& family) {
    if (family.empty()) throw SpecError("write_family_pgm: empty family");
    const int n = family.members().front().resolution();
    std::vector<int> gray(static_cast<std::size_t>(n) * n, 0);
    for (std::size_t m = 0; m < family.size(); ++m)
        for (const CellIndex c : family.members()[m].cells().cells())
            gray[static_cast<std::size_t>(c.j) * n + c.i] = static_cast<int>(m) + 1;
    os << "P2\n" << n << " " << n << "\n" << family.size() << "\n";
    for (int j = n - 1; j >= 0; --j) {
        for (int i = 0; i < n; ++i)
            os << gray[static_cast<std::size_t>(j) * n + i] << (i + 1 < n ? ' ' : '\n');
    }
}

void write_family_pgm_file(const std::string& path, const ContinuumFamily& family) {
    auto os = open_out(path);
    write_family_pgm(os, family);
}

nlohmann::json continuum_to_json(const GridContinuum& k) {
    nlohmann::json cells = nlohmann::json::array();
    for (const CellIndex c : k.cells().cells()) cells.push_back({c.i, c.j});
    return {{"chart", chart_name(k.chart())},
            {"resolution", k.resolution()},
            {"cells", cells}};
}

GridContinuum continuum_from_json(const nlohmann::json& j) {
    const Chart chart = chart_named(j.at("chart").get<std::string>());
    const int n = j.at("resolution").get<int>();
    CellSet cells(n);
    for (const auto& c : j.at("cells")) {
        const int i = c.at(0).get<int>(), jj = c.at(1).get<int>();
        if (i < 0 || i >= n || jj < 0 || jj >= n)
            throw SpecError("continuum_from_json: cell out of range");
        cells.set(i, jj);
    }
    return GridContinuum::from_cells(chart, std::move(cells));
}

}  // namespace ifslab
