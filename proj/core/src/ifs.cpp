#include "ifslab/ifs.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <fstream>
#include <numeric>

#include "ifslab/errors.hpp"

namespace ifslab {

ChartPoint apply_word(const Word& word, std::span<const AreaMap> maps, ChartPoint p) {
    for (int letter : word) {
        if (letter >= 0) {
            if (letter >= static_cast<int>(maps.size()))
                throw SpecError("apply_word: letter indexes no map");
            p = maps[letter].apply(p);
        } else {
            const int idx = -letter - 1;
            if (idx >= static_cast<int>(maps.size()))
                throw SpecError("apply_word: inverse letter indexes no map");
            p = maps[idx].apply_inverse(p);
        }
    }
    return p;
}

void FinitePermModel::validate() const {
    if (n < 1) throw SpecError("FinitePermModel: n must be >= 1");
    auto check = [&](const std::vector<int>& p, const char* name) {
        if (static_cast<int>(p.size()) != n)
            throw SpecError(std::string("FinitePermModel: ") + name + " has wrong size");
        std::vector<char> seen(n, 0);
        for (int v : p) {
            if (v < 0 || v >= n || seen[v])
                throw SpecError(std::string("FinitePermModel: ") + name +
                                " is not a permutation");
            seen[v] = 1;
        }
    };
    check(f, "f");
    check(g, "g");
}

FinitePermModel FinitePermModel::random(int n, Rng& rng) {
    FinitePermModel m;
    m.n = n;
    auto shuffle = [&] {
        std::vector<int> p(n);
        std::iota(p.begin(), p.end(), 0);
        for (int k = n - 1; k > 0; --k) std::swap(p[k], p[rng.uniform_int(0, k)]);
        return p;
    };
    m.f = shuffle();
    m.g = shuffle();
    m.validate();
    return m;
}

namespace {

// Directed reachability via >= 1 application of the listed edge maps.
std::vector<char> reach_from(int start, int n,
                             const std::vector<const std::vector<int>*>& edges) {
    std::vector<char> seen(n, 0);
    std::vector<int> stack;
    for (const auto* e : edges) {
        const int w = (*e)[start];
        if (!seen[w]) {
            seen[w] = 1;
            stack.push_back(w);
        }
    }
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (const auto* e : edges) {
            const int w = (*e)[v];
            if (!seen[w]) {
                seen[w] = 1;
                stack.push_back(w);
            }
        }
    }
    return seen;
}

bool covers_all(const std::vector<char>& seen) {
    return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

// Walk search over (vertex, visited-mask) states: is there a single branch
// from `start` visiting every vertex?
bool dense_branch_from(int start, const FinitePermModel& m) {
    const int n = m.n;
    const std::uint32_t full = n == 32 ? 0xFFFFFFFFu : ((1u << n) - 1u);
    std::vector<char> seen(static_cast<std::size_t>(n) << n, 0);
    std::vector<std::pair<int, std::uint32_t>> stack;
    const std::uint32_t m0 = 1u << start;
    if (m0 == full) return true;
    seen[(static_cast<std::size_t>(start) << n) | m0] = 1;
    stack.emplace_back(start, m0);
    while (!stack.empty()) {
        auto [v, mask] = stack.back();
        stack.pop_back();
        for (const std::vector<int>* e : {&m.f, &m.g}) {
            const int w = (*e)[v];
            const std::uint32_t nm = mask | (1u << w);
            if (nm == full) return true;
            char& s = seen[(static_cast<std::size_t>(w) << n) | nm];
            if (!s) {
                s = 1;
                stack.emplace_back(w, nm);
            }
        }
    }
    return false;
}

}  // namespace

TransitivityReport finite_transitivity_suite(const FinitePermModel& model) {
    model.validate();
    const int n = model.n;
    if (n > 20) throw SpecError("finite_transitivity_suite: n too large for the mask search");

    std::vector<int> f_inv(n), g_inv(n);
    for (int v = 0; v < n; ++v) {
        f_inv[model.f[v]] = v;
        g_inv[model.g[v]] = v;
    }
    const std::vector<const std::vector<int>*> semi{&model.f, &model.g};
    const std::vector<const std::vector<int>*> group{&model.f, &model.g, &f_inv, &g_inv};
    const std::vector<const std::vector<int>*> reverse{&f_inv, &g_inv};

    std::vector<std::vector<char>> semi_reach(n), group_reach(n), back_reach(n);
    for (int v = 0; v < n; ++v) {
        semi_reach[v] = reach_from(v, n, semi);
        group_reach[v] = reach_from(v, n, group);
        back_reach[v] = reach_from(v, n, reverse);
    }

    TransitivityReport r;

    // group transitivity: some orbit is everything
    r.flags[0] = std::any_of(group_reach.begin(), group_reach.end(), covers_all);
    // group hitting: every ordered pair is connected
    {
        bool all_pairs = true;
        for (int u = 0; u < n && all_pairs; ++u)
            for (int v = 0; v < n && all_pairs; ++v)
                if (!group_reach[u][v]) all_pairs = false;
        r.flags[1] = all_pairs;
    }
    // group residual variant: every start has a dense orbit
    r.flags[2] = std::all_of(group_reach.begin(), group_reach.end(), covers_all);

    // semigroup versions of the same three
    r.flags[3] = std::any_of(semi_reach.begin(), semi_reach.end(), covers_all);
    {
        bool all_pairs = true;
        for (int u = 0; u < n && all_pairs; ++u)
            for (int v = 0; v < n && all_pairs; ++v)
                if (!semi_reach[u][v]) all_pairs = false;
        r.flags[4] = all_pairs;
    }
    r.flags[5] = std::all_of(semi_reach.begin(), semi_reach.end(), covers_all);

    // dense full branch: some vertex reaches everything both forward and
    // backward along the semigroup edges
    {
        bool found = false;
        for (int v = 0; v < n && !found; ++v)
            found = covers_all(semi_reach[v]) && covers_all(back_reach[v]);
        r.flags[6] = found;
    }

    // dense branch existence, by explicit walk search
    {
        bool found = false;
        for (int v = 0; v < n && !found; ++v) found = dense_branch_from(v, model);
        r.flags[7] = found;
    }
    // residual branch variant: every start works
    {
        bool all = true;
        for (int v = 0; v < n && all; ++v) all = dense_branch_from(v, model);
        r.flags[8] = all;
    }
    return r;
}

CoverageReport coverage_test(const AreaMap& f, const AreaMap& g, ChartPoint start,
                             int resolution, int budget, int idle_window) {
    if (resolution < 8) throw SpecError("coverage_test: resolution must be >= 8");
    if (budget < 1) throw SpecError("coverage_test: budget must be >= 1");
    if (!(f.chart() == g.chart())) throw ChartMismatch("coverage_test: mixed charts");
    const Chart chart = f.chart();

    CoverageReport report;
    report.resolution = resolution;
    report.budget = budget;
    const double total = static_cast<double>(resolution) * resolution;

    std::vector<char> covered(static_cast<std::size_t>(resolution) * resolution, 0);
    auto cell_id = [&](CellIndex c) {
        return static_cast<std::size_t>(c.j) * resolution + c.i;
    };

    std::vector<ChartPoint> frontier;
    const CellIndex c0 = cell_of(chart, start, resolution);
    covered[cell_id(c0)] = 1;
    std::int64_t count = 1;
    frontier.push_back(reduce(chart, start));
    report.fraction_by_length.push_back(count / total);

    int idle = 0;
    for (int length = 1; length <= budget; ++length) {
        std::vector<ChartPoint> next;
        for (const ChartPoint& p : frontier) {
            for (const AreaMap* m : {&f, &g}) {
                ChartPoint q;
                try {
                    q = m->apply(p);
                } catch (const DomainError&) {
                    continue;  // branch left the chart
                }
                const CellIndex c = cell_of(chart, q, resolution);
                char& flag = covered[cell_id(c)];
                if (!flag) {
                    flag = 1;
                    ++count;
                    next.push_back(q);
                }
            }
        }
        report.fraction_by_length.push_back(count / total);
        idle = next.empty() ? idle + 1 : 0;
        frontier = std::move(next);
        if (idle >= idle_window) {
            report.saturated = true;
            break;
        }
    }
    report.covered = count;
    return report;
}

std::optional<Word> hitting_test(const AreaMap& f, const AreaMap& g, CellIndex u,
                                 CellIndex v, int resolution, int budget) {
    if (resolution < 2) throw SpecError("hitting_test: resolution must be >= 2");
    const Chart chart = f.chart();
    if (!(chart == g.chart())) throw ChartMismatch("hitting_test: mixed charts");

    std::vector<ChartPoint> stencil;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            stencil.push_back({(u.i + (2 * a + 1) / 6.0) / resolution,
                               (u.j + (2 * b + 1) / 6.0) / resolution});

    auto hits = [&](const std::vector<ChartPoint>& pts) {
        for (const ChartPoint& p : pts)
            if (cell_of(chart, p, resolution) == v) return true;
        return false;
    };

    if (hits(stencil)) return Word{};

    struct State {
        Word word;
        std::vector<ChartPoint> pts;
    };
    std::deque<State> queue;
    queue.push_back({{}, stencil});
    constexpr int kMaxExpansions = 1'000'000;
    int expansions = 0;
    while (!queue.empty()) {
        State s = std::move(queue.front());
        queue.pop_front();
        if (static_cast<int>(s.word.size()) >= budget) continue;
        for (int letter = 0; letter < 2; ++letter) {
            if (++expansions > kMaxExpansions) return std::nullopt;
            const AreaMap& m = letter == 0 ? f : g;
            std::vector<ChartPoint> imgs;
            imgs.reserve(s.pts.size());
            bool dead = false;
            try {
                for (const ChartPoint& p : s.pts) imgs.push_back(m.apply(p));
            } catch (const DomainError&) {
                dead = true;
            }
            if (dead) continue;
            Word w = s.word;
            w.push_back(letter);
            if (hits(imgs)) return w;
            queue.push_back({std::move(w), std::move(imgs)});
        }
    }
    return std::nullopt;
}

void write_coverage_csv(const std::string& path, const CoverageReport& report) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open for writing: " + path);
    os << "word_length,fraction\n";
    char buf[64];
    for (std::size_t k = 0; k < report.fraction_by_length.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g\n", k, report.fraction_by_length[k]);
        os << buf;
    }
}

}  // namespace ifslab
