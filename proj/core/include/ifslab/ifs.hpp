#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ifslab/area_map.hpp"
#include "ifslab/chart.hpp"
#include "ifslab/rng.hpp"

namespace ifslab {

/// Finite sequence of generator letters. A letter v >= 0 applies maps[v];
/// v < 0 applies the inverse of maps[-v-1] (group mode). The empty word is
/// the identity.
using Word = std::vector<int>;

/// Left-to-right composition: letters[0] acts first.
ChartPoint apply_word(const Word& word, std::span<const AreaMap> maps, ChartPoint p);

/// Two permutations of {0..n-1}: the exact finite stand-in for a pair of
/// maps preserving a fully supported finite measure.
struct FinitePermModel {
    int n = 0;
    std::vector<int> f;
    std::vector<int> g;

    void validate() const;  // bijectivity
    static FinitePermModel random(int n, Rng& rng);
};

/// The nine transitivity notions, each evaluated by its own reduction on the
/// 2-out-labeled digraph (inverse edges added for the group notions):
///   0 group transitivity          1 group open-set hitting
///   2 group residual starts       3 semigroup transitivity
///   4 semigroup hitting           5 semigroup residual starts
///   6 dense full branch           7 dense branch (IFS transitivity)
///   8 every start admits a dense branch
struct TransitivityReport {
    std::array<bool, 9> flags{};
    bool all_agree() const {
        for (bool b : flags)
            if (b != flags[0]) return false;
        return true;
    }
};

TransitivityReport finite_transitivity_suite(const FinitePermModel& model);

/// Cell-coverage curve of the IFS semigroup action from one start point.
struct CoverageReport {
    int resolution = 0;
    int budget = 0;
    std::int64_t covered = 0;
    bool saturated = false;                  // stopped by the idle window
    std::vector<double> fraction_by_length;  // index = word length

    double final_fraction() const {
        return fraction_by_length.empty() ? 0.0 : fraction_by_length.back();
    }
};

/// Breadth-first cell exploration: every covered cell keeps one witness
/// point; each step applies f and g to the witnesses discovered in the
/// previous step. A witness whose image leaves the chart is dropped. Stops
/// at the word-length budget or after `idle_window` steps without progress.
CoverageReport coverage_test(const AreaMap& f, const AreaMap& g, ChartPoint start,
                             int resolution, int budget, int idle_window = 50);

/// Shortest-first word search moving a 3x3 stencil of the U cell into the V
/// cell. Returns the first hitting word, or nullopt on timeout (budget is
/// the maximal word length; expansion is additionally capped at 10^6 word
/// evaluations). A timeout is not a proof of non-hitting.
std::optional<Word> hitting_test(const AreaMap& f, const AreaMap& g, CellIndex u,
                                 CellIndex v, int resolution, int budget);

/// CSV rows word_length,fraction at 17 significant digits.
void write_coverage_csv(const std::string& path, const CoverageReport& report);

}  // namespace ifslab
