#include <cmath>

#include "doctest.h"
#include "ifslab/chart.hpp"
#include "ifslab/rng.hpp"

using namespace ifslab;

TEST_CASE("chart_distance respects wrap flags") {
    CHECK(chart_distance(Chart::torus(), {0.95, 0.5}, {0.05, 0.5}) == doctest::Approx(0.1));
    CHECK(chart_distance(Chart::square(), {0, 0}, {1, 1}) == doctest::Approx(std::sqrt(2.0)));
    // the annulus wraps x but not y
    CHECK(chart_distance(Chart::annulus(), {0.95, 0.2}, {0.05, 0.2}) == doctest::Approx(0.1));
    CHECK(chart_distance(Chart::annulus(), {0.5, 0.0}, {0.5, 1.0}) == doctest::Approx(1.0));
}

TEST_CASE("chart_distance identity and symmetry") {
    Rng rng(11);
    for (Chart chart : {Chart::square(), Chart::annulus(), Chart::torus()}) {
        for (int k = 0; k < 200; ++k) {
            const ChartPoint p{rng.uniform(), rng.uniform()};
            const ChartPoint q{rng.uniform(), rng.uniform()};
            CHECK(chart_distance(chart, p, p) == 0.0);
            CHECK(chart_distance(chart, p, q) == chart_distance(chart, q, p));
        }
    }
}

TEST_CASE("chart_distance triangle inequality, exact") {
    Rng rng(7);
    for (Chart chart : {Chart::square(), Chart::annulus(), Chart::torus()}) {
        for (int k = 0; k < 1000; ++k) {
            const ChartPoint p{rng.uniform(), rng.uniform()};
            const ChartPoint q{rng.uniform(), rng.uniform()};
            const ChartPoint r{rng.uniform(), rng.uniform()};
            CHECK(chart_distance(chart, p, r) <=
                  chart_distance(chart, p, q) + chart_distance(chart, q, r));
        }
    }
}

TEST_CASE("cell_of basic placement") {
    CHECK(cell_of(Chart::square(), {0.5, 0.5}, 4) == CellIndex{2, 2});
    CHECK(cell_of(Chart::torus(), {1.0 - 1e-12, 0.0}, 4) == CellIndex{3, 0});
    // endpoint 1 belongs to the last cell on unwrapped axes
    CHECK(cell_of(Chart::square(), {1.0, 1.0}, 4) == CellIndex{3, 3});
    // exactly 1.0 wraps to cell 0 on a wrapped axis
    CHECK(cell_of(Chart::torus(), {1.0, 1.0}, 4) == CellIndex{0, 0});
}

TEST_CASE("cell_of is stable under full wraps") {
    Rng rng(3);
    for (int k = 0; k < 500; ++k) {
        const ChartPoint p{rng.uniform(), rng.uniform()};
        const int n = 8 << rng.uniform_int(0, 3);
        CHECK(cell_of(Chart::torus(), p, n) ==
              cell_of(Chart::torus(), {p.x + 1.0, p.y + 1.0}, n));
        CHECK(cell_of(Chart::annulus(), p, n) ==
              cell_of(Chart::annulus(), {p.x + 1.0, p.y}, n));
    }
}

TEST_CASE("reduce validates unwrapped coordinates") {
    CHECK_THROWS_AS(reduce(Chart::square(), {1.5, 0.5}), DomainError);
    CHECK_THROWS_AS(reduce(Chart::annulus(), {0.5, -0.2}), DomainError);
    CHECK_NOTHROW(reduce(Chart::annulus(), {7.25, 0.5}));
    const ChartPoint p = reduce(Chart::annulus(), {7.25, 0.5});
    CHECK(p.x == doctest::Approx(0.25));
}

TEST_CASE("displacement picks the shortest representative") {
    const Vec2 d = displacement(Chart::torus(), {0.95, 0.1}, {0.05, 0.9});
    CHECK(d.x == doctest::Approx(0.1));
    CHECK(d.y == doctest::Approx(-0.2));
}

TEST_CASE("band rows") {
    const Band full{0.0, 1.0};
    CHECK(full.first_row(64) == 0);
    CHECK(full.last_row(64) == 63);
    const Band band{0.2, 0.8};
    CHECK(band.first_row(64) == 13);
    CHECK(band.last_row(64) == 50);
}
