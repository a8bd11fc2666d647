#include <cmath>
#include <vector>

#include "doctest.h"
#include "ifslab/area_map.hpp"
#include "ifslab/rng.hpp"

using namespace ifslab;

namespace {

AreaMap unit_twist() { return AreaMap::integrable_twist(Chart::annulus(), 1.0); }

SeparatorSpec small_separator() {
    SeparatorSpec spec = SeparatorSpec::standard();
    spec.times = {0.02, -0.015, 0.01};
    return spec;
}

}  // namespace

TEST_CASE("integrable twist shears by tau(y)") {
    const AreaMap f = unit_twist();
    const ChartPoint q = f.apply({0.2, 0.5});
    CHECK(q.x == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(q.y == 0.5);
    const ChartPoint back = f.apply_inverse({0.7, 0.5});
    CHECK(back.x == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("kicked twist with zero kick degenerates to the unit twist") {
    const AreaMap kicked = AreaMap::kicked_twist(Chart::torus(), 0.0);
    const AreaMap twist = AreaMap::integrable_twist(Chart::torus(), 1.0);
    Rng rng(2);
    for (int k = 0; k < 100; ++k) {
        const ChartPoint p{rng.uniform(), rng.uniform()};
        CHECK(chart_distance(Chart::torus(), kicked.apply(p), twist.apply(p)) < 1e-12);
    }
}

TEST_CASE("composite with inverse is the identity") {
    const AreaMap f = AreaMap::kicked_twist(Chart::torus(), 1.2);
    const AreaMap id_like = AreaMap::composite({f, AreaMap::inverse(f)});
    Rng rng(3);
    for (int k = 0; k < 200; ++k) {
        const ChartPoint p{rng.uniform(), rng.uniform()};
        CHECK(chart_distance(Chart::torus(), id_like.apply(p), p) < 1e-10);
    }
}

TEST_CASE("round-trip residual below 1e-10 for every zoo kind") {
    Rng rng(4);
    std::vector<AreaMap> zoo;
    zoo.push_back(unit_twist());
    zoo.push_back(AreaMap::kicked_twist(Chart::torus(), 1.2));
    zoo.push_back(AreaMap::kicked_twist(Chart::annulus(), 0.3));
    zoo.push_back(build_separator(small_separator()));
    zoo.push_back(AreaMap::composite({unit_twist(), AreaMap::inverse(unit_twist())}));
    zoo.push_back(AreaMap::conjugate(
        unit_twist(), AreaMap::band_embedded(build_separator(small_separator()),
                                             Band{0.1, 0.9})));
    for (const AreaMap& m : zoo) {
        for (int k = 0; k < 100; ++k) {
            // stay clear of the annulus kick escape zone
            const ChartPoint p{rng.uniform(), rng.uniform(0.2, 0.8)};
            const ChartPoint fwd = m.apply(m.apply_inverse(p));
            const ChartPoint bwd = m.apply_inverse(m.apply(p));
            CHECK(chart_distance(m.chart(), fwd, p) < 1e-10);
            CHECK(chart_distance(m.chart(), bwd, p) < 1e-10);
        }
    }
}

TEST_CASE("kicked twist on the annulus rejects orbits leaving the chart") {
    const AreaMap f = AreaMap::kicked_twist(Chart::annulus(), 2.0);
    CHECK_THROWS_AS(f.apply({0.25, 0.99}), DomainError);  // kick up from near the top
    CHECK_NOTHROW(f.apply({0.25, 0.5}));
}

TEST_CASE("conjugate inverse equals h g^-1 h^-1, by round trip over 1e4 points") {
    const AreaMap g = AreaMap::kicked_twist(Chart::torus(), 0.8);
    const AreaMap h = AreaMap::integrable_twist(Chart::torus(), 0.5, 0.25);
    const AreaMap gt = AreaMap::conjugate(g, h);
    Rng rng(5);
    double worst = 0;
    for (int k = 0; k < 10000; ++k) {
        const ChartPoint p{rng.uniform(), rng.uniform()};
        worst = std::max(worst,
                         chart_distance(Chart::torus(), gt.apply(gt.apply_inverse(p)), p));
        // explicit composition h o g^-1 o h^-1
        const ChartPoint q = h.apply(g.apply_inverse(h.apply_inverse(p)));
        CHECK(chart_distance(Chart::torus(), gt.apply_inverse(p), q) < 1e-12);
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("jacobian of the shear is 1 within 1e-8") {
    const AreaMap f = unit_twist();
    Rng rng(6);
    for (int k = 0; k < 200; ++k) {
        const ChartPoint p{rng.uniform(), rng.uniform(0.01, 0.99)};
        CHECK(std::abs(jacobian_det(f, p, 1e-5) - 1.0) < 1e-8);
    }
}

TEST_CASE("jacobian of the kicked twist is 1 within 1e-6 at 1e3 points") {
    const AreaMap f = AreaMap::kicked_twist(Chart::torus(), 1.2);
    Rng rng(7);
    double worst = 0;
    for (int k = 0; k < 1000; ++k) {
        const ChartPoint p{rng.uniform(), rng.uniform()};
        worst = std::max(worst, std::abs(jacobian_det(f, p, 1e-5) - 1.0));
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("jacobian of a 5-map composite matches the product of determinants") {
    const AreaMap a = unit_twist();
    const AreaMap b = AreaMap::kicked_twist(Chart::annulus(), 0.3);
    const AreaMap c = AreaMap::integrable_twist(Chart::annulus(), -0.7, 0.1);
    const AreaMap d = AreaMap::inverse(b);
    const AreaMap e = AreaMap::integrable_twist(Chart::annulus(), 2.0);
    const AreaMap comp = AreaMap::composite({a, b, c, d, e});

    Rng rng(8);
    for (int k = 0; k < 50; ++k) {
        ChartPoint p{rng.uniform(), rng.uniform(0.3, 0.7)};
        const double det_comp = jacobian_det(comp, p, 1e-5);
        // product of the factors' determinants along the orbit
        double prod = 1.0;
        ChartPoint q = p;
        for (const AreaMap* m : {&a, &b, &c, &d, &e}) {
            prod *= jacobian_det(*m, q, 1e-5);
            q = m->apply(q);
        }
        CHECK(det_comp == doctest::Approx(prod).epsilon(1e-5));
        CHECK(std::abs(det_comp - 1.0) < 1e-5);
    }
}

TEST_CASE("conjugation by the identity leaves g unchanged") {
    SeparatorSpec spec = SeparatorSpec::standard();  // zero times: h == id
    const AreaMap h = AreaMap::band_embedded(build_separator(spec), Band{0.1, 0.9});
    const AreaMap g = unit_twist();
    const AreaMap gt = AreaMap::conjugate(g, h);
    Rng rng(9);
    for (int k = 0; k < 200; ++k) {
        const ChartPoint p{rng.uniform(), rng.uniform()};
        CHECK(chart_distance(Chart::annulus(), gt.apply(p), g.apply(p)) < 1e-10);
    }
}

TEST_CASE("conjugating the identity gives the identity") {
    const AreaMap id = AreaMap::identity(Chart::square());
    const AreaMap h = build_separator(small_separator());
    const AreaMap gt = AreaMap::conjugate(id, h);
    Rng rng(10);
    for (int k = 0; k < 200; ++k) {
        const ChartPoint p{rng.uniform(), rng.uniform()};
        CHECK(chart_distance(Chart::square(), gt.apply(p), p) < 1e-10);
    }
}

TEST_CASE("sampled sup-distance of the conjugate obeys the Lipschitz bound") {
    const AreaMap g = unit_twist();  // D = [[1,1],[0,1]], operator norm = golden ratio
    const double lip_g = (1.0 + std::sqrt(5.0)) / 2.0;
    const AreaMap h = AreaMap::band_embedded(build_separator(small_separator()),
                                             Band{0.1, 0.9});
    const AreaMap gt = AreaMap::conjugate(g, h);

    Rng rng(11);
    double sup_h = 0, sup_conj = 0;
    for (int k = 0; k < 10000; ++k) {
        const ChartPoint p{rng.uniform(), rng.uniform()};
        sup_h = std::max(sup_h, chart_distance(Chart::annulus(), h.apply(p), p));
        sup_conj = std::max(sup_conj,
                            chart_distance(Chart::annulus(), gt.apply(p), g.apply(p)));
    }
    CHECK(sup_h > 0.0);
    CHECK(sup_conj <= 2.0 * sup_h * lip_g);
}

TEST_CASE("pushing 1e6 uniform samples preserves cell counts to 5 sigma") {
    const int n = 32;
    const int samples = 1'000'000;
    const double expect = static_cast<double>(samples) / (n * n);
    const double sigma = std::sqrt(expect * (1.0 - 1.0 / (n * n)));

    for (const AreaMap& m : {AreaMap::kicked_twist(Chart::torus(), 1.2),
                             AreaMap::integrable_twist(Chart::torus(), 1.0, 0.25)}) {
        Rng rng(12);
        std::vector<int> counts(static_cast<std::size_t>(n) * n, 0);
        for (int k = 0; k < samples; ++k) {
            const ChartPoint q = m.apply({rng.uniform(), rng.uniform()});
            const CellIndex c = cell_of(Chart::torus(), q, n);
            ++counts[static_cast<std::size_t>(c.j) * n + c.i];
        }
        for (int count : counts) CHECK(std::abs(count - expect) < 5.0 * sigma);
    }
}

TEST_CASE("maps rebuild from their JSON descriptions") {
    std::vector<AreaMap> zoo;
    zoo.push_back(unit_twist());
    zoo.push_back(AreaMap::kicked_twist(Chart::torus(), 1.2, KickShape::TwoHarmonic));
    zoo.push_back(build_separator(small_separator()));
    zoo.push_back(AreaMap::conjugate(
        unit_twist(), AreaMap::band_embedded(build_separator(small_separator()),
                                             Band{0.1, 0.9})));
    Rng rng(13);
    for (const AreaMap& m : zoo) {
        const AreaMap copy = AreaMap::from_json(m.to_json());
        for (int k = 0; k < 50; ++k) {
            const ChartPoint p{rng.uniform(), rng.uniform(0.2, 0.8)};
            CHECK(chart_distance(m.chart(), copy.apply(p), m.apply(p)) == 0.0);
        }
    }
}

TEST_CASE("map construction from a JSON config block") {
    const auto j = nlohmann::json::parse(R"({
        "kind": "kicked_twist", "chart": "torus",
        "params": {"kick": 0.9, "shape": "sine"}
    })");
    const AreaMap m = AreaMap::from_json(j);
    CHECK(m.kind_name() == "kicked_twist");
    CHECK(m.chart() == Chart::torus());
    CHECK_THROWS_AS(AreaMap::from_json(nlohmann::json{{"kind", "nope"}}), SpecError);
}

TEST_CASE("twists need a wrapped first axis") {
    CHECK_THROWS_AS(AreaMap::integrable_twist(Chart::square(), 1.0), ChartMismatch);
    CHECK_THROWS_AS(AreaMap::kicked_twist(Chart::square(), 0.5), ChartMismatch);
}
