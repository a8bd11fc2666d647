#include <cmath>

#include "doctest.h"
#include "ifslab/area_map.hpp"
#include "ifslab/bump_flow.hpp"
#include "ifslab/rng.hpp"

using namespace ifslab;

TEST_CASE("smoothstep splice") {
    CHECK(SmoothStep::value(-0.5) == 0.0);
    CHECK(SmoothStep::value(0.0) == 0.0);
    CHECK(SmoothStep::value(1.0) == 1.0);
    CHECK(SmoothStep::value(2.0) == 1.0);
    CHECK(SmoothStep::value(0.5) == doctest::Approx(0.5));
    CHECK(SmoothStep::deriv(0.0) == 0.0);
    CHECK(SmoothStep::deriv(1.0) == 0.0);
    // derivative against a central difference
    for (double s : {0.2, 0.35, 0.5, 0.8}) {
        const double fd = (SmoothStep::value(s + 1e-6) - SmoothStep::value(s - 1e-6)) / 2e-6;
        CHECK(SmoothStep::deriv(s) == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("bump profile constraints") {
    const SeparatorSpec spec = SeparatorSpec::standard();
    for (const BumpSpec& b : spec.bumps) {
        b.validate();
        // alpha(x, y) = x on a neighborhood of the line
        for (double y : {b.delta, 0.5, 1.0 - b.delta}) {
            CHECK(b.alpha({b.line_x, y}) == doctest::Approx(b.line_x).epsilon(1e-15));
            CHECK(b.alpha({b.line_x + b.inner_half_width / 2, y}) ==
                  doctest::Approx(b.line_x + b.inner_half_width / 2).epsilon(1e-15));
        }
        // zero off the rectangle, |alpha| <= 1 everywhere
        Rng rng(1);
        for (int k = 0; k < 2000; ++k) {
            const ChartPoint p{rng.uniform(), rng.uniform()};
            CHECK(std::abs(b.alpha(p)) <= 1.0);
            if (!b.in_support(p)) CHECK(b.alpha(p) == 0.0);
        }
        CHECK(b.epsilon() == doctest::Approx(b.plateau_margin));
    }
}

TEST_CASE("hamiltonian field values") {
    const BumpSpec b = SeparatorSpec::standard().bumps[1];
    // unit vertical field on the line interior
    for (double y : {b.delta, 0.3, 0.5, 0.7, 1.0 - b.delta}) {
        const Vec2 v = b.hamiltonian_field({b.line_x, y});
        CHECK(v.x == 0.0);
        CHECK(v.y == doctest::Approx(1.0).epsilon(1e-15));
    }
    // zero off the support
    const Vec2 off = b.hamiltonian_field({b.line_x + b.half_width + 0.01, 0.5});
    CHECK(off.x == 0.0);
    CHECK(off.y == 0.0);
    // analytic cross terms cancel
    Rng rng(2);
    for (int k = 0; k < 1000; ++k) {
        const ChartPoint p{rng.uniform(), rng.uniform()};
        CHECK(std::abs(b.divergence(p)) <= 1e-8);
    }
}

TEST_CASE("flow translation law on the line") {
    const SeparatorSpec spec = SeparatorSpec::standard();
    for (const BumpSpec& b : spec.bumps) {
        const double eps = b.epsilon();
        for (double frac : {-0.9, -0.5, 0.25, 0.95}) {
            const double t = frac * eps;
            for (double y : {b.delta, 0.4, 1.0 - b.delta}) {
                const ChartPoint q = bump_flow(b, t, {b.line_x, y});
                CHECK(std::abs(q.x - b.line_x) < 1e-9);
                CHECK(std::abs(q.y - (y + t)) < 1e-9);
            }
        }
    }
}

TEST_CASE("flow is the exact identity off the support") {
    const BumpSpec b = SeparatorSpec::standard().bumps[0];
    Rng rng(3);
    int outside = 0;
    for (int k = 0; k < 2000; ++k) {
        const ChartPoint p{rng.uniform(), rng.uniform()};
        if (b.in_support(p)) continue;
        ++outside;
        const ChartPoint q = bump_flow(b, 0.8, p);
        CHECK(q.x == p.x);
        CHECK(q.y == p.y);
    }
    CHECK(outside > 500);
}

TEST_CASE("zero-time flow is the exact identity") {
    const BumpSpec b = SeparatorSpec::standard().bumps[2];
    Rng rng(4);
    for (int k = 0; k < 500; ++k) {
        const ChartPoint p{rng.uniform(), rng.uniform()};
        const ChartPoint q = bump_flow(b, 0.0, p);
        CHECK(q.x == p.x);
        CHECK(q.y == p.y);
    }
}

TEST_CASE("separator with zero times is the identity") {
    const AreaMap h = build_separator(SeparatorSpec::standard());
    Rng rng(5);
    for (int k = 0; k < 500; ++k) {
        const ChartPoint p{rng.uniform(), rng.uniform()};
        CHECK(chart_distance(Chart::square(), h.apply(p), p) < 1e-10);
    }
}

TEST_CASE("separator translates each line by its own time") {
    SeparatorSpec spec = SeparatorSpec::standard();
    const double eps = spec.epsilon();
    spec.times = {0.0, eps / 2, 0.0};
    const AreaMap h = build_separator(spec);
    const BumpSpec& b = spec.bumps[1];
    const ChartPoint q = h.apply({b.line_x, 0.5});
    CHECK(std::abs(q.x - b.line_x) < 1e-9);
    CHECK(std::abs(q.y - (0.5 + eps / 2)) < 1e-9);
    // lines of the other bumps stay put
    const ChartPoint q0 = h.apply({spec.bumps[0].line_x, 0.5});
    CHECK(q0.x == spec.bumps[0].line_x);
    CHECK(q0.y == 0.5);
}

TEST_CASE("single nonzero time collapses to the single bump flow") {
    SeparatorSpec spec = SeparatorSpec::standard();
    spec.times = {0.0, 0.0, 0.03};
    const AreaMap h = build_separator(spec);
    Rng rng(6);
    for (int k = 0; k < 300; ++k) {
        const ChartPoint p{rng.uniform(), rng.uniform()};
        const ChartPoint via_h = h.apply(p);
        const ChartPoint direct = bump_flow(spec.bumps[2], 0.03, p, spec.rk_step);
        CHECK(via_h.x == direct.x);
        CHECK(via_h.y == direct.y);
    }
}

TEST_CASE("the three flows commute pointwise") {
    SeparatorSpec spec = SeparatorSpec::standard();
    spec.times = {0.03, -0.025, 0.02};
    Rng rng(7);
    for (int k = 0; k < 200; ++k) {
        ChartPoint p{rng.uniform(), rng.uniform()};
        ChartPoint a = p, b = p;
        for (int i : {0, 1, 2}) a = bump_flow(spec.bumps[i], spec.times[i], a);
        for (int i : {2, 0, 1}) b = bump_flow(spec.bumps[i], spec.times[i], b);
        CHECK(chart_distance(Chart::square(), a, b) < 1e-9);
    }
}

TEST_CASE("boundary neighborhood is fixed pointwise") {
    SeparatorSpec spec = SeparatorSpec::standard();
    spec.times = {0.035, 0.03, -0.035};
    const AreaMap h = build_separator(spec);
    const double margin = spec.bumps[0].support_margin;
    Rng rng(8);
    for (int k = 0; k < 400; ++k) {
        double x = rng.uniform(), y = rng.uniform();
        switch (k % 4) {
            case 0: x = rng.uniform(0.0, 0.02); break;
            case 1: x = rng.uniform(0.98, 1.0); break;
            case 2: y = rng.uniform(0.0, margin); break;
            case 3: y = rng.uniform(1.0 - margin, 1.0); break;
        }
        const ChartPoint q = h.apply({x, y});
        CHECK(q.x == x);
        CHECK(q.y == y);
    }
}

TEST_CASE("separator jacobian determinant is 1 within 1e-6 at 1e3 points") {
    SeparatorSpec spec = SeparatorSpec::standard();
    spec.times = {0.035, -0.03, 0.025};
    const AreaMap h = build_separator(spec);
    Rng rng(9);
    double worst = 0;
    // small step: the flow's third derivatives on the ramps are ~1e6, so the
    // difference quotient needs it (roundoff stays two decades below)
    for (int k = 0; k < 1000; ++k) {
        const ChartPoint p{rng.uniform(0.01, 0.99), rng.uniform(0.01, 0.99)};
        worst = std::max(worst, std::abs(jacobian_det(h, p, 3e-7) - 1.0));
    }
    CAPTURE(worst);
    CHECK(worst < 1e-6);
}

TEST_CASE("spec validation rejects bad geometry") {
    SeparatorSpec spec = SeparatorSpec::standard();
    spec.times = {0.2, 0.0, 0.0};  // above the translation-law bound
    CHECK_THROWS_AS(spec.validate(), SpecError);

    SeparatorSpec overlap = SeparatorSpec::standard();
    overlap.bumps[1].line_x = overlap.bumps[0].line_x + 0.05;
    CHECK_THROWS_AS(overlap.validate(), SpecError);

    BumpSpec bad = SeparatorSpec::standard().bumps[0];
    bad.inner_half_width = bad.half_width + 0.01;
    CHECK_THROWS_AS(bad.validate(), SpecError);
}

TEST_CASE("separator spec serializes through JSON") {
    SeparatorSpec spec = SeparatorSpec::standard(0.13, 0.035);
    spec.times = {0.01, -0.02, 0.03};
    const nlohmann::json j = spec;
    const SeparatorSpec back = j.get<SeparatorSpec>();
    CHECK(back.times == spec.times);
    CHECK(back.bumps[1].line_x == spec.bumps[1].line_x);
    CHECK(back.bumps[2].delta == spec.bumps[2].delta);
    CHECK(back.epsilon() == doctest::Approx(spec.epsilon()));
}

TEST_CASE("flow trajectories stay inside the square") {
    // ramp points move fast but ride level sets; the square is preserved
    SeparatorSpec spec = SeparatorSpec::standard();
    const BumpSpec& b = spec.bumps[2];
    Rng rng(10);
    for (int k = 0; k < 200; ++k) {
        const ChartPoint p{rng.uniform(b.line_x - b.half_width, b.line_x + b.half_width),
                           rng.uniform()};
        const ChartPoint q = bump_flow(b, 0.039, p);
        CHECK(q.x >= 0.0);
        CHECK(q.x <= 1.0);
        CHECK(q.y >= 0.0);
        CHECK(q.y <= 1.0);
    }
}
