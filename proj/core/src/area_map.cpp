#include "ifslab/area_map.hpp"

#include <cmath>
#include <numbers>

namespace ifslab {

namespace detail {

class MapNode {
public:
    explicit MapNode(Chart chart) : chart_(chart) {}
    virtual ~MapNode() = default;

    const Chart& chart() const { return chart_; }

    virtual ChartPoint forward(ChartPoint p) const = 0;
    virtual ChartPoint backward(ChartPoint p) const = 0;
    virtual std::string kind() const = 0;
    virtual nlohmann::json params() const { return nlohmann::json::object(); }

    /// Unreduced x displacement of the forward image. Default: shortest
    /// representative, which is exact for near-identity kinds.
    virtual std::pair<ChartPoint, double> forward_with_lift(ChartPoint p) const {
        const ChartPoint q = forward(p);
        return {q, displacement(chart_, p, q).x};
    }

private:
    Chart chart_;
};

namespace {

class IdentityNode final : public MapNode {
public:
    using MapNode::MapNode;
    ChartPoint forward(ChartPoint p) const override { return reduce(chart(), p); }
    ChartPoint backward(ChartPoint p) const override { return reduce(chart(), p); }
    std::string kind() const override { return "identity"; }
    std::pair<ChartPoint, double> forward_with_lift(ChartPoint p) const override {
        return {reduce(chart(), p), 0.0};
    }
};

class TwistNode final : public MapNode {
public:
    TwistNode(Chart chart, double slope, double offset)
        : MapNode(chart), slope_(slope), offset_(offset) {
        if (!chart.wraps_x())
            throw ChartMismatch("integrable twist needs a wrapped x axis");
    }

    double tau(double y) const { return slope_ * y + offset_; }

    ChartPoint forward(ChartPoint p) const override {
        const ChartPoint q = reduce(chart(), p);
        return {wrap_unit(q.x + tau(q.y)), q.y};
    }

    ChartPoint backward(ChartPoint p) const override {
        const ChartPoint q = reduce(chart(), p);
        return {wrap_unit(q.x - tau(q.y)), q.y};
    }

    std::pair<ChartPoint, double> forward_with_lift(ChartPoint p) const override {
        return {forward(p), tau(reduce(chart(), p).y)};
    }

    std::string kind() const override { return "integrable_twist"; }
    nlohmann::json params() const override {
        return {{"slope", slope_}, {"offset", offset_}};
    }

private:
    double slope_, offset_;
};

double kick_shape(KickShape shape, double theta) {
    switch (shape) {
        case KickShape::Sine: return std::sin(theta);
        case KickShape::TwoHarmonic: return std::sin(theta) + 0.5 * std::sin(2.0 * theta);
    }
    return 0.0;
}

class KickedNode final : public MapNode {
public:
    KickedNode(Chart chart, double kick, KickShape shape)
        : MapNode(chart), kick_(kick), shape_(shape) {
        if (!chart.wraps_x())
            throw ChartMismatch("kicked twist needs a wrapped x axis");
        if (!(kick >= 0.0 && kick <= 10.0))
            throw SpecError("kicked twist: amplitude must lie in [0, 10]");
    }

    ChartPoint forward(ChartPoint p) const override { return forward_with_lift(p).first; }

    std::pair<ChartPoint, double> forward_with_lift(ChartPoint p) const override {
        const ChartPoint q = reduce(chart(), p);
        const double two_pi = 2.0 * std::numbers::pi;
        double y = q.y + kick_ / two_pi * kick_shape(shape_, two_pi * q.x);
        y = reduce_y(y);
        return {ChartPoint{wrap_unit(q.x + y), y}, y};
    }

    ChartPoint backward(ChartPoint p) const override {
        const ChartPoint q = reduce(chart(), p);
        const double two_pi = 2.0 * std::numbers::pi;
        const double x = wrap_unit(q.x - q.y);
        const double y = reduce_y(q.y - kick_ / two_pi * kick_shape(shape_, two_pi * x));
        return {x, y};
    }

    std::string kind() const override { return "kicked_twist"; }
    nlohmann::json params() const override {
        return {{"kick", kick_},
                {"shape", shape_ == KickShape::Sine ? "sine" : "two_harmonic"}};
    }

private:
    double reduce_y(double y) const {
        if (chart().wraps_y()) return wrap_unit(y);
        if (y < 0.0 || y > 1.0)
            throw DomainError("kicked twist: orbit left the annulus chart (y = " +
                              std::to_string(y) + ")");
        return y;
    }

    double kick_;
    KickShape shape_;
};

class SeparatorNode final : public MapNode {
public:
    explicit SeparatorNode(SeparatorSpec spec)
        : MapNode(Chart::square()), spec_(std::move(spec)) {
        spec_.validate();
    }

    // h = phi_1 o phi_2 o phi_3: bump 3 acts first. The supports are
    // disjoint, so the order cannot matter; it is fixed for determinism.
    ChartPoint forward(ChartPoint p) const override {
        ChartPoint q = p;
        for (int i = 2; i >= 0; --i)
            q = bump_flow(spec_.bumps[i], spec_.times[i], q, spec_.rk_step);
        return q;
    }

    ChartPoint backward(ChartPoint p) const override {
        ChartPoint q = p;
        for (int i = 0; i < 3; ++i)
            q = bump_flow(spec_.bumps[i], -spec_.times[i], q, spec_.rk_step);
        return q;
    }

    std::string kind() const override { return "bump_flow"; }
    nlohmann::json params() const override { return {{"spec", spec_}}; }

    const SeparatorSpec& spec() const { return spec_; }

private:
    SeparatorSpec spec_;
};

class CompositeNode final : public MapNode {
public:
    explicit CompositeNode(std::vector<AreaMap> maps, Chart chart)
        : MapNode(chart), maps_(std::move(maps)) {}

    ChartPoint forward(ChartPoint p) const override {
        for (const AreaMap& m : maps_) p = m.apply(p);
        return p;
    }

    ChartPoint backward(ChartPoint p) const override {
        for (auto it = maps_.rbegin(); it != maps_.rend(); ++it)
            p = it->apply_inverse(p);
        return p;
    }

    std::pair<ChartPoint, double> forward_with_lift(ChartPoint p) const override {
        double lift = 0.0;
        for (const AreaMap& m : maps_) {
            auto [q, dx] = m.apply_with_lift(p);
            lift += dx;
            p = q;
        }
        return {p, lift};
    }

    std::string kind() const override { return "composite"; }
    nlohmann::json params() const override {
        nlohmann::json arr = nlohmann::json::array();
        for (const AreaMap& m : maps_) arr.push_back(m.to_json());
        return {{"maps", arr}};
    }

private:
    std::vector<AreaMap> maps_;
};

class InverseNode final : public MapNode {
public:
    explicit InverseNode(AreaMap m) : MapNode(m.chart()), inner_(std::move(m)) {}

    ChartPoint forward(ChartPoint p) const override { return inner_.apply_inverse(p); }
    ChartPoint backward(ChartPoint p) const override { return inner_.apply(p); }

    std::pair<ChartPoint, double> forward_with_lift(ChartPoint p) const override {
        const ChartPoint q = inner_.apply_inverse(p);
        return {q, -inner_.apply_with_lift(q).second};
    }

    std::string kind() const override { return "inverse"; }
    nlohmann::json params() const override { return {{"map", inner_.to_json()}}; }

private:
    AreaMap inner_;
};

class ConjugateNode final : public MapNode {
public:
    ConjugateNode(AreaMap g, AreaMap h)
        : MapNode(g.chart()), g_(std::move(g)), h_(std::move(h)) {
        if (!(g_.chart() == h_.chart()))
            throw ChartMismatch("conjugate: g and h live on different charts");
    }

    ChartPoint forward(ChartPoint p) const override {
        return h_.apply(g_.apply(h_.apply_inverse(p)));
    }

    ChartPoint backward(ChartPoint p) const override {
        return h_.apply(g_.apply_inverse(h_.apply_inverse(p)));
    }

    std::pair<ChartPoint, double> forward_with_lift(ChartPoint p) const override {
        const ChartPoint a = h_.apply_inverse(p);
        const double lift_in = -h_.apply_with_lift(a).second;
        auto [b, lift_g] = g_.apply_with_lift(a);
        auto [c, lift_out] = h_.apply_with_lift(b);
        return {c, lift_in + lift_g + lift_out};
    }

    std::string kind() const override { return "conjugate"; }
    nlohmann::json params() const override {
        return {{"g", g_.to_json()}, {"h", h_.to_json()}};
    }

private:
    AreaMap g_, h_;
};

class BandEmbeddedNode final : public MapNode {
public:
    BandEmbeddedNode(AreaMap square_map, Band band)
        : MapNode(Chart::annulus()), inner_(std::move(square_map)), band_(band) {
        if (!(inner_.chart() == Chart::square()))
            throw ChartMismatch("band_embedded: inner map must live on the square");
        if (!(band.lo >= 0.0 && band.hi <= 1.0 && band.span() > 0.0))
            throw SpecError("band_embedded: band must be a nonempty sub-band of [0,1]");
    }

    ChartPoint forward(ChartPoint p) const override { return map(p, /*fwd=*/true); }
    ChartPoint backward(ChartPoint p) const override { return map(p, /*fwd=*/false); }

    std::string kind() const override { return "band_embedded"; }
    nlohmann::json params() const override {
        return {{"map", inner_.to_json()}, {"band", {{"lo", band_.lo}, {"hi", band_.hi}}}};
    }

private:
    ChartPoint map(ChartPoint p, bool fwd) const {
        const ChartPoint q = reduce(chart(), p);
        if (!band_.contains(q.y)) return q;
        const ChartPoint in_square{q.x, (q.y - band_.lo) / band_.span()};
        const ChartPoint out =
            fwd ? inner_.apply(in_square) : inner_.apply_inverse(in_square);
        return {wrap_unit(out.x), band_.lo + band_.span() * out.y};
    }

    AreaMap inner_;
    Band band_;
};

}  // namespace
}  // namespace detail

AreaMap::AreaMap(std::shared_ptr<const detail::MapNode> node) : node_(std::move(node)) {}

const Chart& AreaMap::chart() const { return node_->chart(); }

ChartPoint AreaMap::apply(ChartPoint p) const {
    if (!valid_point(chart(), p)) throw DomainError("apply: point off the chart");
    return node_->forward(p);
}

ChartPoint AreaMap::apply_inverse(ChartPoint p) const {
    if (!valid_point(chart(), p)) throw DomainError("apply_inverse: point off the chart");
    return node_->backward(p);
}

std::pair<ChartPoint, double> AreaMap::apply_with_lift(ChartPoint p) const {
    if (!valid_point(chart(), p)) throw DomainError("apply_with_lift: point off the chart");
    return node_->forward_with_lift(p);
}

std::string AreaMap::kind_name() const { return node_->kind(); }

AreaMap AreaMap::identity(Chart chart) {
    return AreaMap(std::make_shared<detail::IdentityNode>(chart));
}

AreaMap AreaMap::integrable_twist(Chart chart, double slope, double offset) {
    return AreaMap(std::make_shared<detail::TwistNode>(chart, slope, offset));
}

AreaMap AreaMap::kicked_twist(Chart chart, double kick, KickShape shape) {
    return AreaMap(std::make_shared<detail::KickedNode>(chart, kick, shape));
}

AreaMap AreaMap::separator(SeparatorSpec spec) {
    return AreaMap(std::make_shared<detail::SeparatorNode>(std::move(spec)));
}

AreaMap AreaMap::composite(std::vector<AreaMap> maps) {
    if (maps.empty()) throw SpecError("composite: need at least one map");
    const Chart chart = maps.front().chart();
    for (const AreaMap& m : maps)
        if (!(m.chart() == chart)) throw ChartMismatch("composite: mixed charts");
    return AreaMap(std::make_shared<detail::CompositeNode>(std::move(maps), chart));
}

AreaMap AreaMap::inverse(AreaMap m) {
    return AreaMap(std::make_shared<detail::InverseNode>(std::move(m)));
}

AreaMap AreaMap::conjugate(AreaMap g, AreaMap h) {
    return AreaMap(std::make_shared<detail::ConjugateNode>(std::move(g), std::move(h)));
}

AreaMap AreaMap::band_embedded(AreaMap square_map, Band band) {
    return AreaMap(std::make_shared<detail::BandEmbeddedNode>(std::move(square_map), band));
}

AreaMap conjugate(const AreaMap& g, const AreaMap& h) {
    return AreaMap::conjugate(g, h);
}

AreaMap build_separator(const SeparatorSpec& spec) { return AreaMap::separator(spec); }

nlohmann::json AreaMap::to_json() const {
    nlohmann::json j{{"kind", node_->kind()}, {"params", node_->params()}};
    switch (chart().kind) {
        case ChartKind::Square: j["chart"] = "square"; break;
        case ChartKind::Annulus: j["chart"] = "annulus"; break;
        case ChartKind::Torus: j["chart"] = "torus"; break;
    }
    return j;
}

namespace {

Chart chart_from_string(const std::string& s) {
    if (s == "square") return Chart::square();
    if (s == "annulus") return Chart::annulus();
    if (s == "torus") return Chart::torus();
    throw SpecError("unknown chart: " + s);
}

}  // namespace

AreaMap AreaMap::from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    const nlohmann::json params = j.value("params", nlohmann::json::object());
    const Chart chart = chart_from_string(j.value("chart", "annulus"));

    if (kind == "identity") return identity(chart);
    if (kind == "integrable_twist")
        return integrable_twist(chart, params.at("slope").get<double>(),
                                params.value("offset", 0.0));
    if (kind == "kicked_twist") {
        const std::string shape = params.value("shape", "sine");
        if (shape != "sine" && shape != "two_harmonic")
            throw SpecError("unknown kick shape: " + shape);
        return kicked_twist(chart, params.at("kick").get<double>(),
                            shape == "sine" ? KickShape::Sine : KickShape::TwoHarmonic);
    }
    if (kind == "bump_flow")
        return separator(params.at("spec").get<SeparatorSpec>());
    if (kind == "composite") {
        std::vector<AreaMap> maps;
        for (const auto& m : params.at("maps")) maps.push_back(from_json(m));
        return composite(std::move(maps));
    }
    if (kind == "inverse") return inverse(from_json(params.at("map")));
    if (kind == "conjugate")
        return conjugate(from_json(params.at("g")), from_json(params.at("h")));
    if (kind == "band_embedded") {
        const auto& b = params.at("band");
        return band_embedded(from_json(params.at("map")),
                             Band{b.at("lo").get<double>(), b.at("hi").get<double>()});
    }
    throw SpecError("unknown map kind: " + kind);
}

double jacobian_det(const AreaMap& m, ChartPoint p, double step) {
    if (!(step >= 1e-7 && step <= 1e-4))
        throw SpecError("jacobian_det: step must lie in [1e-7, 1e-4]");
    const Chart& c = m.chart();
    const ChartPoint xp = m.apply({p.x + step, p.y});
    const ChartPoint xm = m.apply({p.x - step, p.y});
    const ChartPoint yp = m.apply({p.x, p.y + step});
    const ChartPoint ym = m.apply({p.x, p.y - step});
    const Vec2 dx = displacement(c, xm, xp);
    const Vec2 dy = displacement(c, ym, yp);
    const double inv = 1.0 / (2.0 * step);
    const double j00 = dx.x * inv, j10 = dx.y * inv;
    const double j01 = dy.x * inv, j11 = dy.y * inv;
    return j00 * j11 - j01 * j10;
}

}  // namespace ifslab
