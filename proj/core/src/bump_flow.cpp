#include "ifslab/bump_flow.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ifslab {

double SmoothStep::value(double s) {
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / s);
    const double b = std::exp(-1.0 / (1.0 - s));
    return a / (a + b);
}

double SmoothStep::deriv(double s) {
    if (s <= 0.0 || s >= 1.0) return 0.0;
    const double a = std::exp(-1.0 / s);
    const double b = std::exp(-1.0 / (1.0 - s));
    const double da = a / (s * s);
    const double db = -b / ((1.0 - s) * (1.0 - s));
    const double sum = a + b;
    return (da * b - a * db) / (sum * sum);
}

PlateauWindow::PlateauWindow(double support_lo, double plateau_lo,
                             double plateau_hi, double support_hi)
    : a_(support_lo), b_(plateau_lo), c_(plateau_hi), d_(support_hi) {
    if (!(a_ < b_ && b_ <= c_ && c_ < d_))
        throw SpecError("PlateauWindow: need support_lo < plateau_lo <= plateau_hi < support_hi");
}

double PlateauWindow::value(double u) const {
    if (u <= a_ || u >= d_) return 0.0;
    const double up = SmoothStep::value((u - a_) / (b_ - a_));
    const double down = SmoothStep::value((d_ - u) / (d_ - c_));
    return up * down;
}

double PlateauWindow::deriv(double u) const {
    if (u <= a_ || u >= d_) return 0.0;
    const double su = (u - a_) / (b_ - a_);
    const double sd = (d_ - u) / (d_ - c_);
    const double up = SmoothStep::value(su);
    const double down = SmoothStep::value(sd);
    const double dup = SmoothStep::deriv(su) / (b_ - a_);
    const double ddown = -SmoothStep::deriv(sd) / (d_ - c_);
    return dup * down + up * ddown;
}

namespace {

PlateauWindow eta_window(const BumpSpec& b) {
    return PlateauWindow(b.line_x - b.half_width, b.line_x - b.inner_half_width,
                         b.line_x + b.inner_half_width, b.line_x + b.half_width);
}

PlateauWindow rho_window(const BumpSpec& b) {
    return PlateauWindow(b.support_margin, b.delta - b.plateau_margin,
                         1.0 - b.delta + b.plateau_margin, 1.0 - b.support_margin);
}

}  // namespace

void BumpSpec::validate() const {
    if (!(half_width > 0 && inner_half_width > 0 && inner_half_width < half_width))
        throw SpecError("BumpSpec: need 0 < inner_half_width < half_width");
    if (!(line_x - half_width > 0.0 && line_x + half_width < 1.0))
        throw SpecError("BumpSpec: support rectangle must lie in (0,1) x [0,1]");
    if (!(delta > 0 && delta < 0.5))
        throw SpecError("BumpSpec: delta must lie in (0, 1/2)");
    if (!(plateau_margin > 0 && support_margin > 0 &&
          support_margin < delta - plateau_margin))
        throw SpecError("BumpSpec: need 0 < support_margin < delta - plateau_margin");
    eta_window(*this);
    rho_window(*this);
}

double BumpSpec::eta(double x) const { return x * eta_window(*this).value(x); }

double BumpSpec::eta_deriv(double x) const {
    const PlateauWindow w = eta_window(*this);
    return w.value(x) + x * w.deriv(x);
}

double BumpSpec::rho(double y) const { return rho_window(*this).value(y); }

double BumpSpec::rho_deriv(double y) const { return rho_window(*this).deriv(y); }

bool BumpSpec::in_support(ChartPoint p) const {
    return p.x > line_x - half_width && p.x < line_x + half_width &&
           p.y > support_margin && p.y < 1.0 - support_margin;
}

double BumpSpec::epsilon() const {
    // The line spans [delta, 1-delta]; rho == 1 on [delta-m, 1-delta+m]. A
    // vertical shift by s keeps the whole line in the unit-field zone iff
    // |s| <= m, and the x-plateau is unaffected by vertical shifts.
    const PlateauWindow r = rho_window(*this);
    return std::min(delta - r.plateau_lo(), r.plateau_hi() - (1.0 - delta));
}

Vec2 BumpSpec::hamiltonian_field(ChartPoint p) const {
    if (!in_support(p)) return {0.0, 0.0};
    return {-eta(p.x) * rho_deriv(p.y), eta_deriv(p.x) * rho(p.y)};
}

double BumpSpec::divergence(ChartPoint p) const {
    // d_x(-eta * rho')  +  d_y(eta' * rho)
    return -eta_deriv(p.x) * rho_deriv(p.y) + eta_deriv(p.x) * rho_deriv(p.y);
}

ChartPoint bump_flow(const BumpSpec& bump, double time, ChartPoint p,
                     double rk_step) {
    if (rk_step <= 0 || rk_step > 1e-3)
        throw SpecError("bump_flow: rk_step must lie in (0, 1e-3]");
    if (std::abs(time) > 1.0) throw SpecError("bump_flow: |time| must be <= 1");
    if (!valid_point(Chart::square(), p))
        throw DomainError("bump_flow: point off the unit square");
    if (time == 0.0 || !bump.in_support(p)) return p;

    const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(time) / rk_step)));
    const double h = time / steps;
    double x = p.x, y = p.y;
    for (int s = 0; s < steps; ++s) {
        const Vec2 k1 = bump.hamiltonian_field({x, y});
        const Vec2 k2 = bump.hamiltonian_field({x + 0.5 * h * k1.x, y + 0.5 * h * k1.y});
        const Vec2 k3 = bump.hamiltonian_field({x + 0.5 * h * k2.x, y + 0.5 * h * k2.y});
        const Vec2 k4 = bump.hamiltonian_field({x + h * k3.x, y + h * k3.y});
        x += h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
        y += h / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y);
    }

    // The exact field is tangent to (zero near) the boundary, so only
    // roundoff can step outside.
    constexpr double kClamp = 1e-9;
    if (x < -kClamp || x > 1.0 + kClamp || y < -kClamp || y > 1.0 + kClamp)
        throw IntegrationError("bump_flow: trajectory left the unit square by more than 1e-9");
    return {std::clamp(x, 0.0, 1.0), std::clamp(y, 0.0, 1.0)};
}

void SeparatorSpec::validate() const {
    for (const BumpSpec& b : bumps) b.validate();
    for (int i = 0; i < 3; ++i) {
        for (int k = i + 1; k < 3; ++k) {
            const double lo_i = bumps[i].line_x - bumps[i].half_width;
            const double hi_i = bumps[i].line_x + bumps[i].half_width;
            const double lo_k = bumps[k].line_x - bumps[k].half_width;
            const double hi_k = bumps[k].line_x + bumps[k].half_width;
            if (std::max(lo_i, lo_k) < std::min(hi_i, hi_k))
                throw SpecError("SeparatorSpec: support rectangles overlap");
        }
    }
    for (int i = 0; i < 3; ++i) {
        if (!(std::abs(times[i]) < bumps[i].epsilon()))
            throw SpecError("SeparatorSpec: |t_" + std::to_string(i + 1) +
                            "| must be below the translation-law bound " +
                            std::to_string(bumps[i].epsilon()));
    }
    if (rk_step <= 0 || rk_step > 1e-3)
        throw SpecError("SeparatorSpec: rk_step must lie in (0, 1e-3]");
}

double SeparatorSpec::epsilon() const {
    double e = bumps[0].epsilon();
    for (int i = 1; i < 3; ++i) e = std::min(e, bumps[i].epsilon());
    return e;
}

SeparatorSpec SeparatorSpec::standard(double delta, double plateau_margin) {
    SeparatorSpec s;
    const double xs[3] = {0.2, 0.5, 0.8};
    for (int i = 0; i < 3; ++i) {
        BumpSpec b;
        b.line_x = xs[i];
        b.half_width = 0.14;
        b.inner_half_width = 0.02;
        b.delta = delta;
        b.plateau_margin = plateau_margin;
        b.support_margin = 0.005;
        s.bumps[i] = b;
    }
    s.times = {0.0, 0.0, 0.0};
    s.validate();
    return s;
}

void to_json(nlohmann::json& j, const BumpSpec& b) {
    j = nlohmann::json{{"line_x", b.line_x},
                       {"half_width", b.half_width},
                       {"inner_half_width", b.inner_half_width},
                       {"delta", b.delta},
                       {"plateau_margin", b.plateau_margin},
                       {"support_margin", b.support_margin}};
}

void from_json(const nlohmann::json& j, BumpSpec& b) {
    j.at("line_x").get_to(b.line_x);
    j.at("half_width").get_to(b.half_width);
    j.at("inner_half_width").get_to(b.inner_half_width);
    j.at("delta").get_to(b.delta);
    j.at("plateau_margin").get_to(b.plateau_margin);
    j.at("support_margin").get_to(b.support_margin);
    b.validate();
}

void to_json(nlohmann::json& j, const SeparatorSpec& s) {
    j = nlohmann::json{{"bumps", s.bumps}, {"times", s.times}, {"rk_step", s.rk_step}};
}

void from_json(const nlohmann::json& j, SeparatorSpec& s) {
    j.at("bumps").get_to(s.bumps);
    j.at("times").get_to(s.times);
    if (j.contains("rk_step")) j.at("rk_step").get_to(s.rk_step);
    s.validate();
}

}  // namespace ifslab
