#pragma once

#include <array>

#include <nlohmann/json.hpp>

#include "ifslab/chart.hpp"

namespace ifslab {

/// C-infinity transition spliced from exp(-1/s): 0 for s <= 0, 1 for s >= 1.
struct SmoothStep {
    static double value(double s);
    static double deriv(double s);
};

/// Smooth window that is 0 outside (support_lo, support_hi) and exactly 1 on
/// [plateau_lo, plateau_hi].
class PlateauWindow {
public:
    PlateauWindow() = default;
    PlateauWindow(double support_lo, double plateau_lo, double plateau_hi,
                  double support_hi);

    double value(double u) const;
    double deriv(double u) const;

    double support_lo() const { return a_; }
    double plateau_lo() const { return b_; }
    double plateau_hi() const { return c_; }
    double support_hi() const { return d_; }

private:
    double a_ = 0, b_ = 0, c_ = 1, d_ = 1;
};

/// One bump Hamiltonian alpha(x,y) = eta(x) * rho(y) on the unit square.
///
/// eta equals the identity x on the plateau around line_x and vanishes
/// outside the support rectangle; rho is 1 on a band containing
/// [delta, 1-delta] and vanishes near y = 0 and y = 1. Hence alpha(x,y) = x
/// near the translated line {line_x} x [delta, 1-delta], alpha = 0 off the
/// rectangle, and |alpha| <= 1.
struct BumpSpec {
    double line_x = 0.5;
    double half_width = 0.14;        // support rectangle half-width w
    double inner_half_width = 0.02;  // eta(x) = x on [line_x -+ this]
    double delta = 0.125;            // line spans [delta, 1-delta]
    double plateau_margin = 0.04;    // rho == 1 on [delta-m, 1-delta+m]
    double support_margin = 0.005;   // rho == 0 outside (margin, 1-margin)

    void validate() const;

    double eta(double x) const;
    double eta_deriv(double x) const;
    double rho(double y) const;
    double rho_deriv(double y) const;
    double alpha(ChartPoint p) const { return eta(p.x) * rho(p.y); }

    bool in_support(ChartPoint p) const;

    /// Largest |t| for which the vertical line, shifted by (0, s) for every
    /// |s| <= |t|, stays in the zone where eta(x) = x and rho(y) = 1. This is
    /// the bound under which the flow acts on the line as an exact vertical
    /// translation; it is computed from the profile, not assumed.
    double epsilon() const;

    /// Hamiltonian field (-d_y alpha, d_x alpha), evaluated from the closed
    /// forms of the profile derivatives.
    Vec2 hamiltonian_field(ChartPoint p) const;

    /// -d_x(eta * rho') + d_y(eta' * rho); the cross terms cancel.
    double divergence(ChartPoint p) const;
};

/// Time-t flow of the bump field by fixed-step classical RK4. Exact identity
/// off the support; exact translation by (0,t) in the plateau zone. The
/// trajectory is clamped to the square at tolerance 1e-9 and
/// IntegrationError is thrown beyond it.
ChartPoint bump_flow(const BumpSpec& bump, double time, ChartPoint p,
                     double rk_step = 2.5e-5);

/// Three bumps with pairwise disjoint supports plus a translation triple.
/// The induced map is phi_1^{t1} o phi_2^{t2} o phi_3^{t3}.
struct SeparatorSpec {
    std::array<BumpSpec, 3> bumps{};
    std::array<double, 3> times{};
    double rk_step = 2.5e-5;

    void validate() const;

    /// min over bumps of the computed translation-law bound.
    double epsilon() const;

    /// Canonical geometry: lines at x = 0.2, 0.5, 0.8 with wide ramps.
    static SeparatorSpec standard(double delta = 0.125, double plateau_margin = 0.04);
};

void to_json(nlohmann::json& j, const BumpSpec& b);
void from_json(const nlohmann::json& j, BumpSpec& b);
void to_json(nlohmann::json& j, const SeparatorSpec& s);
void from_json(const nlohmann::json& j, SeparatorSpec& s);

}  // namespace ifslab
