#pragma once

#include <functional>
#include <string>
#include <vector>

#include "tgeom/worldfunc.hpp"

namespace tgeom {

struct Trajectory {
    std::vector<double> params;
    std::vector<Vec> points;
    Kind kind = Kind::neutral;
    std::vector<double> residuals;  // implicit: |equation defect| / |rhs|; ode: |x_N - x_2N| per sample
    std::vector<double> energy;     // ode only: g_ik v^i v^k
    std::vector<std::string> warnings;
    int steps_used = 0;             // ode only
};

// Future: Σ_,i'(x,xA) = τ Σ_,i'(xB,xA). Past: Σ_,i(xA,x') = τ Σ_,i(xA,xB). Neutral: G in place of Σ.
// Samples the τ grid in increasing order, warm-starting each Newton solve from the previous point.
Trajectory gradient_line_implicit(const World& w, Kind kind, const Vec& xA, const Vec& xB,
                                  const std::vector<double>& tau_grid);

// dx/dτ of the implicit line at τ = 0.
Vec implicit_tangent(const World& w, Kind kind, const Vec& xA, const Vec& xB);

// tilde: connection from the coincidence limit of the two-point Christoffel symbols.
// fine: γ + β (future), γ - β (past), γ (neutral); requires a_i = 0 at x0.
enum class OdeForm { tilde, fine };
OdeForm ode_form_from_string(const std::string& s);

// RK4 on x'' + Γ^i_kl x'^k x'^l = 0. The step count is doubled until doubling moves the endpoint
// by less than 1e-8; the result is reported on the requested grid.
Trajectory gradient_line_ode(const World& w, Kind kind, const Vec& x0, const Vec& v0, double tau0, double tau1,
                             int steps, OdeForm form = OdeForm::tilde);

struct MonotoneMap {
    std::string name;
    std::function<double(double)> f, df;
    static MonotoneMap identity();
    static MonotoneMap scale(double c);        // cΣ, c > 0
    static MonotoneMap quadratic(double eps);  // Σ + eps Σ^2
    static MonotoneMap parse(const std::string& s);  // "identity", "scale:c", "quadratic:eps"
};

// Hausdorff distance between the implicit lines of Σ and f∘Σ.
double reparam_invariance_check(const World& w, const MonotoneMap& f, Kind kind, const Vec& xA, const Vec& xB,
                                const std::vector<double>& tau_grid);

// n points equally spaced in normalized chord length (linear interpolation).
std::vector<Vec> chord_resample(const std::vector<Vec>& pts, int n);
// max pointwise distance after chord resampling both curves to n points.
double curve_deviation(const std::vector<Vec>& a, const std::vector<Vec>& b, int n = 201);
double polyline_distance(const Vec& p, const std::vector<Vec>& poly);
// Distance to the curve through the points, using quadratic interpolation near the closest segment.
double curve_distance(const Vec& p, const std::vector<Vec>& curve);
double hausdorff_distance(const std::vector<Vec>& a, const std::vector<Vec>& b);

}  // namespace tgeom
