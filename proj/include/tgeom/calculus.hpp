#pragma once

#include <functional>
#include <initializer_list>

#include "tgeom/worldfunc.hpp"

namespace tgeom {

using Fn2 = std::function<double(const Vec&, const Vec&)>;

enum class Part { sigma, G, A };
Fn2 part_fn(const World& w, Part p);

// Default central-difference steps: h1 = h2 = eps^(1/3) s, h3 = eps^(1/5) s, h4 = eps^(1/6) s,
// s = 1 + max(|x|inf, |x'|inf).
struct FdSteps {
    double h1 = 0, h2 = 0, h3 = 0, h4 = 0;
    double for_order(int order) const;
};
FdSteps fd_steps(const Vec& x, const Vec& xp);

// Mixed central-difference partial of f(x,x'). Variables 0..d-1 address x, d..2d-1 address x'.
// Repeated variables use the matching 1-D stencil (orders 1..4), all second-order accurate.
double mixed_partial(const Fn2& f, const Vec& x, const Vec& xp, const int* vars, int nvars, double h);
inline double mixed_partial(const Fn2& f, const Vec& x, const Vec& xp, std::initializer_list<int> vars, double h) {
    return mixed_partial(f, x, xp, vars.begin(), static_cast<int>(vars.size()), h);
}

// Gradient / Hessian of f with respect to one argument only.
Vec grad_x(const Fn2& f, const Vec& x, const Vec& xp, double h = 0);
Vec grad_xp(const Fn2& f, const Vec& x, const Vec& xp, double h = 0);
Mat hess_xp(const Fn2& f, const Vec& x, const Vec& xp, double h = 0);
// J_ik = d^2 f / dx'^i dx^k
Mat mixed_xp_x(const Fn2& f, const Vec& x, const Vec& xp, double h = 0);

// Derivatives of one scalar two-point function. Naming: x = unprimed slot, xp = primed slot.
struct TwoPointDerivs {
    Vec d_x, d_xp;                       // f_,i   f_,i'
    Mat d_x_xp, d_x_x, d_xp_xp;          // f_,ik' (row i, col k')   f_,ik   f_,i'k'
    Tensor3 d_x_x_xp;                    // f_,ikl'
    Tensor3 d_xp_xp_x;                   // f_,i'k'l
    Tensor3 d_x_x_x;                     // f_,ikl
    Tensor4 d_x_x_xp_xp;                 // f_,ilk'j' stored (i,l,k,j)
};

struct DerivativeBundle {
    int max_order = 0;
    FdSteps steps;
    TwoPointDerivs sigma, G, A;
    // Largest violation of G(x,x') = G(x',x) and A(x,x') = -A(x',x) seen through first and
    // second derivatives at the swapped anchor.
    double symmetry_defect = 0.0;
};

// h <= 0 selects the default step for each order.
DerivativeBundle fd_derivatives(const World& w, const Vec& x, const Vec& xp, int max_order, double h = 0);

struct FundamentalMetric {
    Mat cov, contra;        // Σ_{ik'}, Σ^{ik'} (rows: unprimed index)
    Mat g_cov, g_contra;    // G_{ik'}, G^{ik'}
    double identity_defect = 0.0;  // max |Σ^{ik'}Σ_{lk'} - δ|
};
FundamentalMetric fundamental_metric(const World& w, const Vec& x, const Vec& xp);

// Indices (i,k,l) hold Γ^i_{kl}.
struct ChristoffelSet {
    Tensor3 tildeX, tildeXp, gX, gXp;
};
ChristoffelSet christoffels(const World& w, const Vec& x, const Vec& xp);

struct CoincidenceCoefficients {
    Vec a;
    Mat g, g_inv, g_tilde, g_tilde_inv, sigma_f, sigma_p;
    Tensor3 gamma, beta, gamma_tilde_f, gamma_tilde_p, a3, g3;
};
CoincidenceCoefficients coincidence_coefficients(const World& w, const Vec& x);

// Only [Γ̃], [Γ̃'] or [Γ] at x (cheaper than the full set); kind picks future/past/neutral.
Tensor3 coincidence_connection(const World& w, Kind kind, const Vec& x);

enum class TransportSpace { tilde_xprime, tilde_x, g_xprime, g_x };
TransportSpace transport_space_from_string(const std::string& s);

// tilde_xprime / g_xprime: covector at x' carried to x. tilde_x / g_x: covector at x carried to x'.
Mat transport_tensor(const World& w, TransportSpace space, const Vec& x, const Vec& xp);
Vec parallel_transport(const World& w, TransportSpace space, const Vec& x, const Vec& xp, const Vec& covec);

// F~_{ilk'j'} (Σ-based) or F_{ilk'j'} (G-based), stored (i,l,k,j).
Tensor4 f_tensor(const World& w, const Vec& x, const Vec& xp, Part part = Part::sigma);

// r^l_{s.ik} stored (l,s,i,k); gamma_derivs(l,s,i,k) = γ^l_{si,k}.
Tensor4 riemann_from_gamma(const Tensor3& gamma, const Tensor4& gamma_derivs);

// d/dx^m of a one-point rank-3 field, stored (i,k,l,m).
Tensor4 field_gradient(const std::function<Tensor3(const Vec&)>& field, const Vec& x, double h = 0);

// R~^s_{i.lm}(x,x') from Γ̃(·,x') per the two-point formula; stored (s,i,l,m).
Tensor4 two_point_riemann(const World& w, const Vec& x, const Vec& xp, Part part = Part::sigma);

struct CurvatureBundle {
    Tensor4 f_tilde_twopoint;  // F~(x,x')
    Tensor4 f_tilde;           // [F~] at x
    Tensor4 f_coincident;      // [F] at x, G-based
    Tensor4 riemann;           // from γ
    Tensor4 riemann_tilde_f, riemann_tilde_p;
    Mat g, g_tilde;
};
CurvatureBundle curvature(const World& w, const Vec& x, const Vec& xp);

}  // namespace tgeom
