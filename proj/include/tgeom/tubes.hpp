#pragma once

#include <vector>

#include "tgeom/algebra.hpp"

namespace tgeom {

struct TubeSpec {
    Multivector skeleton;
    Kind kind = Kind::neutral;  // only consulted for first-order tubes
};

// Characteristic squared length: max |2G| over all pairs of the given points.
double squared_scale(const World& w, const Multivector& pts);

// |P0P1|^2 |P0P2|^2 - (product)^2 with the product order of the kind (neutral uses both orders).
double first_order_residual(const World& w, Kind kind, const Vec& P0, const Vec& P1, const Vec& P2);

// F_{n+1}(skeleton + R) for n >= 2 or the neutral kind; first_order_residual otherwise.
double tube_residual(const World& w, const TubeSpec& spec, const Vec& R);
// |residual| <= 1e-9 * squared_scale^(n+1)
bool on_tube(const World& w, const TubeSpec& spec, const Vec& R);

struct FirstOrderFactors {
    double F0 = 0, F1 = 0, F2 = 0, F3 = 0;
    double eta = 0;
    double product() const { return -F0 * F1 * F2 * F3; }
};
double eta_q(const World& w, Kind kind, const Vec& P0, const Vec& P1, const Vec& P2);
FirstOrderFactors first_order_factors(const World& w, Kind kind, const Vec& P0, const Vec& P1, const Vec& P2);

double segment_residual(const World& w, Kind kind, const Vec& P0, const Vec& P1, const Vec& P2);
double sphere_residual(const World& w, const Vec& P0, const Vec& P1, const Vec& R);

std::vector<Vec> section_filter(const World& w, const TubeSpec& spec, const Vec& P, const std::vector<Vec>& candidates,
                                double tol);

struct SectionSample {
    double tau = 0;
    std::vector<double> radii;      // ascending, in units of |y|
    std::vector<int> multiplicity;  // 2 marks a tangential (fold) root
};

struct AxisFrame {
    Vec y, e_perp;
    double y_norm = 0;
};
// Deterministic e⊥: Gram-Schmidt against y from the first coordinate axis not parallel to y.
AxisFrame axis_frame(const World& w, const Vec& y);

// x = tau y + r |y| e⊥ ; worlds must be case1 or case2 with b parallel to g y.
std::vector<SectionSample> sample_axisymmetric_tube(const World& w, const Vec& y, Kind kind,
                                                    const std::vector<double>& tau_grid, int threads = 1);

struct BrokenTube {
    std::vector<Vec> vertices;
    double mu = 0;
    Kind kind = Kind::future;
    std::vector<double> parallel_residual;  // per new vertex, kind's parallelism defect
    std::vector<double> length_error;       // per segment, relative error of the kind's length vs mu
    bool multiplicity = false;
    std::vector<int> multiplicity_steps;
};

// Kind's own segment length: future 2Σ(P,Q), past 2Σ(Q,P), neutral 2G(P,Q).
double kind_squared_length(const World& w, Kind kind, const Vec& P, const Vec& Q);

// P1 = P0 + s*dir with the kind's length equal to mu.
Vec broken_tube_seed(const World& w, Kind kind, const Vec& P0, const Vec& dir, double mu);

BrokenTube build_broken_tube(const World& w, Kind kind, const Vec& P0, const Vec& P1, double mu, int steps);

}  // namespace tgeom
