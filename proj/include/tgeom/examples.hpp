#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "tgeom/types.hpp"

namespace tgeom {

// Reduced variables: r and tau are in units of |y|, g = alpha |y|.

// Nonnegative radii of the case-1 tube at tau, ascending, duplicates merged.
std::vector<double> case1_radii(double tau, double g);

struct Waist {
    double r1, r2;
};
std::optional<Waist> case1_waist(double g);

double case1_asymptotic_slope();

double case2_asymptotic_radius(double alpha, double beta, double y_norm);

// Polynomial form of the case-1 neutral tube condition in a Minkowski chart, metric (+,-,-,-,...).
double case1_closed_residual(const Vec& x, const Vec& y, double alpha, const Vec& b);

}  // namespace tgeom
