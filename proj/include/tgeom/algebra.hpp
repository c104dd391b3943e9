#pragma once

#include <vector>

#include "tgeom/worldfunc.hpp"

namespace tgeom {

// Ordered points P0..Pn; order n = size() - 1.
using Multivector = std::vector<Vec>;

inline constexpr double kEpsRel = 1e-9;

// Cofactor expansion for n <= 3, partially pivoted LU above.
double determinant(const Mat& m);

double vector_product(const World& w, const Vec& P0, const Vec& P1, const Vec& Q0, const Vec& Q1);

struct ProductParts {
    double sym = 0.0;
    double antisym = 0.0;
};
ProductParts vector_product_parts(const World& w, const Vec& P0, const Vec& P1, const Vec& Q0, const Vec& Q1);

// M_ik = (P0Pi . Q0Qk)
Mat product_matrix(const World& w, const Multivector& P, const Multivector& Q);
double multivector_product(const World& w, const Multivector& P, const Multivector& Q);

// Entries Σ(Pi,P0) + Σ(P0,Pk) - Σ(Pi,Pk); determinant is F_n.
Mat gram_matrix(const World& w, const Multivector& P);
double gram_fn(const World& w, const Multivector& P);

struct SquaredLength {
    double value = 0.0;
    bool timelike = false;
};
SquaredLength squared_length(const World& w, const Multivector& P);

double collinearity_residual(const World& w, Kind kind, const Multivector& P, const Multivector& Q);
bool is_collinear(const World& w, Kind kind, const Multivector& P, const Multivector& Q, double eps_rel = kEpsRel);

enum class Sense { parallel, antiparallel };

// kind must be future or past. Throws ComplexBranchError on a negative squared length.
double parallelism_residual(const World& w, Kind kind, Sense sense, const Multivector& P, const Multivector& Q);
bool is_parallel(const World& w, Kind kind, Sense sense, const Multivector& P, const Multivector& Q,
                 double eps_rel = kEpsRel);

}  // namespace tgeom
