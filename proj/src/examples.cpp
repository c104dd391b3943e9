#include "tgeom/examples.hpp"

#include <algorithm>
#include <cmath>

namespace tgeom {

std::vector<double> case1_radii(double tau, double g) {
    if (!(g > 0)) throw InputError("case1_radii: g must be positive");
    const double disc = 1.0 + 12.0 * g * g * tau * (tau - 1.0);
    std::vector<double> out;
    if (disc < 0.0) return out;
    const double sq = std::sqrt(disc);
    // r = ±(1/2g)(-1 ± sq); keep the nonnegative magnitudes.
    for (double v : {(-1.0 + sq) / (2.0 * g), (-1.0 - sq) / (2.0 * g)}) out.push_back(std::abs(v));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::optional<Waist> case1_waist(double g) {
    if (!(g > 0)) throw InputError("case1_waist: g must be positive");
    const double q = 1.0 - 3.0 * g * g;
    if (q <= 0.0) return std::nullopt;
    const double s = std::sqrt(q);
    return Waist{3.0 * g / (2.0 * (s + 1.0)), 3.0 * g / (2.0 * (1.0 - s))};
}

double case1_asymptotic_slope() { return std::sqrt(3.0); }

double case2_asymptotic_radius(double alpha, double beta, double y_norm) {
    if (!(y_norm > 0)) throw InputError("case2_asymptotic_radius: |y| must be positive");
    const double den = y_norm * (1.0 + beta * y_norm * y_norm);
    if (den == 0.0) throw InputError("case2_asymptotic_radius: 1 + beta |y|^2 vanishes");
    return std::abs(alpha / den);
}

double case1_closed_residual(const Vec& x, const Vec& y, double alpha, const Vec& b) {
    if (x.size() != y.size() || x.size() != b.size() || x.size() < 1)
        throw InputError("case1_closed_residual: dimension mismatch");
    auto dot = [](const Vec& u, const Vec& v) {
        double s = u[0] * v[0];
        for (Eigen::Index i = 1; i < u.size(); ++i) s -= u[i] * v[i];
        return s;
    };
    const double xy = dot(x, y), xx = dot(x, x), yy = dot(y, y);
    // b is a covector: b_i x^i is the plain sum
    const double bxc = b.dot(x), byc = b.dot(y);
    const double br = xy * (-2.0 * byc + 2.0 * bxc) - bxc * yy + byc * xx;
    return xy * xy - xx * yy - alpha * alpha * br * br;
}

}  // namespace tgeom
