#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "tgeom/worldfunc.hpp"

namespace fx {

using tgeom::Mat;
using tgeom::Vec;
using tgeom::World;
using tgeom::WorldKind;
using tgeom::WorldSpec;

inline std::vector<double> minkowski(int d) {
    std::vector<double> s(d, -1.0);
    s[0] = 1.0;
    return s;
}

inline std::vector<double> ones(int d) { return std::vector<double>(d, 1.0); }

// Fully symmetric a_ikl = c / (1 + i + k + l).
inline std::vector<double> sym3(int d, double c) {
    std::vector<double> a(static_cast<size_t>(d) * d * d);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k)
            for (int l = 0; l < d; ++l) a[(static_cast<size_t>(i) * d + k) * d + l] = c / (1.0 + i + k + l);
    return a;
}

inline WorldSpec spec(WorldKind k, const std::vector<double>& signs) {
    WorldSpec s;
    s.kind = k;
    s.dim = static_cast<int>(signs.size());
    s.metric = WorldSpec::diag_metric(signs);
    return s;
}

inline World euclidean(const std::vector<double>& signs) { return make_world(spec(WorldKind::euclidean, signs)); }

inline World constant_a(const std::vector<double>& signs, const Vec& a) {
    auto s = spec(WorldKind::constant_a, signs);
    s.b = a;
    return make_world(s);
}

inline World case1(const std::vector<double>& signs, double alpha) {
    auto s = spec(WorldKind::case1, signs);
    s.b = Vec::Unit(s.dim, 0);
    s.alpha = alpha;
    return make_world(s);
}

inline World case2(const std::vector<double>& signs, double alpha, double beta) {
    auto s = spec(WorldKind::case2, signs);
    s.b = Vec::Unit(s.dim, 0);
    s.alpha = alpha;
    s.beta = beta;
    return make_world(s);
}

inline World cubic(const std::vector<double>& signs, double c) {
    auto s = spec(WorldKind::cubic_a, signs);
    s.a3 = sym3(s.dim, c);
    return make_world(s);
}

// Flat metric seen through the chart x -> x + eps * (x_{i+1}^2 + x_i x_{i+1}): nonzero connection, zero curvature.
inline Vec warp(const Vec& x, double eps) {
    const int d = static_cast<int>(x.size());
    Vec y = x;
    for (int i = 0; i < d; ++i) {
        const double u = x[(i + 1) % d];
        y[i] += eps * (u * u + x[i] * u);
    }
    return y;
}

inline World warped(const std::vector<double>& signs, double eps = 0.1) {
    const Mat g = WorldSpec::diag_metric(signs);
    const int d = static_cast<int>(signs.size());
    return World(
        d,
        [g, eps](const Vec& x, const Vec& xp) {
            const Vec xi = warp(x, eps) - warp(xp, eps);
            return 0.5 * xi.dot(g * xi);
        },
        "warped");
}

// Round 2-sphere of radius R in (polar, azimuth) coordinates; Σ = R² ψ² / 2 with ψ the central angle.
inline Eigen::Vector3d sphere_point(const Vec& x) {
    return {std::sin(x[0]) * std::cos(x[1]), std::sin(x[0]) * std::sin(x[1]), std::cos(x[0])};
}

inline World sphere(double R) {
    return World(
        2,
        [R](const Vec& x, const Vec& xp) {
            const Eigen::Vector3d n = sphere_point(x), m = sphere_point(xp);
            const double psi = std::atan2(n.cross(m).norm(), n.dot(m));
            return 0.5 * R * R * psi * psi;
        },
        "sphere");
}

// Metric of the sphere chart at x.
inline Mat sphere_metric(const Vec& x, double R) {
    Mat g = Mat::Zero(2, 2);
    g(0, 0) = R * R;
    g(1, 1) = R * R * std::sin(x[0]) * std::sin(x[0]);
    return g;
}

struct Rng {
    std::mt19937 gen;
    explicit Rng(unsigned seed) : gen(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); }
    Vec vec(int d, double lo = -1.0, double hi = 1.0) {
        Vec v(d);
        for (int i = 0; i < d; ++i) v[i] = uniform(lo, hi);
        return v;
    }
    // future-pointing timelike vector for a (+,-,...) metric
    Vec timelike(int d, double spatial = 0.5) {
        Vec v = vec(d, -spatial, spatial);
        v[0] = uniform(1.0, 2.0);
        return v;
    }
};

}  // namespace fx
