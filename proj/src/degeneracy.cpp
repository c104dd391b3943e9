#include "tgeom/degeneracy.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "tgeom/calculus.hpp"

namespace tgeom {

const CheckResult& DegeneracyReport::get(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return c;
    throw InputError("report has no check named '" + name + "'");
}

bool DegeneracyReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass(); });
}

nlohmann::json report_to_json(const DegeneracyReport& r) {
    nlohmann::json j;
    j["world"] = r.world;
    j["check"] = r.check;
    j["checks"] = nlohmann::json::array();
    for (const auto& c : r.checks)
        j["checks"].push_back({{"name", c.name},
                               {"residual", c.residual},
                               {"threshold", c.threshold},
                               {"verdict", c.pass() ? "pass" : "fail"}});
    if (!r.signature.empty()) j["signature"] = r.signature;
    if (!r.classification.empty()) j["classification"] = r.classification;
    if (!r.verdicts.empty()) j["verdicts"] = r.verdicts;
    return j;
}

Vec EuclideanBasis::coords(const World& w, const Vec& P) const {
    const int n = static_cast<int>(points.size()) - 1;
    Vec x(n);
    for (int i = 0; i < n; ++i) x[i] = vector_product(w, points[0], points[i + 1], points[0], P);
    return x;
}

EuclideanBasis make_euclidean_basis(const World& w, const Multivector& basis) {
    if (basis.size() < 2) throw InputError("basis needs at least two points");
    for (const Vec& p : basis) w.check_point(p);
    const int n = static_cast<int>(basis.size()) - 1;
    EuclideanBasis b;
    b.points = basis;
    b.g.resize(n, n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) b.g(i, k) = vector_product(w, basis[0], basis[i + 1], basis[0], basis[k + 1]);
    Eigen::FullPivLU<Mat> lu(b.g);
    if (!lu.isInvertible() || lu.rcond() < 1e-12) throw InputError("degenerate basis (F_n = 0)");
    b.g_inv = lu.inverse();
    return b;
}

namespace {

double max_scale(const World& w, const Multivector& pts) {
    double s = 0;
    for (const Vec& p : pts)
        for (const Vec& q : pts) s = std::max(s, std::abs(w.sigma(p, q)));
    return std::max(s, 1e-300);
}

std::string signature_of(const Mat& g) {
    const Mat sym = 0.5 * (g + g.transpose());
    Eigen::SelfAdjointEigenSolver<Mat> es(sym);
    std::string s;
    for (int i = static_cast<int>(sym.rows()) - 1; i >= 0; --i) {
        if (!s.empty()) s += ",";
        const double ev = es.eigenvalues()[i];
        s += ev > 0 ? "+" : ev < 0 ? "-" : "0";
    }
    return s;
}

// Gauss-Newton for x(P) = t; minimum-norm steps when n differs from the world dimension.
bool solve_coordinates(const World& w, const EuclideanBasis& b, const Vec& t, Vec P) {
    const int d = w.dim();
    const double tol = 1e-9 * (1.0 + t.norm());
    for (int it = 0; it < 50; ++it) {
        const Vec r = b.coords(w, P) - t;
        if (!r.allFinite()) return false;
        if (r.norm() <= tol) return true;
        Mat J(t.size(), d);
        const double h = 1e-6 * (1.0 + P.lpNorm<Eigen::Infinity>());
        for (int k = 0; k < d; ++k) {
            Vec e = Vec::Zero(d);
            e[k] = h;
            J.col(k) = (b.coords(w, P + e) - b.coords(w, P - e)) / (2.0 * h);
        }
        const Vec dx = J.completeOrthogonalDecomposition().solve(-r);
        if (!dx.allFinite()) return false;
        P += dx;
    }
    return (b.coords(w, P) - t).norm() <= tol;
}

}  // namespace

DegeneracyReport euclideaness_check(const World& w, int n, const Multivector& basis, const Multivector& probes) {
    if (static_cast<int>(basis.size()) != n + 1) throw InputError("basis must hold n+1 points");
    if (probes.empty()) throw InputError("probe set is empty");
    for (const Vec& p : probes) w.check_point(p);
    const EuclideanBasis b = make_euclidean_basis(w, basis);

    DegeneracyReport r;
    r.world = w.name();
    r.check = "euclideaness";

    // I: antisymmetric part, relative to the largest |Σ| met
    const double sscale = max_scale(w, probes);
    double maxA = 0;
    for (const Vec& p : probes)
        for (const Vec& q : probes) maxA = std::max(maxA, std::abs(w.A(p, q)));
    r.checks.push_back({"I: max|A| / max|Sigma|", maxA / sscale, 1e-8});

    // II: nonzero basis volume, vanishing (n+2)-point volumes
    Multivector all = basis;
    all.insert(all.end(), probes.begin(), probes.end());
    const double scale = 2.0 * max_scale(w, all);
    const double fn = std::abs(gram_fn(w, basis));
    r.checks.push_back({"II: scale^n / |F_n(basis)|", fn > 0 ? std::pow(scale, n) / fn : HUGE_VAL, 1e12});
    double maxF = 0;
    for (const Vec& p : probes) {
        Multivector m = basis;
        m.push_back(p);
        maxF = std::max(maxF, std::abs(gram_fn(w, m)));
    }
    r.checks.push_back({"II: max|F_(n+1)| / scale^(n+1)", maxF / std::pow(scale, n + 1), 1e-8});

    // III: Σ from basis coordinates
    std::vector<Vec> xs;
    for (const Vec& p : probes) xs.push_back(b.coords(w, p));
    double maxIII = 0;
    for (size_t i = 0; i < probes.size(); ++i)
        for (size_t k = 0; k < probes.size(); ++k) {
            const Vec dx = xs[i] - xs[k];
            const double rec = 0.5 * dx.dot(b.g_inv * dx);
            maxIII = std::max(maxIII, std::abs(rec - w.sigma(probes[i], probes[k])));
        }
    r.checks.push_back({"III: max|Sigma_rec - Sigma| / max|Sigma|", maxIII / sscale, 1e-8});

    // IV: 64 sampled coordinate targets inside the probes' coordinate box
    Vec lo = xs[0], hi = xs[0];
    for (const Vec& x : xs) {
        lo = lo.cwiseMin(x);
        hi = hi.cwiseMax(x);
    }
    std::mt19937 rng(20240601u);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int failed = 0;
    constexpr int kTargets = 64;
    for (int k = 0; k < kTargets; ++k) {
        Vec t(n);
        for (int i = 0; i < n; ++i) t[i] = lo[i] + (hi[i] - lo[i]) * u(rng);
        size_t best = 0;
        for (size_t i = 1; i < xs.size(); ++i)
            if ((xs[i] - t).norm() < (xs[best] - t).norm()) best = i;
        if (!solve_coordinates(w, b, t, probes[best])) ++failed;
    }
    r.checks.push_back({"IV: failed fraction of 64 sampled solves", double(failed) / kTargets, 0.0});

    r.signature = signature_of(b.g);
    const bool definite = r.signature.find('-') == std::string::npos || r.signature.find('+') == std::string::npos;
    if (!r.all_pass())
        r.classification = "not-euclidean";
    else
        r.classification = definite && r.signature.find('0') == std::string::npos ? "euclidean" : "pseudo-euclidean";
    return r;
}

DegeneracyReport degeneration_check(const World& w, const Vec& x, const std::vector<Vec>& probe_dirs) {
    w.check_point(x);
    if (probe_dirs.empty()) throw InputError("no probe directions");
    const int d = w.dim();
    const Fn2 S = part_fn(w, Part::sigma), G = part_fn(w, Part::G), A = part_fn(w, Part::A);
    const double s = 1.0 + x.lpNorm<Eigen::Infinity>();
    const double deltas[2] = {1e-2 * s, 1e-3 * s};

    double r_anti = 0, r_eik = 0, r_fp = 0;
    for (Vec dir : probe_dirs) {
        if (dir.size() != d || !(dir.norm() > 0)) throw InputError("probe direction has the wrong dimension or is zero");
        dir.normalize();
        double eik[2], quad[2];
        for (int j = 0; j < 2; ++j) {
            const Vec xp = x + deltas[j] * dir;
            const Vec a = grad_x(A, xp, xp);  // a_k at x'
            const Mat g = -0.5 * (mixed_xp_x(G, xp, xp) + mixed_xp_x(G, xp, xp).transpose());
            Eigen::FullPivLU<Mat> lu(g);
            if (!lu.isInvertible()) throw SolverError("coincidence metric is not invertible");
            const Mat ginv = lu.inverse();
            const Vec dG = grad_xp(G, x, xp), dA = grad_xp(A, x, xp);
            const double twoG = 2.0 * w.G(x, xp);
            r_anti = std::max(r_anti, std::abs((dA + a).dot(dir)));
            eik[j] = (dG.dot(ginv * dG) - twoG) / twoG;
            // Second-order condition for the future/past tubes, taken along both candidate line directions.
            const Mat Q = twoG * (hess_xp(A, x, xp) + g);
            quad[j] = 0;
            for (double sgn : {1.0, -1.0}) {
                const Vec dx = ginv * (dG + sgn * (dA + a));
                const double norm = twoG * dx.dot(g * dx);
                quad[j] = std::max(quad[j], std::abs(dx.dot(Q * dx) - std::pow(dG.dot(dx), 2)) / std::abs(norm));
            }
        }
        // defects vanish linearly in the separation; extrapolate to zero
        auto extrap = [&](const double v[2]) {
            return std::abs((deltas[0] * v[1] - deltas[1] * v[0]) / (deltas[0] - deltas[1]));
        };
        r_eik = std::max(r_eik, extrap(eik));
        r_fp = std::max(r_fp, extrap(quad));
    }

    DegeneracyReport r;
    r.world = w.name();
    r.check = "degeneration";
    r.checks.push_back({"neutral: max|(A_,k' + a_k(x')) dir|", r_anti, 1e-8});
    r.checks.push_back({"neutral: eikonal defect |G_,i' g^i'k' G_,k' - 2G| / 2G", r_eik, 1e-4});
    r.checks.push_back({"future/past: max|(A_,i' + a_i') dx'|", r_anti, 1e-8});
    r.checks.push_back({"future/past: second-order defect", r_fp, 1e-4});
    const bool neutral = r.checks[0].pass() && r.checks[1].pass();
    const bool fp = r.checks[2].pass() && r.checks[3].pass();
    r.verdicts["neutral"] = neutral ? "degenerate" : "nondegenerate";
    r.verdicts["future"] = fp ? "degenerate" : "nondegenerate";
    r.verdicts["past"] = fp ? "degenerate" : "nondegenerate";
    return r;
}

double eta_triangle(const World& w, const Vec& x, const Vec& xp, const Vec& y) {
    w.check_point(x);
    w.check_point(xp);
    w.check_point(y);
    return w.A(x, xp) + w.A(xp, y) + w.A(y, x);
}

Multivector default_basis(int dim, double scale) {
    Multivector b{Vec::Zero(dim)};
    for (int i = 0; i < dim; ++i) b.push_back(scale * Vec::Unit(dim, i));
    return b;
}

Multivector default_probes(int dim, int count, unsigned seed, double half_width) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-half_width, half_width);
    Multivector p;
    for (int k = 0; k < count; ++k) {
        Vec v(dim);
        for (int i = 0; i < dim; ++i) v[i] = u(rng);
        p.push_back(v);
    }
    return p;
}

std::vector<Vec> default_probe_dirs(int dim) {
    std::vector<Vec> dirs;
    for (int i = 0; i < dim; ++i) dirs.push_back(Vec::Unit(dim, i));
    dirs.push_back(Vec::Ones(dim) / std::sqrt(double(dim)));
    return dirs;
}

}  // namespace tgeom
