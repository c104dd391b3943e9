#include "tgeom/tubes.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <thread>

#include <Eigen/LU>

#include "tgeom/calculus.hpp"

namespace tgeom {

namespace {

double checked_sqrt(double v, double scale, const char* what) {
    if (v < 0.0) {
        if (v >= -1e-13 * std::max(scale, 1e-300)) return 0.0;
        throw ComplexBranchError(std::string("negative radicand in ") + what + " (spacelike/complex branch)");
    }
    return std::sqrt(v);
}

}  // namespace

double squared_scale(const World& w, const Multivector& pts) {
    double s = 0.0;
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t k = i + 1; k < pts.size(); ++k) s = std::max(s, std::abs(2.0 * w.G(pts[i], pts[k])));
    return s;
}

double first_order_residual(const World& w, Kind kind, const Vec& P0, const Vec& P1, const Vec& P2) {
    const double l1 = 2.0 * w.G(P0, P1);
    const double l2 = 2.0 * w.G(P0, P2);
    const double a = vector_product(w, P0, P1, P0, P2);
    const double b = vector_product(w, P0, P2, P0, P1);
    switch (kind) {
        case Kind::neutral: return l1 * l2 - a * b;
        case Kind::future: return l1 * l2 - a * a;
        case Kind::past: return l1 * l2 - b * b;
    }
    return 0.0;
}

static void check_skeleton(const World& w, const Multivector& sk) {
    if (sk.size() < 2) throw InputError("tube skeleton needs at least two points");
    const int n = static_cast<int>(sk.size()) - 1;
    const double f = gram_fn(w, sk);
    const double s = squared_scale(w, sk);
    if (f == 0.0 || std::abs(f) <= 1e-13 * std::pow(s, n)) throw InputError("degenerate tube skeleton (zero length)");
}

double tube_residual(const World& w, const TubeSpec& spec, const Vec& R) {
    check_skeleton(w, spec.skeleton);
    w.check_point(R);
    if (spec.skeleton.size() == 2) return first_order_residual(w, spec.kind, spec.skeleton[0], spec.skeleton[1], R);
    Multivector all = spec.skeleton;
    all.push_back(R);
    return gram_fn(w, all);
}

bool on_tube(const World& w, const TubeSpec& spec, const Vec& R) {
    Multivector all = spec.skeleton;
    all.push_back(R);
    const int n = static_cast<int>(spec.skeleton.size()) - 1;
    const double s = squared_scale(w, all);
    return std::abs(tube_residual(w, spec, R)) <= 1e-9 * std::pow(s, n + 1);
}

double eta_q(const World& w, Kind kind, const Vec& P0, const Vec& P1, const Vec& P2) {
    const double ef = w.A(P1, P0) + w.A(P0, P2) + w.A(P2, P1);
    switch (kind) {
        case Kind::future: return ef;
        case Kind::past: return -ef;
        case Kind::neutral: {
            const double g01 = w.G(P0, P1), g02 = w.G(P0, P2);
            const double q = 4.0 * g01 * g02 + ef * ef;
            const double s = std::max(std::abs(g01 * g02), ef * ef);
            const double den = checked_sqrt(q, s, "eta_n") + 2.0 * checked_sqrt(g01 * g02, s, "eta_n");
            return den == 0.0 ? 0.0 : ef * ef / den;
        }
    }
    return 0.0;
}

FirstOrderFactors first_order_factors(const World& w, Kind kind, const Vec& P0, const Vec& P1, const Vec& P2) {
    const double g02 = w.G(P0, P2), g10 = w.G(P1, P0), g12 = w.G(P1, P2);
    const double scale = std::max({std::abs(g02), std::abs(g10), std::abs(g12)});
    FirstOrderFactors f;
    f.eta = eta_q(w, kind, P0, P1, P2);
    const double alpha = kind == Kind::neutral ? -1.0 : 1.0;
    const double a = checked_sqrt(g02, scale, "G02");
    const double b = checked_sqrt(g10, scale, "G10");
    const double c = checked_sqrt(g12 - f.eta, scale, "G12 - eta");
    const double c2 = checked_sqrt(g12 - alpha * f.eta, scale, "G12 - alpha eta");
    f.F0 = a + b + c;
    f.F1 = a - b + c2;
    f.F2 = a + b - c;
    f.F3 = a - b - c2;
    return f;
}

double segment_residual(const World& w, Kind kind, const Vec& P0, const Vec& P1, const Vec& P2) {
    const double g02 = w.G(P0, P2), g10 = w.G(P1, P0), g12 = w.G(P1, P2);
    const double scale = std::max({std::abs(g02), std::abs(g10), std::abs(g12)});
    const double eta = eta_q(w, kind, P0, P1, P2);
    const double alpha = kind == Kind::neutral ? -1.0 : 1.0;
    return checked_sqrt(g02, scale, "G02") - checked_sqrt(g10, scale, "G10") +
           checked_sqrt(g12 - alpha * eta, scale, "G12 - alpha eta");
}

double sphere_residual(const World& w, const Vec& P0, const Vec& P1, const Vec& R) {
    // zero on the sphere through P1 centred at P0
    const double r0 = w.sigma(P0, R) + w.sigma(R, P0);
    const double r1 = w.sigma(P0, P1) + w.sigma(P1, P0);
    const double scale = std::max(std::abs(r0), std::abs(r1));
    return checked_sqrt(r0, scale, "sphere radius at R") - checked_sqrt(r1, scale, "sphere radius");
}

std::vector<Vec> section_filter(const World& w, const TubeSpec& spec, const Vec& P, const std::vector<Vec>& candidates,
                                double tol) {
    if (!(tol > 0)) throw InputError("section tolerance must be positive");
    if (!on_tube(w, spec, P)) throw InputError("section base point is not on the tube");
    std::vector<Vec> out;
    std::vector<double> ref;
    for (const Vec& Pl : spec.skeleton) ref.push_back(w.sigma(Pl, P));
    for (const Vec& c : candidates) {
        bool keep = true;
        for (size_t l = 0; l < spec.skeleton.size() && keep; ++l)
            keep = std::abs(w.sigma(spec.skeleton[l], c) - ref[l]) <= tol;
        if (keep) out.push_back(c);
    }
    return out;
}

AxisFrame axis_frame(const World& w, const Vec& y) {
    w.check_point(y);
    const Mat& g = w.metric();
    if (g.rows() != w.dim()) throw InputError("axisymmetric sampling needs a world with a constant metric");
    const double yy = y.dot(g * y);
    if (!(yy > 0)) throw InputError("y must be timelike (2G(0,y) > 0)");
    AxisFrame f;
    f.y = y;
    f.y_norm = std::sqrt(yy);
    for (int k = 0; k < w.dim(); ++k) {
        Vec e = Vec::Zero(w.dim());
        e[k] = 1.0;
        e -= (e.dot(g * y) / yy) * y;
        const double ee = e.dot(g * e);
        if (std::abs(ee) > 1e-12) {
            f.e_perp = e / std::sqrt(std::abs(ee));
            return f;
        }
    }
    throw InputError("no coordinate axis yields a direction orthogonal to y");
}

namespace {

struct Reduced {
    const World* w;
    Kind kind;
    AxisFrame fr;
    double tau;
    Vec origin;
    Vec point(double r) const { return tau * fr.y + r * fr.y_norm * fr.e_perp; }
    double F(double r) const { return first_order_residual(*w, kind, origin, fr.y, point(r)); }
    // size of the terms that cancel in F
    double scale(double r) const {
        const Vec x = point(r);
        const double l1 = 2.0 * w->G(origin, fr.y), l2 = 2.0 * w->G(origin, x);
        const double a = vector_product(*w, origin, fr.y, origin, x), b = vector_product(*w, origin, x, origin, fr.y);
        return std::abs(l1 * l2) + std::abs(a * b);
    }
    bool accept(double r) const {
        const double s = scale(r);
        return std::abs(F(r)) <= 1e-9 * s;
    }
};

double bisect(const Reduced& red, double lo, double hi, double flo) {
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo <= 1e-12 * std::max(1.0, std::abs(mid))) break;
        const double fm = red.F(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    const double r = 0.5 * (lo + hi);
    // one Newton polish, kept only if it improves the residual and stays in the bracket
    const double h = 1e-7 * std::max(1.0, r);
    const double fr = red.F(r);
    const double df = (red.F(r + h) - red.F(r - h)) / (2.0 * h);
    if (df != 0.0 && std::isfinite(df)) {
        const double rn = r - fr / df;
        if (rn >= lo - 1e-12 && rn <= hi + 1e-12 && std::abs(red.F(rn)) < std::abs(fr)) return rn;
    }
    return r;
}

// Minimizes s*F on [a,b] by golden section; s = sign of F at the probes.
double golden_min(const Reduced& red, double a, double b, double s) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = s * red.F(c), fd = s * red.F(d);
    for (int it = 0; it < 200 && (b - a) > 1e-13 * std::max(1.0, std::abs(a)); ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = s * red.F(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = s * red.F(d);
        }
    }
    return 0.5 * (a + b);
}

SectionSample sample_one(const Reduced& red, double g_red) {
    SectionSample out;
    out.tau = red.tau;
    constexpr int kProbes = 256;
    const double r_hi = 10.0 * (1.0 + 1.0 / g_red) * (1.0 + std::abs(red.tau));
    const double r_lo = r_hi * 1e-12;
    std::vector<double> rs(kProbes), fs(kProbes);
    rs[0] = 0.0;
    for (int k = 1; k < kProbes; ++k) rs[k] = r_lo * std::pow(r_hi / r_lo, double(k - 1) / (kProbes - 2));
    std::vector<char> flat(kProbes);
    for (int k = 0; k < kProbes; ++k) {
        fs[k] = red.F(rs[k]);
        flat[k] = std::isfinite(fs[k]) && std::abs(fs[k]) <= 1e-9 * red.scale(rs[k]);
    }

    std::vector<std::pair<double, int>> roots;
    // r = 0 lies on the symmetry axis, where F is even in r and never changes sign.
    if (red.accept(0.0)) roots.push_back({0.0, 1});
    for (int k = 1; k + 1 < kProbes; ++k) {
        const double f0 = fs[k], f1 = fs[k + 1];
        if (!std::isfinite(f0) || !std::isfinite(f1)) continue;
        if (f0 == 0.0 && k > 1) {
            if (red.accept(rs[k])) roots.push_back({rs[k], 1});
            continue;
        }
        if ((f0 < 0) != (f1 < 0) && f1 != 0.0) {
            const double r = bisect(red, rs[k], rs[k + 1], f0);
            if (red.accept(r)) roots.push_back({r, 1});
        }
    }
    // Touching roots: |F| has an interior local minimum without a sign change.
    for (int k = 2; k + 1 < kProbes; ++k) {
        const double a = fs[k - 1], b = fs[k], c = fs[k + 1];
        if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c)) continue;
        if ((a < 0) != (b < 0) || (b < 0) != (c < 0)) continue;
        if (!(std::abs(b) < std::abs(a) && std::abs(b) <= std::abs(c))) continue;
        // a genuine touching root is flanked by clearly nonzero values; dips inside a flat run are noise
        if (flat[k - 1] || flat[k + 1]) continue;
        const double s = b < 0 ? -1.0 : 1.0;
        const double rm = golden_min(red, rs[k - 1], rs[k + 1], s);
        const double fm = red.F(rm);
        if ((fm < 0) != (b < 0)) {
            const double r1 = bisect(red, rs[k - 1], rm, a);
            const double r2 = bisect(red, rm, rs[k + 1], fm);
            if (red.accept(r1)) roots.push_back({r1, 1});
            if (red.accept(r2)) roots.push_back({r2, 1});
        } else if (red.accept(rm)) {
            roots.push_back({rm, 2});
        }
    }
    std::sort(roots.begin(), roots.end());
    // true when probes lie strictly between a and b and all of them are within tolerance of zero
    auto same_flat_run = [&](double a, double b) {
        int inside = 0;
        for (int k = 0; k < kProbes; ++k) {
            if (rs[k] <= a || rs[k] >= b) continue;
            if (!flat[k]) return false;
            ++inside;
        }
        return inside > 0;
    };
    for (const auto& [r, m] : roots) {
        if (!out.radii.empty() && std::abs(r - out.radii.back()) <= 1e-8 * std::max(1.0, r)) {
            out.multiplicity.back() = 2;
            continue;
        }
        if (!out.radii.empty() && same_flat_run(out.radii.back(), r)) continue;
        out.radii.push_back(r);
        out.multiplicity.push_back(m);
    }
    return out;
}

}  // namespace

std::vector<SectionSample> sample_axisymmetric_tube(const World& w, const Vec& y, Kind kind,
                                                    const std::vector<double>& tau_grid, int threads) {
    const auto& spec = w.spec();
    if (!spec || (spec->kind != WorldKind::case1 && spec->kind != WorldKind::case2))
        throw InputError("axisymmetric sampling needs a case1 or case2 world");
    const AxisFrame fr = axis_frame(w, y);
    const Mat& g = w.metric();
    const Vec gy = g * y;
    const double bn = spec->b.norm();
    if (bn > 0) {
        const Vec proj = (spec->b.dot(y) / gy.dot(y)) * gy;
        if ((spec->b - proj).norm() > 1e-9 * bn) throw InputError("b must be parallel to y (b_i proportional to g_ik y^k)");
    }
    const double g_red = std::max(std::abs(spec->alpha) * fr.y_norm, 1e-3);
    std::vector<SectionSample> out(tau_grid.size());
    auto work = [&](size_t lo, size_t hi) {
        for (size_t i = lo; i < hi; ++i) {
            Reduced red{&w, kind, fr, tau_grid[i], Vec::Zero(w.dim())};
            out[i] = sample_one(red, g_red);
        }
    };
    threads = std::max(1, threads);
    if (threads == 1 || tau_grid.size() < 2) {
        work(0, tau_grid.size());
    } else {
        std::vector<std::thread> pool;
        const size_t n = tau_grid.size();
        const size_t chunk = (n + threads - 1) / threads;
        for (size_t lo = 0; lo < n; lo += chunk) pool.emplace_back(work, lo, std::min(n, lo + chunk));
        for (auto& t : pool) t.join();
    }
    return out;
}

double kind_squared_length(const World& w, Kind kind, const Vec& P, const Vec& Q) {
    switch (kind) {
        case Kind::future: return 2.0 * w.sigma(P, Q);
        case Kind::past: return 2.0 * w.sigma(Q, P);
        case Kind::neutral: return 2.0 * w.G(P, Q);
    }
    return 0.0;
}

Vec broken_tube_seed(const World& w, Kind kind, const Vec& P0, const Vec& dir, double mu) {
    w.check_point(P0);
    w.check_point(dir);
    if (!(mu > 0)) throw InputError("mu must be positive");
    const Mat& g = w.metric();
    double s = mu;
    if (g.rows() == w.dim()) {
        const double dd = dir.dot(g * dir);
        if (!(dd > 0)) throw InputError("seed direction must be timelike");
        s = mu / std::sqrt(dd);
    }
    // Newton on s for kind_squared_length(P0, P0 + s dir) = mu^2
    for (int it = 0; it < 60; ++it) {
        const double f = kind_squared_length(w, kind, P0, P0 + s * dir) - mu * mu;
        const double h = 1e-7 * std::max(1.0, s);
        const double df = (kind_squared_length(w, kind, P0, P0 + (s + h) * dir) -
                           kind_squared_length(w, kind, P0, P0 + (s - h) * dir)) /
                          (2.0 * h);
        if (!(std::abs(df) > 0)) throw SolverError("seed length is stationary along the direction");
        const double ds = f / df;
        s -= ds;
        if (std::abs(ds) <= 1e-15 * std::max(1.0, s)) break;
    }
    if (std::abs(kind_squared_length(w, kind, P0, P0 + s * dir) - mu * mu) > 1e-12 * mu * mu)
        throw SolverError("could not place the seed vertex at length mu");
    return P0 + s * dir;
}

namespace {

// Stationary point of obj(P) subject to con(P) = mu^2/2 by damped Newton on the Lagrangian.
struct StepProblem {
    std::function<double(const Vec&)> obj, con;
    double target;
};

bool newton_step_solve(const StepProblem& pb, Vec& P, double& lam, int max_iter = 60) {
    const int d = static_cast<int>(P.size());
    auto wrap = [](const std::function<double(const Vec&)>& f) -> Fn2 {
        return [f](const Vec&, const Vec& v) { return f(v); };
    };
    const Fn2 fo = wrap(pb.obj), fc = wrap(pb.con);
    const Vec dummy = Vec::Zero(d);
    auto residual = [&](const Vec& X, double L) {
        Vec r(d + 1);
        r.head(d) = grad_xp(fo, dummy, X) - L * grad_xp(fc, dummy, X);
        r[d] = pb.con(X) - pb.target;
        return r;
    };
    {
        const Vec go = grad_xp(fo, dummy, P), gc = grad_xp(fc, dummy, P);
        const double den = gc.squaredNorm();
        if (den > 0) lam = go.dot(gc) / den;
    }
    Vec r = residual(P, lam);
    for (int it = 0; it < max_iter; ++it) {
        const Vec gc = grad_xp(fc, dummy, P);
        Mat J = Mat::Zero(d + 1, d + 1);
        J.topLeftCorner(d, d) = hess_xp(fo, dummy, P) - lam * hess_xp(fc, dummy, P);
        J.topRightCorner(d, 1) = -gc;
        J.bottomLeftCorner(1, d) = gc.transpose();
        Eigen::FullPivLU<Mat> lu(J);
        if (!lu.isInvertible()) return false;
        const Vec dx = lu.solve(-r);
        double t = 1.0;
        Vec Pn;
        double ln = lam;
        Vec rn;
        for (int ls = 0; ls < 30; ++ls) {
            Pn = P + t * dx.head(d);
            ln = lam + t * dx[d];
            rn = residual(Pn, ln);
            if (rn.allFinite() && rn.norm() < r.norm() * (1.0 - 1e-4 * t)) break;
            t *= 0.5;
        }
        const double step = (Pn - P).norm();
        const bool improved = rn.allFinite() && rn.norm() <= r.norm();
        if (improved) {
            P = Pn;
            lam = ln;
            r = rn;
        }
        if (step <= 1e-14 * (1.0 + P.norm()) || !improved) return r.norm() <= 1e-7 * (1.0 + std::abs(pb.target));
    }
    return r.norm() <= 1e-7 * (1.0 + std::abs(pb.target));
}

double parallel_defect(const World& w, Kind kind, const Vec& A, const Vec& B, const Vec& C) {
    const double lab = 2.0 * w.G(A, B), lbc = 2.0 * w.G(B, C);
    const double lens = std::sqrt(std::max(lab, 0.0)) * std::sqrt(std::max(lbc, 0.0));
    const double fwd = vector_product(w, A, B, B, C);
    const double rev = vector_product(w, B, C, A, B);
    switch (kind) {
        case Kind::future: return lens - fwd;
        case Kind::past: return lens - rev;
        case Kind::neutral: return lens - std::sqrt(std::max(fwd * rev, 0.0));
    }
    return 0.0;
}

}  // namespace

BrokenTube build_broken_tube(const World& w, Kind kind, const Vec& P0, const Vec& P1, double mu, int steps) {
    w.check_point(P0);
    w.check_point(P1);
    if (!(mu > 0)) throw InputError("mu must be positive");
    if (steps < 1) throw InputError("steps must be at least 1");
    const double l01 = kind_squared_length(w, kind, P0, P1);
    if (!(l01 > 0) || std::abs(std::sqrt(l01) - mu) > 1e-8 * mu)
        throw InputError("seed segment length does not match mu");

    BrokenTube bt;
    bt.mu = mu;
    bt.kind = kind;
    bt.vertices = {P0, P1};
    bt.length_error.push_back(std::abs(std::sqrt(l01) - mu) / mu);
    const int d = w.dim();
    const double target = 0.5 * mu * mu;
    for (int step = 0; step < steps; ++step) {
        const Vec Pa = bt.vertices[bt.vertices.size() - 2];
        const Vec Pb = bt.vertices.back();
        StepProblem pb;
        pb.target = target;
        switch (kind) {
            case Kind::future:
                pb.obj = [&w, Pa](const Vec& P) { return w.sigma(Pa, P); };
                pb.con = [&w, Pb](const Vec& P) { return w.sigma(Pb, P); };
                break;
            case Kind::past:
                pb.obj = [&w, Pa](const Vec& P) { return w.sigma(P, Pa); };
                pb.con = [&w, Pb](const Vec& P) { return w.sigma(P, Pb); };
                break;
            case Kind::neutral:
                pb.obj = [&w, Pa](const Vec& P) { return w.G(Pa, P); };
                pb.con = [&w, Pb](const Vec& P) { return w.G(Pb, P); };
                break;
        }
        Vec P = 2.0 * Pb - Pa;
        double lam = 2.0;
        if (!newton_step_solve(pb, P, lam)) throw SolverError("broken tube: Newton did not converge at step " + std::to_string(step));

        // second start, perturbed off the straight continuation
        Vec Q = 2.0 * Pb - Pa;
        for (int i = 0; i < d; ++i) Q[i] += 1e-2 * mu * ((i % 2) ? -1.0 : 1.0) / std::sqrt(double(d));
        double lq = 2.0;
        if (newton_step_solve(pb, Q, lq) && (Q - P).norm() > 1e-6 * mu) {
            bt.multiplicity = true;
            bt.multiplicity_steps.push_back(step);
        }
        bt.vertices.push_back(P);
        const double lk = kind_squared_length(w, kind, Pb, P);
        bt.length_error.push_back(std::abs(std::sqrt(std::max(lk, 0.0)) - mu) / mu);
        bt.parallel_residual.push_back(parallel_defect(w, kind, Pa, Pb, P));
    }
    return bt;
}

}  // namespace tgeom
