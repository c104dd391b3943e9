#include "tgeom/lines.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <Eigen/LU>

#include "tgeom/calculus.hpp"
#include "tgeom/io.hpp"

namespace tgeom {

namespace {

std::string fmt(const char* f, double a, double b) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

// Defining equation of the implicit line: F(x) = τ c with Jacobian J = dF/dx.
struct ImplicitSystem {
    Fn2 fn;
    Kind kind;
    Vec xA, c;

    Vec F(const Vec& x) const { return kind == Kind::past ? grad_x(fn, xA, x) : grad_xp(fn, x, xA); }
    Mat J(const Vec& x) const {
        return kind == Kind::past ? Mat(mixed_xp_x(fn, xA, x).transpose()) : mixed_xp_x(fn, x, xA);
    }
};

ImplicitSystem make_system(const World& w, Kind kind, const Vec& xA, const Vec& xB) {
    w.check_point(xA);
    w.check_point(xB);
    if (xA.size() != xB.size()) throw InputError("endpoint dimensions differ");
    ImplicitSystem s{part_fn(w, kind == Kind::neutral ? Part::G : Part::sigma), kind, xA, Vec()};
    s.c = kind == Kind::past ? grad_x(s.fn, xA, xB) : grad_xp(s.fn, xB, xA);
    if (!(s.c.norm() > 0)) throw InputError("gradient covector vanishes; endpoints coincide?");
    return s;
}

bool newton(const ImplicitSystem& s, double tau, Vec& x, double& rel_defect) {
    const Vec rhs = tau * s.c;
    const double scale = s.c.norm();
    Vec r = s.F(x) - rhs;
    for (int it = 0; it < 60; ++it) {
        Eigen::FullPivLU<Mat> lu(s.J(x));
        if (!lu.isInvertible() || lu.rcond() < 1e-14) throw SolverError("singular Jacobian of the gradient-line system");
        const Vec dx = lu.solve(-r);
        double t = 1.0;
        Vec xn = x + dx, rn = s.F(xn) - rhs;
        for (int ls = 0; ls < 30 && !(rn.allFinite() && rn.norm() < r.norm()); ++ls) {
            t *= 0.5;
            xn = x + t * dx;
            rn = s.F(xn) - rhs;
        }
        if (!(rn.allFinite() && rn.norm() <= r.norm())) break;
        x = xn;
        r = rn;
        if (t * dx.norm() <= 1e-14 * (1.0 + x.norm())) break;
    }
    rel_defect = r.norm() / scale;
    return x.allFinite() && rel_defect <= 1e-9;
}

}  // namespace

Trajectory gradient_line_implicit(const World& w, Kind kind, const Vec& xA, const Vec& xB,
                                  const std::vector<double>& tau_grid) {
    if (tau_grid.empty()) throw InputError("tau grid is empty");
    for (size_t i = 1; i < tau_grid.size(); ++i)
        if (!(tau_grid[i] > tau_grid[i - 1])) throw InputError("tau grid must be strictly increasing");
    const ImplicitSystem s = make_system(w, kind, xA, xB);

    // a_i ≠ 0 makes the future/past equation inconsistent at τ = 0.
    double a_norm = 0.0;
    if (kind != Kind::neutral) a_norm = grad_x(part_fn(w, Part::sigma), xA, xA).norm();
    const bool rough = a_norm > 1e-10 * (1.0 + s.c.norm());

    Trajectory t;
    t.kind = kind;
    Vec x = xA + tau_grid.front() * (xB - xA);
    for (double tau : tau_grid) {
        double blow = 0.0;
        if (rough) {
            const Vec chord = xA + tau * (xB - xA);
            blow = tau != 0.0 ? (s.F(chord) - tau * s.c).norm() / (std::abs(tau) * s.c.norm()) : HUGE_VAL;
        }
        // near τ = 0, or wherever the chord defect exceeds the right-hand side itself
        const bool guarded = rough && (tau < 0.05 || blow > 1.0);
        if (guarded) {
            t.warnings.push_back(fmt("rough antisymmetry: defining equation degenerates near tau=0 (tau=%.6g, "
                                     "relative defect on chord %.6g)",
                                     tau, blow));
        }
        Vec trial = x;
        double defect = 0.0;
        bool ok = false;
        for (int attempt = 0; attempt < 2 && !ok; ++attempt) {
            // second attempt restarts from the chord
            if (attempt == 1) trial = xA + tau * (xB - xA);
            try {
                ok = newton(s, tau, trial, defect);
            } catch (const SolverError&) {
                if (!guarded && attempt == 1) throw;
            }
        }
        if (!ok) {
            if (guarded) {
                t.warnings.push_back(fmt("rough antisymmetry: no solution at tau=%.6g (defect %.6g); sample skipped",
                                         tau, defect));
                x = xA + tau * (xB - xA);
                continue;
            }
            throw SolverError(fmt("gradient line: Newton did not converge at tau=%.6g (defect %.3g)", tau, defect));
        }
        x = trial;
        t.params.push_back(tau);
        t.points.push_back(x);
        t.residuals.push_back(defect);
    }
    return t;
}

Vec implicit_tangent(const World& w, Kind kind, const Vec& xA, const Vec& xB) {
    const ImplicitSystem s = make_system(w, kind, xA, xB);
    Eigen::FullPivLU<Mat> lu(s.J(xA));
    if (!lu.isInvertible()) throw SolverError("singular Jacobian at the start point");
    return lu.solve(s.c);
}

OdeForm ode_form_from_string(const std::string& s) {
    if (s == "tilde") return OdeForm::tilde;
    if (s == "fine") return OdeForm::fine;
    throw InputError("unknown ODE form '" + s + "' (expected tilde|fine)");
}

namespace {

using Conn = std::function<Tensor3(const Vec&)>;

Vec accel(const Conn& conn, const Vec& x, const Vec& v) {
    const Tensor3 g = conn(x);
    const int d = static_cast<int>(x.size());
    Vec a = Vec::Zero(d);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k)
            for (int l = 0; l < d; ++l) a[i] -= g(i, k, l) * v[k] * v[l];
    return a;
}

void rk4(const Conn& conn, Vec x, Vec v, double tau0, double tau1, int n, std::vector<Vec>& xs, std::vector<Vec>& vs) {
    const double h = (tau1 - tau0) / n;
    if (!(std::abs(h) > 0) || tau0 + h == tau0) throw SolverError("ODE step underflow");
    xs.assign(1, x);
    vs.assign(1, v);
    for (int s = 0; s < n; ++s) {
        const Vec k1x = v, k1v = accel(conn, x, v);
        const Vec x2 = x + 0.5 * h * k1x, v2 = v + 0.5 * h * k1v;
        const Vec k2x = v2, k2v = accel(conn, x2, v2);
        const Vec x3 = x + 0.5 * h * k2x, v3 = v + 0.5 * h * k2v;
        const Vec k3x = v3, k3v = accel(conn, x3, v3);
        const Vec x4 = x + h * k3x, v4 = v + h * k3v;
        const Vec k4x = v4, k4v = accel(conn, x4, v4);
        x += (h / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
        v += (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        if (!x.allFinite() || !v.allFinite()) throw SolverError("ODE solution left the finite range");
        xs.push_back(x);
        vs.push_back(v);
    }
}

}  // namespace

Trajectory gradient_line_ode(const World& w, Kind kind, const Vec& x0, const Vec& v0, double tau0, double tau1,
                             int steps, OdeForm form) {
    w.check_point(x0);
    if (v0.size() != x0.size() || !v0.allFinite()) throw InputError("initial velocity has the wrong dimension");
    if (steps < 1) throw InputError("steps must be at least 1");
    if (!(tau1 > tau0)) throw InputError("tau span must be increasing");

    Conn conn;
    if (form == OdeForm::tilde) {
        conn = [&w, kind](const Vec& x) { return coincidence_connection(w, kind, x); };
    } else {
        const double a0 = coincidence_coefficients(w, x0).a.norm();
        if (a0 >= 1e-10) throw InputError("fine-antisymmetry form needs a_i = 0 at the start point");
        conn = [&w, kind](const Vec& x) {
            const CoincidenceCoefficients c = coincidence_coefficients(w, x);
            Tensor3 g = c.gamma;
            const double s = kind == Kind::future ? 1.0 : kind == Kind::past ? -1.0 : 0.0;
            for (size_t i = 0; i < g.v.size(); ++i) g.v[i] += s * c.beta.v[i];
            return g;
        };
    }

    constexpr int kMaxFactor = 1 << 10;
    int factor = 1;
    std::vector<Vec> xs, vs, xs2, vs2;
    rk4(conn, x0, v0, tau0, tau1, steps, xs, vs);
    bool converged = false;
    while (true) {
        rk4(conn, x0, v0, tau0, tau1, 2 * steps * factor, xs2, vs2);
        if ((xs.back() - xs2.back()).norm() < 1e-8) {
            converged = true;
            break;
        }
        if (factor >= kMaxFactor) break;
        factor *= 2;
        xs.swap(xs2);
        vs.swap(vs2);
    }

    Trajectory t;
    t.kind = kind;
    t.steps_used = 2 * steps * factor;
    if (!converged) t.warnings.push_back("RK4 self-convergence not reached; endpoint change still >= 1e-8");
    const Fn2 gfn = part_fn(w, Part::G);
    for (int s = 0; s <= steps; ++s) {
        const Vec& xf = xs2[static_cast<size_t>(s) * 2 * factor];
        const Vec& vf = vs2[static_cast<size_t>(s) * 2 * factor];
        const Vec& xc = xs[static_cast<size_t>(s) * factor];
        t.params.push_back(tau0 + (tau1 - tau0) * s / steps);
        t.points.push_back(xf);
        t.residuals.push_back((xf - xc).norm());
        t.energy.push_back(-vf.dot(mixed_xp_x(gfn, xf, xf) * vf));
    }
    return t;
}

MonotoneMap MonotoneMap::identity() {
    return {"identity", [](double s) { return s; }, [](double) { return 1.0; }};
}

MonotoneMap MonotoneMap::scale(double c) {
    if (!(c > 0)) throw InputError("scale map needs c > 0");
    return {"scale:" + format_real(c), [c](double s) { return c * s; }, [c](double) { return c; }};
}

MonotoneMap MonotoneMap::quadratic(double eps) {
    return {"quadratic:" + format_real(eps), [eps](double s) { return s + eps * s * s; },
            [eps](double s) { return 1.0 + 2.0 * eps * s; }};
}

MonotoneMap MonotoneMap::parse(const std::string& s) {
    if (s == "identity") return identity();
    const auto colon = s.find(':');
    if (colon != std::string::npos) {
        const std::string head = s.substr(0, colon);
        double v = 0;
        try {
            size_t used = 0;
            v = std::stod(s.substr(colon + 1), &used);
            if (used != s.size() - colon - 1) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw InputError("bad map parameter in '" + s + "'");
        }
        if (head == "scale") return scale(v);
        if (head == "quadratic") return quadratic(v);
    }
    throw InputError("unknown map '" + s + "' (expected identity|scale:c|quadratic:eps)");
}

double reparam_invariance_check(const World& w, const MonotoneMap& f, Kind kind, const Vec& xA, const Vec& xB,
                                const std::vector<double>& tau_grid) {
    const Trajectory base = gradient_line_implicit(w, kind, xA, xB, tau_grid);
    // f' must keep its sign over the Σ values met along the line (both argument orders).
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const Vec& p : base.points)
        for (double v : {w.sigma(p, xA), w.sigma(xA, p), w.sigma(p, xB), w.sigma(xB, p)}) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    for (int k = 0; k <= 64; ++k) {
        const double s = lo + (hi - lo) * k / 64.0;
        if (!(f.df(s) > 0)) throw InputError("map derivative is not positive on the encountered range");
    }
    const World wf = w.compose(f.f, f.name);
    const Trajectory other = gradient_line_implicit(wf, kind, xA, xB, tau_grid);
    return hausdorff_distance(base.points, other.points);
}

std::vector<Vec> chord_resample(const std::vector<Vec>& pts, int n) {
    if (pts.empty() || n < 2) throw InputError("chord resampling needs points and n >= 2");
    std::vector<double> s(pts.size(), 0.0);
    for (size_t i = 1; i < pts.size(); ++i) s[i] = s[i - 1] + (pts[i] - pts[i - 1]).norm();
    std::vector<Vec> out;
    out.reserve(n);
    const double total = s.back();
    size_t j = 0;
    for (int k = 0; k < n; ++k) {
        if (total == 0.0) {
            out.push_back(pts.front());
            continue;
        }
        const double target = total * k / (n - 1);
        while (j + 2 < pts.size() && s[j + 1] < target) ++j;
        const double seg = s[j + 1] - s[j];
        const double u = seg > 0 ? std::clamp((target - s[j]) / seg, 0.0, 1.0) : 0.0;
        out.push_back(pts[j] + u * (pts[j + 1] - pts[j]));
    }
    return out;
}

double curve_deviation(const std::vector<Vec>& a, const std::vector<Vec>& b, int n) {
    if (a.size() < 2 || b.size() < 2) throw InputError("curve comparison needs at least two points per curve");
    const auto ra = chord_resample(a, n), rb = chord_resample(b, n);
    double m = 0.0;
    for (int k = 0; k < n; ++k) m = std::max(m, (ra[k] - rb[k]).norm());
    return m;
}

double polyline_distance(const Vec& p, const std::vector<Vec>& poly) {
    if (poly.empty()) throw InputError("empty polyline");
    double best = (p - poly.front()).norm();
    for (size_t i = 0; i + 1 < poly.size(); ++i) {
        const Vec e = poly[i + 1] - poly[i];
        const double ee = e.squaredNorm();
        const double u = ee > 0 ? std::clamp((p - poly[i]).dot(e) / ee, 0.0, 1.0) : 0.0;
        best = std::min(best, (p - poly[i] - u * e).norm());
    }
    return best;
}

double curve_distance(const Vec& p, const std::vector<Vec>& curve) {
    if (curve.size() < 3) return polyline_distance(p, curve);
    // nearest segment, then quadratic interpolants through the neighbouring point triples
    size_t seg = 0;
    double best = HUGE_VAL;
    for (size_t i = 0; i + 1 < curve.size(); ++i) {
        const double dd = polyline_distance(p, {curve[i], curve[i + 1]});
        if (dd < best) {
            best = dd;
            seg = i;
        }
    }
    const size_t lo = seg > 0 ? seg - 1 : 0;
    const size_t hi = std::min(seg, curve.size() - 3);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    for (size_t i = lo; i <= hi; ++i) {
        const Vec &a = curve[i], &b = curve[i + 1], &c = curve[i + 2];
        const double s1 = (b - a).norm(), s2 = s1 + (c - b).norm();
        if (!(s1 > 0) || !(s2 > s1)) continue;
        auto q = [&](double s) {
            return Vec(a * ((s - s1) * (s - s2) / (s1 * s2)) + b * (s * (s - s2) / (s1 * (s1 - s2))) +
                       c * (s * (s - s1) / (s2 * (s2 - s1))));
        };
        // restrict to the interval of the nearest segment
        double x0 = i == seg ? 0.0 : s1, x1 = i == seg ? s1 : s2;
        double m1 = x1 - gr * (x1 - x0), m2 = x0 + gr * (x1 - x0);
        double f1 = (p - q(m1)).norm(), f2 = (p - q(m2)).norm();
        for (int it = 0; it < 100 && x1 - x0 > 1e-15 * s2; ++it) {
            if (f1 < f2) {
                x1 = m2;
                m2 = m1;
                f2 = f1;
                m1 = x1 - gr * (x1 - x0);
                f1 = (p - q(m1)).norm();
            } else {
                x0 = m1;
                m1 = m2;
                f1 = f2;
                m2 = x0 + gr * (x1 - x0);
                f2 = (p - q(m2)).norm();
            }
        }
        best = std::min({best, f1, f2});
    }
    return best;
}

double hausdorff_distance(const std::vector<Vec>& a, const std::vector<Vec>& b) {
    double m = 0.0;
    for (const Vec& p : a) m = std::max(m, curve_distance(p, b));
    for (const Vec& p : b) m = std::max(m, curve_distance(p, a));
    return m;
}

}  // namespace tgeom
