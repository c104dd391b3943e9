#include "tgeom/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tgeom {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Powers of two keep every stencil point exactly representable relative to the anchor.
double pow2_step(double target) { return std::ldexp(1.0, static_cast<int>(std::lround(std::log2(target)))); }

struct Stencil1 {
    int n;
    int off[5];
    double wt[5];
};

const Stencil1& stencil_for(int m) {
    static const Stencil1 s1{2, {-1, 1}, {-0.5, 0.5}};
    static const Stencil1 s2{3, {-1, 0, 1}, {1.0, -2.0, 1.0}};
    static const Stencil1 s3{4, {-2, -1, 1, 2}, {-0.5, 1.0, -1.0, 0.5}};
    static const Stencil1 s4{5, {-2, -1, 0, 1, 2}, {1.0, -4.0, 6.0, -4.0, 1.0}};
    switch (m) {
        case 1: return s1;
        case 2: return s2;
        case 3: return s3;
        case 4: return s4;
        default: throw InputError("finite-difference order must be 1..4");
    }
}

// Tensor-product central stencil. F returns a value type R that supports R * double and +=.
template <class R, class F>
R stencil_apply(const F& f, const Vec& x, const Vec& xp, const int* vars, int nvars, double h, R zero) {
    const int d = static_cast<int>(x.size());
    int idx[4], mult[4], ng = 0;
    if (nvars < 1 || nvars > 4) throw InputError("mixed partial order must be 1..4");
    for (int a = 0; a < nvars; ++a) {
        if (vars[a] < 0 || vars[a] >= 2 * d) throw InputError("mixed partial variable out of range");
        int g = 0;
        while (g < ng && idx[g] != vars[a]) ++g;
        if (g == ng) {
            idx[ng] = vars[a];
            mult[ng] = 0;
            ++ng;
        }
        ++mult[g];
    }
    const Stencil1* st[4];
    for (int g = 0; g < ng; ++g) st[g] = &stencil_for(mult[g]);
    int c[4] = {0, 0, 0, 0};
    R total = zero;
    Vec u = x, v = xp;
    while (true) {
        double wt = 1.0;
        u = x;
        v = xp;
        for (int g = 0; g < ng; ++g) {
            wt *= st[g]->wt[c[g]];
            const double off = st[g]->off[c[g]] * h;
            if (idx[g] < d)
                u[idx[g]] += off;
            else
                v[idx[g] - d] += off;
        }
        R val = f(u, v);
        total += val * wt;
        int g = 0;
        while (g < ng) {
            if (++c[g] < st[g]->n) break;
            c[g] = 0;
            ++g;
        }
        if (g == ng) break;
    }
    return total * (1.0 / std::pow(h, nvars));
}

// Σ(x,x') and Σ(x',x) together so that G and A derivatives come from one stencil pass.
struct PairEval {
    const World* w;
    Eigen::Vector2d operator()(const Vec& u, const Vec& v) const {
        const Eigen::Vector2d r(w->sigma(u, v), w->sigma(v, u));
        if (!r.allFinite()) throw SolverError("non-finite world function value inside a finite-difference stencil");
        return r;
    }
};

struct Triple {
    double s, g, a;
};

Triple pair_partial(const World& w, const Vec& x, const Vec& xp, std::initializer_list<int> vars, double h) {
    const Eigen::Vector2d r =
        stencil_apply(PairEval{&w}, x, xp, vars.begin(), static_cast<int>(vars.size()), h, Eigen::Vector2d::Zero().eval());
    return {r[0], 0.5 * (r[0] + r[1]), 0.5 * (r[0] - r[1])};
}

void init_derivs(TwoPointDerivs& t, int d, int order) {
    t.d_x = Vec::Zero(d);
    t.d_xp = Vec::Zero(d);
    if (order >= 2) {
        t.d_x_xp = Mat::Zero(d, d);
        t.d_x_x = Mat::Zero(d, d);
        t.d_xp_xp = Mat::Zero(d, d);
    }
    if (order >= 3) {
        t.d_x_x_xp = Tensor3(d);
        t.d_xp_xp_x = Tensor3(d);
        t.d_x_x_x = Tensor3(d);
    }
    if (order >= 4) t.d_x_x_xp_xp = Tensor4(d);
}

Mat inverse_checked(const Mat& m, const char* what) {
    Eigen::FullPivLU<Mat> lu(m);
    if (!lu.isInvertible()) throw SolverError(std::string(what) + " is singular");
    const double rc = lu.rcond();
    if (!(rc > 1e-14)) throw SolverError(std::string(what) + " is numerically singular");
    return lu.inverse();
}

}  // namespace

Fn2 part_fn(const World& w, Part p) {
    switch (p) {
        case Part::sigma: return [w](const Vec& x, const Vec& xp) { return w.sigma(x, xp); };
        case Part::G: return [w](const Vec& x, const Vec& xp) { return w.G(x, xp); };
        case Part::A: return [w](const Vec& x, const Vec& xp) { return w.A(x, xp); };
    }
    return {};
}

double FdSteps::for_order(int order) const {
    switch (order) {
        case 1: return h1;
        case 2: return h2;
        case 3: return h3;
        default: return h4;
    }
}

FdSteps fd_steps(const Vec& x, const Vec& xp) {
    double n = 0.0;
    if (x.size() > 0) n = x.cwiseAbs().maxCoeff();
    if (xp.size() > 0) n = std::max(n, xp.cwiseAbs().maxCoeff());
    const double s = 1.0 + n;
    FdSteps st;
    st.h1 = pow2_step(std::cbrt(kEps) * s);
    st.h2 = st.h1;
    st.h3 = pow2_step(std::pow(kEps, 0.2) * s);
    st.h4 = pow2_step(std::pow(kEps, 1.0 / 6.0) * s);
    return st;
}

double mixed_partial(const Fn2& f, const Vec& x, const Vec& xp, const int* vars, int nvars, double h) {
    if (!(h > 0)) throw InputError("finite-difference step must be positive");
    auto g = [&](const Vec& u, const Vec& v) {
        const double r = f(u, v);
        if (!std::isfinite(r)) throw SolverError("non-finite function value inside a finite-difference stencil");
        return r;
    };
    return stencil_apply(g, x, xp, vars, nvars, h, 0.0);
}

Vec grad_x(const Fn2& f, const Vec& x, const Vec& xp, double h) {
    if (h <= 0) h = fd_steps(x, xp).h1;
    const int d = static_cast<int>(x.size());
    Vec out(d);
    for (int i = 0; i < d; ++i) out[i] = mixed_partial(f, x, xp, {i}, h);
    return out;
}

Vec grad_xp(const Fn2& f, const Vec& x, const Vec& xp, double h) {
    if (h <= 0) h = fd_steps(x, xp).h1;
    const int d = static_cast<int>(x.size());
    Vec out(d);
    for (int i = 0; i < d; ++i) out[i] = mixed_partial(f, x, xp, {d + i}, h);
    return out;
}

Mat hess_xp(const Fn2& f, const Vec& x, const Vec& xp, double h) {
    if (h <= 0) h = fd_steps(x, xp).h2;
    const int d = static_cast<int>(x.size());
    Mat out(d, d);
    for (int i = 0; i < d; ++i)
        for (int k = i; k < d; ++k) out(i, k) = out(k, i) = mixed_partial(f, x, xp, {d + i, d + k}, h);
    return out;
}

Mat mixed_xp_x(const Fn2& f, const Vec& x, const Vec& xp, double h) {
    if (h <= 0) h = fd_steps(x, xp).h2;
    const int d = static_cast<int>(x.size());
    Mat out(d, d);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) out(i, k) = mixed_partial(f, x, xp, {d + i, k}, h);
    return out;
}

static void fill_bundle(const World& w, const Vec& x, const Vec& xp, int max_order, double h_user,
                        DerivativeBundle& b) {
    const int d = w.dim();
    b.max_order = max_order;
    b.steps = fd_steps(x, xp);
    init_derivs(b.sigma, d, max_order);
    init_derivs(b.G, d, max_order);
    init_derivs(b.A, d, max_order);
    auto step = [&](int order) { return h_user > 0 ? h_user : b.steps.for_order(order); };
    auto put = [&](auto setter, const Triple& t) {
        setter(b.sigma, t.s);
        setter(b.G, t.g);
        setter(b.A, t.a);
    };

    const double h1 = step(1);
    for (int i = 0; i < d; ++i) {
        put([&](TwoPointDerivs& T, double v) { T.d_x[i] = v; }, pair_partial(w, x, xp, {i}, h1));
        put([&](TwoPointDerivs& T, double v) { T.d_xp[i] = v; }, pair_partial(w, x, xp, {d + i}, h1));
    }
    if (max_order < 2) return;
    const double h2 = step(2);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) {
            put([&](TwoPointDerivs& T, double v) { T.d_x_xp(i, k) = v; }, pair_partial(w, x, xp, {i, d + k}, h2));
            if (k >= i) {
                put([&](TwoPointDerivs& T, double v) { T.d_x_x(i, k) = T.d_x_x(k, i) = v; },
                    pair_partial(w, x, xp, {i, k}, h2));
                put([&](TwoPointDerivs& T, double v) { T.d_xp_xp(i, k) = T.d_xp_xp(k, i) = v; },
                    pair_partial(w, x, xp, {d + i, d + k}, h2));
            }
        }
    if (max_order < 3) return;
    const double h3 = step(3);
    for (int i = 0; i < d; ++i)
        for (int k = i; k < d; ++k)
            for (int l = 0; l < d; ++l) {
                put([&](TwoPointDerivs& T, double v) { T.d_x_x_xp(i, k, l) = T.d_x_x_xp(k, i, l) = v; },
                    pair_partial(w, x, xp, {i, k, d + l}, h3));
                put([&](TwoPointDerivs& T, double v) { T.d_xp_xp_x(i, k, l) = T.d_xp_xp_x(k, i, l) = v; },
                    pair_partial(w, x, xp, {d + i, d + k, l}, h3));
                if (l >= k) {
                    put(
                        [&](TwoPointDerivs& T, double v) {
                            const int p[3] = {i, k, l};
                            int q[3] = {0, 1, 2};
                            do {
                                T.d_x_x_x(p[q[0]], p[q[1]], p[q[2]]) = v;
                            } while (std::next_permutation(q, q + 3));
                        },
                        pair_partial(w, x, xp, {i, k, l}, h3));
                }
            }
    if (max_order < 4) return;
    const double h4 = step(4);
    for (int i = 0; i < d; ++i)
        for (int l = i; l < d; ++l)
            for (int k = 0; k < d; ++k)
                for (int j = k; j < d; ++j)
                    put(
                        [&](TwoPointDerivs& T, double v) {
                            T.d_x_x_xp_xp(i, l, k, j) = v;
                            T.d_x_x_xp_xp(l, i, k, j) = v;
                            T.d_x_x_xp_xp(i, l, j, k) = v;
                            T.d_x_x_xp_xp(l, i, j, k) = v;
                        },
                        pair_partial(w, x, xp, {i, l, d + k, d + j}, h4));
}

DerivativeBundle fd_derivatives(const World& w, const Vec& x, const Vec& xp, int max_order, double h) {
    w.check_point(x);
    w.check_point(xp);
    if (max_order < 1 || max_order > 4) throw InputError("max_order must be 1..4");
    DerivativeBundle b;
    fill_bundle(w, x, xp, max_order, h, b);

    DerivativeBundle s;
    fill_bundle(w, xp, x, std::min(max_order, 2), h, s);
    double defect = 0.0;
    const int d = w.dim();
    for (int i = 0; i < d; ++i) {
        defect = std::max(defect, std::abs(b.G.d_x[i] - s.G.d_xp[i]));
        defect = std::max(defect, std::abs(b.A.d_x[i] + s.A.d_xp[i]));
    }
    if (max_order >= 2)
        for (int i = 0; i < d; ++i)
            for (int k = 0; k < d; ++k) {
                defect = std::max(defect, std::abs(b.G.d_x_xp(i, k) - s.G.d_x_xp(k, i)));
                defect = std::max(defect, std::abs(b.A.d_x_xp(i, k) + s.A.d_x_xp(k, i)));
                defect = std::max(defect, std::abs(b.G.d_x_x(i, k) - s.G.d_xp_xp(i, k)));
                defect = std::max(defect, std::abs(b.A.d_x_x(i, k) + s.A.d_xp_xp(i, k)));
            }
    b.symmetry_defect = defect;
    return b;
}

FundamentalMetric fundamental_metric(const World& w, const Vec& x, const Vec& xp) {
    const DerivativeBundle b = fd_derivatives(w, x, xp, 2);
    FundamentalMetric m;
    m.cov = b.sigma.d_x_xp;
    m.g_cov = b.G.d_x_xp;
    // Σ^{ik'} Σ_{lk'} = δ: contra = cov^{-T}
    m.contra = inverse_checked(m.cov, "covariant fundamental metric").transpose();
    m.g_contra = inverse_checked(m.g_cov, "symmetric fundamental metric").transpose();
    const int d = w.dim();
    m.identity_defect = (m.contra * m.cov.transpose() - Mat::Identity(d, d)).cwiseAbs().maxCoeff();
    return m;
}

static Tensor3 contract_christoffel(const Mat& contra, const Tensor3& third, bool primed) {
    const int d = third.d;
    Tensor3 out(d);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k)
            for (int l = 0; l < d; ++l) {
                double s = 0.0;
                for (int q = 0; q < d; ++q) s += (primed ? contra(q, i) : contra(i, q)) * third(k, l, q);
                out(i, k, l) = s;
            }
    return out;
}

ChristoffelSet christoffels(const World& w, const Vec& x, const Vec& xp) {
    const DerivativeBundle b = fd_derivatives(w, x, xp, 3);
    const Mat sc = inverse_checked(b.sigma.d_x_xp, "covariant fundamental metric").transpose();
    const Mat gc = inverse_checked(b.G.d_x_xp, "symmetric fundamental metric").transpose();
    ChristoffelSet c;
    c.tildeX = contract_christoffel(sc, b.sigma.d_x_x_xp, false);
    c.tildeXp = contract_christoffel(sc, b.sigma.d_xp_xp_x, true);
    c.gX = contract_christoffel(gc, b.G.d_x_x_xp, false);
    c.gXp = contract_christoffel(gc, b.G.d_xp_xp_x, true);
    return c;
}

Tensor3 coincidence_connection(const World& w, Kind kind, const Vec& x) {
    w.check_point(x);
    const int d = w.dim();
    const FdSteps st = fd_steps(x, x);
    const Part part = kind == Kind::neutral ? Part::G : Part::sigma;
    Mat Q(d, d);
    Tensor3 T(d);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) {
            const Triple t = pair_partial(w, x, x, {i, d + k}, st.h2);
            Q(i, k) = part == Part::G ? t.g : t.s;
        }
    const bool primed = kind == Kind::past;
    for (int i = 0; i < d; ++i)
        for (int k = i; k < d; ++k)
            for (int l = 0; l < d; ++l) {
                const Triple t = primed ? pair_partial(w, x, x, {d + i, d + k, l}, st.h3)
                                        : pair_partial(w, x, x, {i, k, d + l}, st.h3);
                T(i, k, l) = T(k, i, l) = part == Part::G ? t.g : t.s;
            }
    const Mat C = inverse_checked(Q, "coincidence fundamental metric").transpose();
    return contract_christoffel(C, T, primed);
}

CoincidenceCoefficients coincidence_coefficients(const World& w, const Vec& x) {
    const int d = w.dim();
    const DerivativeBundle b = fd_derivatives(w, x, x, 3);
    CoincidenceCoefficients c;
    c.a = b.sigma.d_x;
    c.g = 0.5 * (b.G.d_x_x + b.G.d_x_x.transpose());
    c.g_inv = inverse_checked(c.g, "coincidence metric g");
    c.sigma_f = b.sigma.d_x_x;
    c.sigma_p = b.sigma.d_xp_xp;
    c.g_tilde = -b.sigma.d_x_xp;
    // g~^{il} g~_{ik} = δ^l_k
    c.g_tilde_inv = inverse_checked(c.g_tilde, "coincidence metric g~").transpose();
    c.a3 = b.A.d_x_x_x;
    c.g3 = b.G.d_x_x_x;

    const Mat C = inverse_checked(b.sigma.d_x_xp, "coincidence fundamental metric").transpose();
    c.gamma_tilde_f = contract_christoffel(C, b.sigma.d_x_x_xp, false);
    c.gamma_tilde_p = contract_christoffel(C, b.sigma.d_xp_xp_x, true);
    const Mat CG = inverse_checked(b.G.d_x_xp, "coincidence symmetric fundamental metric").transpose();
    c.gamma = contract_christoffel(CG, b.G.d_x_x_xp, false);

    // β from the a-field: g^{si}(-(a_{k,ls} + a_{l,ks})/2 + a_kls).
    const double H = pow2_step(std::pow(kEps, 0.25) * (1.0 + x.cwiseAbs().maxCoeff()));
    auto a_field = [&](const Vec& y) {
        const double h1 = fd_steps(y, y).h1;
        Vec a(d);
        for (int i = 0; i < d; ++i) a[i] = pair_partial(w, y, y, {i}, h1).s;
        return a;
    };
    std::vector<Mat> dda(d, Mat::Zero(d, d));  // dda[k](l,s) = a_{k,ls}
    const Vec a0 = a_field(x);
    for (int l = 0; l < d; ++l)
        for (int s = l; s < d; ++s) {
            Vec acc = Vec::Zero(d);
            if (l == s) {
                Vec yp = x, ym = x;
                yp[l] += H;
                ym[l] -= H;
                acc = (a_field(yp) - 2.0 * a0 + a_field(ym)) / (H * H);
            } else {
                for (int sl : {-1, 1})
                    for (int ss : {-1, 1}) {
                        Vec y = x;
                        y[l] += sl * H;
                        y[s] += ss * H;
                        acc += (sl * ss) * a_field(y);
                    }
                acc /= 4.0 * H * H;
            }
            for (int k = 0; k < d; ++k) dda[k](l, s) = dda[k](s, l) = acc[k];
        }
    c.beta = Tensor3(d);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k)
            for (int l = 0; l < d; ++l) {
                double s = 0.0;
                for (int q = 0; q < d; ++q)
                    s += c.g_inv(q, i) * (-0.5 * (dda[k](l, q) + dda[l](k, q)) + c.a3(k, l, q));
                c.beta(i, k, l) = s;
            }
    return c;
}

TransportSpace transport_space_from_string(const std::string& s) {
    if (s == "tilde_xprime") return TransportSpace::tilde_xprime;
    if (s == "tilde_x") return TransportSpace::tilde_x;
    if (s == "g_xprime") return TransportSpace::g_xprime;
    if (s == "g_x") return TransportSpace::g_x;
    throw InputError("unknown transport space '" + s + "'");
}

Mat transport_tensor(const World& w, TransportSpace space, const Vec& x, const Vec& xp) {
    w.check_point(x);
    w.check_point(xp);
    const bool use_g = space == TransportSpace::g_xprime || space == TransportSpace::g_x;
    const bool to_x = space == TransportSpace::tilde_xprime || space == TransportSpace::g_xprime;
    const DerivativeBundle two = fd_derivatives(w, x, xp, 2);
    const Mat cov = use_g ? two.G.d_x_xp : two.sigma.d_x_xp;  // (q unprimed, k primed)
    const Vec& anchor = to_x ? xp : x;
    const DerivativeBundle co = fd_derivatives(w, anchor, anchor, 2);
    const Mat contra = inverse_checked(use_g ? co.G.d_x_xp : co.sigma.d_x_xp, "coincidence fundamental metric").transpose();
    // to_x:   P_k^{m'} = Σ_{kq'}(x,x') [Σ^{mq'}]_{x'}   -> cov * contra^T
    // to_x':  P_{k'}^m = Σ_{k'q}(x,x') [Σ^{mq'}]_x      -> cov^T * contra^T
    return to_x ? Mat(cov * contra.transpose()) : Mat(cov.transpose() * contra.transpose());
}

Vec parallel_transport(const World& w, TransportSpace space, const Vec& x, const Vec& xp, const Vec& covec) {
    if (covec.size() != w.dim()) throw InputError("covector dimension mismatch");
    if (x == xp) return covec;
    return transport_tensor(w, space, x, xp) * covec;
}

Tensor4 f_tensor(const World& w, const Vec& x, const Vec& xp, Part part) {
    const DerivativeBundle b = fd_derivatives(w, x, xp, 4);
    const TwoPointDerivs& t = part == Part::G ? b.G : (part == Part::A ? b.A : b.sigma);
    const int d = w.dim();
    const Mat C = inverse_checked(t.d_x_xp, "fundamental metric").transpose();  // C(s,m) = Σ^{sm'}
    Tensor4 F(d);
    for (int i = 0; i < d; ++i)
        for (int l = 0; l < d; ++l)
            for (int k = 0; k < d; ++k)
                for (int j = 0; j < d; ++j) {
                    double s = 0.0;
                    for (int a = 0; a < d; ++a)
                        for (int m = 0; m < d; ++m) s += t.d_xp_xp_x(j, k, a) * C(a, m) * t.d_x_x_xp(i, l, m);
                    F(i, l, k, j) = t.d_x_x_xp_xp(i, l, j, k) - s;
                }
    return F;
}

Tensor4 riemann_from_gamma(const Tensor3& gamma, const Tensor4& gd) {
    if (gamma.d != gd.d) throw InputError("riemann_from_gamma: shape mismatch");
    const int d = gamma.d;
    Tensor4 r(d);
    for (int l = 0; l < d; ++l)
        for (int s = 0; s < d; ++s)
            for (int i = 0; i < d; ++i)
                for (int k = 0; k < d; ++k) {
                    double v = gd(l, s, i, k) - gd(l, s, k, i);
                    for (int p = 0; p < d; ++p) v += gamma(p, s, i) * gamma(l, p, k) - gamma(p, s, k) * gamma(l, p, i);
                    r(l, s, i, k) = v;
                }
    return r;
}

Tensor4 field_gradient(const std::function<Tensor3(const Vec&)>& field, const Vec& x, double h) {
    if (h <= 0) h = pow2_step(std::pow(kEps, 0.2) * (1.0 + x.cwiseAbs().maxCoeff()));
    const Tensor3 f0 = field(x);
    const int d = f0.d;
    Tensor4 out(d);
    for (int m = 0; m < d; ++m) {
        Vec xp = x, xm = x;
        xp[m] += h;
        xm[m] -= h;
        const Tensor3 fp = field(xp), fm = field(xm);
        for (int i = 0; i < d; ++i)
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l) out(i, k, l, m) = (fp(i, k, l) - fm(i, k, l)) / (2.0 * h);
    }
    return out;
}

namespace {

// Γ^i_kl(x,x') = C(i,s) f_,kls' with C = (f_,is')^{-T}, and its partials with respect to x and x'
// obtained by the chain rule from fourth derivatives.
struct ChristoffelJet {
    Tensor3 gamma;
    Tensor4 d_x, d_xp;  // (i,k,l,m)
};

ChristoffelJet christoffel_jet(const Fn2& f, const Vec& x, const Vec& xp) {
    const int d = static_cast<int>(x.size());
    const FdSteps st = fd_steps(x, xp);
    Mat Q(d, d);
    for (int i = 0; i < d; ++i)
        for (int s = 0; s < d; ++s) Q(i, s) = mixed_partial(f, x, xp, {i, d + s}, st.h2);
    Tensor3 T(d), dQx(d), dQxp(d);  // T(k,l,s) = f_,kls'; dQx(i,s,m) = f_,ims'; dQxp(i,s,m) = f_,is'm'
    for (int k = 0; k < d; ++k)
        for (int l = k; l < d; ++l)
            for (int s = 0; s < d; ++s) {
                const double v = mixed_partial(f, x, xp, {k, l, d + s}, st.h3);
                T(k, l, s) = T(l, k, s) = v;
                dQx(k, s, l) = dQx(l, s, k) = v;
                const double u = mixed_partial(f, x, xp, {s, d + k, d + l}, st.h3);
                dQxp(s, k, l) = dQxp(s, l, k) = u;
            }
    // 4th derivatives: f_,klms' (3 unprimed + 1 primed) and f_,kls'm'
    std::vector<double> T3(static_cast<size_t>(d) * d * d * d), T22(static_cast<size_t>(d) * d * d * d);
    auto at = [d](int a, int b, int c, int e) { return ((static_cast<size_t>(a) * d + b) * d + c) * d + e; };
    for (int k = 0; k < d; ++k)
        for (int l = k; l < d; ++l)
            for (int m = l; m < d; ++m)
                for (int s = 0; s < d; ++s) {
                    const double v = mixed_partial(f, x, xp, {k, l, m, d + s}, st.h4);
                    const int p[3] = {k, l, m};
                    int q[3] = {0, 1, 2};
                    do {
                        T3[at(p[q[0]], p[q[1]], p[q[2]], s)] = v;
                    } while (std::next_permutation(q, q + 3));
                }
    for (int k = 0; k < d; ++k)
        for (int l = k; l < d; ++l)
            for (int s = 0; s < d; ++s)
                for (int m = s; m < d; ++m) {
                    const double v = mixed_partial(f, x, xp, {k, l, d + s, d + m}, st.h4);
                    T22[at(k, l, s, m)] = T22[at(l, k, s, m)] = T22[at(k, l, m, s)] = T22[at(l, k, m, s)] = v;
                }
    const Mat C = inverse_checked(Q, "fundamental metric").transpose();
    ChristoffelJet J;
    J.gamma = contract_christoffel(C, T, false);
    J.d_x = Tensor4(d);
    J.d_xp = Tensor4(d);
    for (int m = 0; m < d; ++m) {
        // dC = -C (dQ)^T C
        Mat dQm(d, d), dQpm(d, d);
        for (int i = 0; i < d; ++i)
            for (int s = 0; s < d; ++s) {
                dQm(i, s) = dQx(i, s, m);
                dQpm(i, s) = dQxp(i, s, m);
            }
        const Mat dC = -C * dQm.transpose() * C;
        const Mat dCp = -C * dQpm.transpose() * C;
        for (int i = 0; i < d; ++i)
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l) {
                    double vx = 0.0, vxp = 0.0;
                    for (int s = 0; s < d; ++s) {
                        vx += dC(i, s) * T(k, l, s) + C(i, s) * T3[at(k, l, m, s)];
                        vxp += dCp(i, s) * T(k, l, s) + C(i, s) * T22[at(k, l, s, m)];
                    }
                    J.d_x(i, k, l, m) = vx;
                    J.d_xp(i, k, l, m) = vxp;
                }
    }
    return J;
}

Fn2 swapped(const Fn2& f) {
    return [f](const Vec& u, const Vec& v) { return f(v, u); };
}

Tensor4 riemann_of_jet(const Tensor3& gamma, const Tensor4& dgamma) {
    // dgamma(i,k,l,m) = ∂_m Γ^i_kl; riemann_from_gamma wants gd(l,s,i,k) = γ^l_{si,k}: same layout.
    return riemann_from_gamma(gamma, dgamma);
}

Tensor4 add(const Tensor4& a, const Tensor4& b) {
    Tensor4 c(a.d);
    for (size_t i = 0; i < a.v.size(); ++i) c.v[i] = a.v[i] + b.v[i];
    return c;
}

}  // namespace

Tensor4 two_point_riemann(const World& w, const Vec& x, const Vec& xp, Part part) {
    w.check_point(x);
    w.check_point(xp);
    const ChristoffelJet J = christoffel_jet(part_fn(w, part), x, xp);
    // R^s_{i.lm} = Γ^s_{il,m} - Γ^s_{im,l} + Γ^j_{il}Γ^s_{jm} - Γ^j_{im}Γ^s_{jl}
    return riemann_of_jet(J.gamma, J.d_x);
}

CurvatureBundle curvature(const World& w, const Vec& x, const Vec& xp) {
    w.check_point(x);
    w.check_point(xp);
    CurvatureBundle c;
    c.f_tilde_twopoint = f_tensor(w, x, xp, Part::sigma);
    c.f_tilde = f_tensor(w, x, x, Part::sigma);
    c.f_coincident = f_tensor(w, x, x, Part::G);

    const DerivativeBundle b = fd_derivatives(w, x, x, 2);
    c.g = 0.5 * (b.G.d_x_x + b.G.d_x_x.transpose());
    c.g_tilde = -b.sigma.d_x_xp;

    // One-point fields [Γ](x), [Γ~](x), [Γ~'](x): total derivative = ∂_x + ∂_x' at coincidence.
    const ChristoffelJet jg = christoffel_jet(part_fn(w, Part::G), x, x);
    c.riemann = riemann_of_jet(jg.gamma, add(jg.d_x, jg.d_xp));
    const ChristoffelJet jf = christoffel_jet(part_fn(w, Part::sigma), x, x);
    c.riemann_tilde_f = riemann_of_jet(jf.gamma, add(jf.d_x, jf.d_xp));
    const ChristoffelJet jp = christoffel_jet(swapped(part_fn(w, Part::sigma)), x, x);
    c.riemann_tilde_p = riemann_of_jet(jp.gamma, add(jp.d_x, jp.d_xp));
    return c;
}

}  // namespace tgeom
