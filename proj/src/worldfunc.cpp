#include "tgeom/worldfunc.hpp"

#include <cmath>
#include <sstream>

namespace tgeom {

std::string to_string(WorldKind k) {
    switch (k) {
        case WorldKind::euclidean: return "euclidean";
        case WorldKind::constant_a: return "constant_a";
        case WorldKind::case1: return "case1";
        case WorldKind::case2: return "case2";
        case WorldKind::cubic_a: return "cubic_a";
    }
    return "?";
}

WorldKind world_kind_from_string(const std::string& s) {
    if (s == "euclidean") return WorldKind::euclidean;
    if (s == "constant_a") return WorldKind::constant_a;
    if (s == "case1") return WorldKind::case1;
    if (s == "case2") return WorldKind::case2;
    if (s == "cubic_a") return WorldKind::cubic_a;
    throw InputError("unknown world kind '" + s + "'");
}

Mat WorldSpec::diag_metric(const std::vector<double>& signs) {
    Mat g = Mat::Zero(signs.size(), signs.size());
    for (size_t i = 0; i < signs.size(); ++i) g(i, i) = signs[i];
    return g;
}

void WorldSpec::validate() const {
    if (dim <= 0) throw InputError("dim must be positive");
    if (metric.rows() != dim || metric.cols() != dim) throw InputError("metric must be dim x dim");
    if (!metric.allFinite()) throw InputError("metric has non-finite entries");
    if ((metric - metric.transpose()).cwiseAbs().maxCoeff() > 1e-14 * (1.0 + metric.cwiseAbs().maxCoeff()))
        throw InputError("metric must be symmetric");
    Eigen::FullPivLU<Mat> lu(metric);
    if (!lu.isInvertible()) throw InputError("metric is singular");

    const bool needs_b = kind == WorldKind::constant_a || kind == WorldKind::case1 || kind == WorldKind::case2;
    if (needs_b) {
        if (b.size() != dim) throw InputError(to_string(kind) + " requires b of length dim");
        if (!b.allFinite()) throw InputError("b has non-finite entries");
    } else if (b.size() != 0) {
        throw InputError(to_string(kind) + " does not take b");
    }
    if (!std::isfinite(alpha) || !std::isfinite(beta)) throw InputError("alpha/beta must be finite");
    if (kind != WorldKind::case1 && kind != WorldKind::case2 && alpha != 0.0)
        throw InputError(to_string(kind) + " does not take alpha");
    if (kind != WorldKind::case2 && beta != 0.0) throw InputError(to_string(kind) + " does not take beta");

    if (kind == WorldKind::cubic_a) {
        const size_t n = static_cast<size_t>(dim) * dim * dim;
        if (a3.size() != n) throw InputError("cubic_a requires a3 with dim^3 entries");
        double scale = 0.0;
        for (double x : a3) {
            if (!std::isfinite(x)) throw InputError("a3 has non-finite entries");
            scale = std::max(scale, std::abs(x));
        }
        auto at = [&](int i, int k, int l) { return a3[(static_cast<size_t>(i) * dim + k) * dim + l]; };
        for (int i = 0; i < dim; ++i)
            for (int k = 0; k < dim; ++k)
                for (int l = 0; l < dim; ++l) {
                    const double v = at(i, k, l);
                    const double tol = 1e-12 * (1.0 + scale);
                    if (std::abs(v - at(k, i, l)) > tol || std::abs(v - at(i, l, k)) > tol ||
                        std::abs(v - at(l, k, i)) > tol)
                        throw InputError("a3 must be symmetric under all index permutations");
                }
    } else if (!a3.empty()) {
        throw InputError(to_string(kind) + " does not take a3");
    }
}

double SignedSquare::rho() const {
    if (square < 0.0) throw ComplexBranchError("2*Sigma is negative; the length is imaginary");
    return std::sqrt(square);
}

World::World(int dim, Fn sigma, std::string name, Mat metric)
    : dim_(dim), fn_(std::make_shared<const Fn>(std::move(sigma))), name_(std::move(name)), metric_(std::move(metric)) {
    if (dim <= 0) throw InputError("dim must be positive");
}

void World::check_point(const Vec& x) const {
    if (x.size() != dim_) {
        std::ostringstream os;
        os << "point has dimension " << x.size() << ", world has " << dim_;
        throw InputError(os.str());
    }
    if (!x.allFinite()) throw InputError("point has non-finite coordinates");
}

double World::sigma(const Vec& x, const Vec& xp) const {
    check_point(x);
    check_point(xp);
    if (x == xp) return 0.0;
    return (*fn_)(x, xp);
}

double World::G(const Vec& x, const Vec& xp) const { return 0.5 * (sigma(x, xp) + sigma(xp, x)); }

double World::A(const Vec& x, const Vec& xp) const { return 0.5 * (sigma(x, xp) - sigma(xp, x)); }

std::pair<double, double> World::decompose(const Vec& x, const Vec& xp) const {
    const double s = sigma(x, xp);
    const double r = sigma(xp, x);
    const double g = 0.5 * (s + r);
    // A is the remainder, moved by one ulp when that makes G + A reproduce Σ(x,x') bit for bit.
    // When no double does, G + A is within one ulp of Σ.
    double a = s - g;
    if (g + a != s) {
        for (double dir : {HUGE_VAL, -HUGE_VAL}) {
            const double c = std::nextafter(a, dir);
            if (g + c == s) {
                a = c;
                break;
            }
        }
    }
    return {g, a};
}

SignedSquare World::rho(const Vec& x, const Vec& xp) const { return SignedSquare{2.0 * sigma(x, xp)}; }

World World::compose(const std::function<double(double)>& f, const std::string& tag) const {
    auto inner = fn_;
    World out(
        dim_, [inner, f](const Vec& x, const Vec& xp) { return f((*inner)(x, xp)); }, name_ + "|" + tag, metric_);
    return out;
}

World make_world(const WorldSpec& spec) {
    spec.validate();
    const Mat g = spec.metric;
    const int d = spec.dim;
    World::Fn fn;
    switch (spec.kind) {
        case WorldKind::euclidean:
            fn = [g](const Vec& x, const Vec& xp) {
                const Vec xi = x - xp;
                return 0.5 * xi.dot(g * xi);
            };
            break;
        case WorldKind::constant_a: {
            const Vec a = spec.b;
            fn = [g, a](const Vec& x, const Vec& xp) {
                const Vec xi = x - xp;
                return a.dot(xi) + 0.5 * xi.dot(g * xi);
            };
            break;
        }
        case WorldKind::case1: {
            const Vec b = spec.b;
            const double alpha = spec.alpha;
            fn = [g, b, alpha](const Vec& x, const Vec& xp) {
                const Vec xi = x - xp;
                const double xi2 = xi.dot(g * xi);
                return b.dot(xi) * (1.0 + alpha * xi2) + 0.5 * xi2;
            };
            break;
        }
        case WorldKind::case2: {
            const Vec b = spec.b;
            const double alpha = spec.alpha, beta = spec.beta;
            fn = [g, b, alpha, beta](const Vec& x, const Vec& xp) {
                const Vec xi = x - xp;
                const double xi2 = xi.dot(g * xi);
                return b.dot(xi) * (1.0 + alpha / (1.0 + beta * xi2)) + 0.5 * xi2;
            };
            break;
        }
        case WorldKind::cubic_a: {
            const std::vector<double> a3 = spec.a3;
            fn = [g, a3, d](const Vec& x, const Vec& xp) {
                const Vec xi = x - xp;
                double c = 0.0;
                for (int i = 0; i < d; ++i)
                    for (int k = 0; k < d; ++k) {
                        const double xik = xi[i] * xi[k];
                        const double* row = &a3[(static_cast<size_t>(i) * d + k) * d];
                        for (int l = 0; l < d; ++l) c += row[l] * xik * xi[l];
                    }
                return 0.5 * xi.dot(g * xi) + c / 6.0;
            };
            break;
        }
    }
    World w(d, std::move(fn), to_string(spec.kind), g);
    w.spec_ = spec;
    return w;
}

double eval_sigma(const World& w, const Vec& x, const Vec& xp) { return w.sigma(x, xp); }

std::pair<double, double> decompose(const World& w, const Vec& x, const Vec& xp) { return w.decompose(x, xp); }

}  // namespace tgeom
