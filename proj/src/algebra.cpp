#include "tgeom/algebra.hpp"

#include <cmath>

namespace tgeom {

double determinant(const Mat& m) {
    if (m.rows() != m.cols()) throw InputError("determinant of a non-square matrix");
    switch (m.rows()) {
        case 0: return 1.0;
        case 1: return m(0, 0);
        case 2: return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
        case 3:
            return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
                   m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
                   m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
        default: return Eigen::PartialPivLU<Mat>(m).determinant();
    }
}

static void check_same_dim(const World& w, const Multivector& P) {
    for (const Vec& p : P) w.check_point(p);
}

double vector_product(const World& w, const Vec& P0, const Vec& P1, const Vec& Q0, const Vec& Q1) {
    return w.sigma(P0, Q1) - w.sigma(P1, Q1) - w.sigma(P0, Q0) + w.sigma(P1, Q0);
}

ProductParts vector_product_parts(const World& w, const Vec& P0, const Vec& P1, const Vec& Q0, const Vec& Q1) {
    ProductParts out;
    out.sym = w.G(P0, Q1) - w.G(P1, Q1) - w.G(P0, Q0) + w.G(P1, Q0);
    out.antisym = w.A(P0, Q1) - w.A(P1, Q1) - w.A(P0, Q0) + w.A(P1, Q0);
    return out;
}

Mat product_matrix(const World& w, const Multivector& P, const Multivector& Q) {
    if (P.size() < 2 || Q.size() < 2) throw InputError("multivector order must be at least 1");
    if (P.size() != Q.size()) throw InputError("multivector order mismatch");
    check_same_dim(w, P);
    check_same_dim(w, Q);
    const int n = static_cast<int>(P.size()) - 1;
    Mat M(n, n);
    const double s00 = w.sigma(P[0], Q[0]);
    for (int i = 1; i <= n; ++i) {
        const double si0 = w.sigma(P[i], Q[0]);
        for (int k = 1; k <= n; ++k) M(i - 1, k - 1) = w.sigma(P[0], Q[k]) + si0 - s00 - w.sigma(P[i], Q[k]);
    }
    return M;
}

double multivector_product(const World& w, const Multivector& P, const Multivector& Q) {
    return determinant(product_matrix(w, P, Q));
}

Mat gram_matrix(const World& w, const Multivector& P) {
    if (P.size() < 2) throw InputError("multivector order must be at least 1");
    check_same_dim(w, P);
    const int n = static_cast<int>(P.size()) - 1;
    Mat M(n, n);
    for (int i = 1; i <= n; ++i)
        for (int k = 1; k <= n; ++k) M(i - 1, k - 1) = w.sigma(P[i], P[0]) + w.sigma(P[0], P[k]) - w.sigma(P[i], P[k]);
    return M;
}

double gram_fn(const World& w, const Multivector& P) { return determinant(gram_matrix(w, P)); }

SquaredLength squared_length(const World& w, const Multivector& P) {
    const double v = gram_fn(w, P);
    return {v, v >= 0.0};
}

double collinearity_residual(const World& w, Kind kind, const Multivector& P, const Multivector& Q) {
    const double pp = gram_fn(w, P);
    const double qq = gram_fn(w, Q);
    switch (kind) {
        case Kind::neutral: return multivector_product(w, P, Q) * multivector_product(w, Q, P) - pp * qq;
        case Kind::future: {
            const double pq = multivector_product(w, P, Q);
            return pq * pq - pp * qq;
        }
        case Kind::past: {
            const double qp = multivector_product(w, Q, P);
            return qp * qp - pp * qq;
        }
    }
    return 0.0;
}

static double product_scale(double a, double b) {
    const double s = std::abs(a * b);
    return s > 0.0 ? s : 1.0;
}

bool is_collinear(const World& w, Kind kind, const Multivector& P, const Multivector& Q, double eps_rel) {
    const double r = collinearity_residual(w, kind, P, Q);
    return std::abs(r) <= eps_rel * product_scale(gram_fn(w, P), gram_fn(w, Q));
}

double parallelism_residual(const World& w, Kind kind, Sense sense, const Multivector& P, const Multivector& Q) {
    if (kind == Kind::neutral) throw InputError("parallelism is defined for the f and p kinds only");
    const double pp = gram_fn(w, P);
    const double qq = gram_fn(w, Q);
    if (pp < 0.0 || qq < 0.0) throw ComplexBranchError("parallelism needs real lengths; a squared length is negative");
    const double lens = std::sqrt(pp) * std::sqrt(qq);
    const double prod = kind == Kind::future ? multivector_product(w, P, Q) : multivector_product(w, Q, P);
    return sense == Sense::parallel ? prod - lens : prod + lens;
}

bool is_parallel(const World& w, Kind kind, Sense sense, const Multivector& P, const Multivector& Q, double eps_rel) {
    const double r = parallelism_residual(w, kind, sense, P, Q);
    const double pp = gram_fn(w, P), qq = gram_fn(w, Q);
    return std::abs(r) <= eps_rel * product_scale(std::sqrt(pp), std::sqrt(qq));
}

}  // namespace tgeom
