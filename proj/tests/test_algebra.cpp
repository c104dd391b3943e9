#include <doctest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "tgeom/algebra.hpp"

using namespace tgeom;

static Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }

TEST_SUITE("algebra") {

TEST_CASE("vector product examples") {
    const World e = fx::euclidean(fx::ones(2));
    const Vec O = v2(0, 0), X = v2(1, 0);
    CHECK(vector_product(e, O, X, O, X) == doctest::Approx(1.0));
    CHECK(vector_product(e, X, O, O, X) == doctest::Approx(-1.0));
    const World c = fx::constant_a(fx::ones(2), v2(0.3, 0));
    CHECK(vector_product(c, O, X, O, X) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("constant antisymmetry cancels in products") {
    fx::Rng rng(11);
    const World c = fx::constant_a(fx::minkowski(3), (Vec(3) << 0.3, -0.2, 0.7).finished());
    const World e = fx::euclidean(fx::minkowski(3));
    for (int t = 0; t < 200; ++t) {
        const Vec a = rng.vec(3), b = rng.vec(3), p = rng.vec(3), q = rng.vec(3);
        const double ref = vector_product(e, a, b, p, q);
        CHECK(std::abs(vector_product(c, a, b, p, q) - ref) <= 1e-14 * (1 + std::abs(ref)));
    }
}

TEST_CASE("product parts") {
    const World w = fx::case1(fx::minkowski(4), 0.2);
    const Vec P0 = Vec::Zero(4), P1 = Vec::Unit(4, 0), Q0 = Vec::Unit(4, 1), Q1 = Vec::Unit(4, 0) + Vec::Unit(4, 1);
    const ProductParts parts = vector_product_parts(w, P0, P1, Q0, Q1);
    const double fwd = vector_product(w, P0, P1, Q0, Q1), rev = vector_product(w, Q0, Q1, P0, P1);
    CHECK(parts.sym + parts.antisym == doctest::Approx(fwd).epsilon(1e-14));
    CHECK(parts.antisym == doctest::Approx(0.5 * (fwd - rev)).epsilon(1e-13));
    CHECK(parts.sym == doctest::Approx(0.5 * (fwd + rev)).epsilon(1e-13));
    const ProductParts null = vector_product_parts(w, P0, P1, Q0, Q0);
    CHECK(null.sym == 0.0);
    CHECK(null.antisym == 0.0);
    const World e = fx::euclidean(fx::ones(4));
    CHECK(vector_product_parts(e, P0, P1, Q0, Q1).antisym == 0.0);
}

TEST_CASE("multivector product examples") {
    const World e = fx::euclidean(fx::ones(2));
    const Multivector P{v2(0, 0), v2(1, 0), v2(0, 1)};
    CHECK(multivector_product(e, P, P) == doctest::Approx(1.0));
    fx::Rng rng(12);
    const World w = fx::case1(fx::minkowski(3), 0.2);
    for (int t = 0; t < 20; ++t) {
        const Vec a = rng.vec(3), b = rng.vec(3);
        const Multivector N{a, b, a};
        const Multivector Q{rng.vec(3), rng.vec(3), rng.vec(3)};
        CHECK(std::abs(multivector_product(w, N, Q)) <= 1e-13);
        // brute-force 2x2 determinant
        const Multivector R{rng.vec(3), rng.vec(3), rng.vec(3)};
        const double m00 = vector_product(w, R[0], R[1], Q[0], Q[1]), m01 = vector_product(w, R[0], R[1], Q[0], Q[2]);
        const double m10 = vector_product(w, R[0], R[2], Q[0], Q[1]), m11 = vector_product(w, R[0], R[2], Q[0], Q[2]);
        CHECK(multivector_product(w, R, Q) == doctest::Approx(m00 * m11 - m01 * m10).epsilon(1e-12));
    }
    CHECK_THROWS_AS(multivector_product(e, P, Multivector{v2(0, 0), v2(1, 0)}), InputError);
}

TEST_CASE("gram determinant examples") {
    const World e = fx::euclidean(fx::ones(2));
    CHECK(gram_fn(e, {v2(0, 0), v2(1, 0), v2(0, 1)}) == doctest::Approx(1.0));
    CHECK(std::abs(gram_fn(e, {v2(0, 0), v2(1, 0), v2(2, 0)})) <= 1e-15);
    fx::Rng rng(13);
    const World e3 = fx::euclidean(fx::ones(3));
    for (int t = 0; t < 20; ++t) {
        const Multivector P{rng.vec(3), rng.vec(3), rng.vec(3), rng.vec(3)};
        const Eigen::Vector3d a = P[1] - P[0], b = P[2] - P[0], c = P[3] - P[0];
        const double vol = a.dot(b.cross(c));
        CHECK(gram_fn(e3, P) == doctest::Approx(vol * vol).epsilon(1e-10));
    }
}

TEST_CASE("gram determinant is permutation invariant") {
    fx::Rng rng(14);
    const World w = fx::case1(fx::minkowski(4), 0.2);
    for (int t = 0; t < 10; ++t) {
        Multivector P{rng.vec(4), rng.vec(4), rng.vec(4), rng.vec(4)};
        const double ref = gram_fn(w, P);
        std::vector<int> idx{0, 1, 2, 3};
        do {
            Multivector Q;
            for (int i : idx) Q.push_back(P[i]);
            CHECK(std::abs(gram_fn(w, Q) - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
        } while (std::next_permutation(idx.begin(), idx.end()));
    }
}

TEST_CASE("squared lengths") {
    const World e = fx::euclidean(fx::ones(2));
    const SquaredLength l = squared_length(e, {v2(0, 0), v2(3, 4)});
    CHECK(l.value == doctest::Approx(25.0));
    CHECK(l.timelike);
    const World c = fx::constant_a(fx::ones(2), v2(0.3, 0));
    const SquaredLength lc = squared_length(c, {v2(0, 0), v2(1, 0)});
    CHECK(lc.value == doctest::Approx(1.0).epsilon(1e-15));
    const World m = fx::euclidean(fx::minkowski(4));
    const SquaredLength lm = squared_length(m, {Vec::Zero(4), Vec::Unit(4, 1)});
    CHECK(lm.value == doctest::Approx(-1.0));
    CHECK_FALSE(lm.timelike);
}

TEST_CASE("collinearity residuals") {
    const World e = fx::euclidean(fx::ones(2));
    const Multivector P{v2(0, 0), v2(1, 0.5)}, Q{v2(2, 1), v2(5, 2.5)};
    for (Kind k : {Kind::neutral, Kind::future, Kind::past}) {
        CHECK(std::abs(collinearity_residual(e, k, P, Q)) <= 1e-12);
        CHECK(is_collinear(e, k, P, Q));
    }
    fx::Rng rng(15);
    const World s = fx::euclidean(fx::minkowski(3));
    const World w = fx::case1(fx::minkowski(3), 0.2);
    for (int t = 0; t < 50; ++t) {
        const Multivector A{rng.vec(3), rng.vec(3)}, B{rng.vec(3), rng.vec(3)};
        const double n = collinearity_residual(s, Kind::neutral, A, B);
        CHECK(collinearity_residual(s, Kind::future, A, B) == doctest::Approx(n).epsilon(1e-12));
        CHECK(collinearity_residual(s, Kind::past, A, B) == doctest::Approx(n).epsilon(1e-12));
        CHECK(collinearity_residual(w, Kind::future, A, B) ==
              doctest::Approx(collinearity_residual(w, Kind::past, B, A)).epsilon(1e-12));
    }
}

TEST_CASE("parallelism residuals") {
    const World e = fx::euclidean(fx::ones(2));
    const Multivector P{v2(0, 0), v2(2, 0)}, Q{v2(1, 1), v2(4, 1)};
    CHECK(std::abs(parallelism_residual(e, Kind::future, Sense::parallel, P, Q)) <= 1e-12);
    CHECK(parallelism_residual(e, Kind::future, Sense::antiparallel, P, Q) == doctest::Approx(2 * 2 * 3));
    const Multivector Pr{P[1], P[0]};
    CHECK(parallelism_residual(e, Kind::future, Sense::antiparallel, Pr, Q) ==
          doctest::Approx(parallelism_residual(e, Kind::future, Sense::parallel, P, Q)).epsilon(1e-12));

    fx::Rng rng(16);
    const World w = fx::case1(fx::minkowski(3), 0.2);
    for (int t = 0; t < 50; ++t) {
        const Vec a = rng.vec(3, -0.3, 0.3), b = rng.vec(3, -0.3, 0.3);
        const Multivector A{a, a + rng.timelike(3)}, B{b, b + rng.timelike(3)};
        CHECK(parallelism_residual(w, Kind::future, Sense::parallel, A, B) ==
              doctest::Approx(parallelism_residual(w, Kind::past, Sense::parallel, B, A)).epsilon(1e-12));
    }
    const World m = fx::euclidean(fx::minkowski(3));
    CHECK_THROWS_AS(
        parallelism_residual(m, Kind::future, Sense::parallel, {Vec::Zero(3), Vec::Unit(3, 1)}, {Vec::Zero(3), Vec::Unit(3, 0)}),
        ComplexBranchError);
    CHECK_THROWS_AS(parallelism_residual(e, Kind::neutral, Sense::parallel, P, Q), InputError);
}

TEST_CASE("determinant paths agree") {
    fx::Rng rng(17);
    for (int n = 1; n <= 6; ++n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m.row(i) = rng.vec(n).transpose();
        CHECK(determinant(m) == doctest::Approx(m.determinant()).epsilon(1e-12));
    }
}

}
