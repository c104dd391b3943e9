#include <doctest.h>

#include "fixtures.hpp"
#include "tgeom/examples.hpp"
#include "tgeom/tubes.hpp"

using namespace tgeom;

TEST_SUITE("examples") {

TEST_CASE("case1 radii at the skeleton ends") {
    for (double g : {0.1, 0.3, 0.5}) {
        for (double tau : {0.0, 1.0}) {
            const auto r = case1_radii(tau, g);
            REQUIRE(r.size() == 2);
            CHECK(r[0] == 0.0);
            CHECK(r[1] == doctest::Approx(1 / g).epsilon(1e-14));
        }
    }
    CHECK(case1_radii(0.5, 0.8).empty());
    CHECK_THROWS_AS(case1_radii(0.5, 0.0), InputError);
}

TEST_CASE("case1 waist") {
    const auto w = case1_waist(0.1);
    REQUIRE(w.has_value());
    const auto r = case1_radii(0.5, 0.1);
    CHECK(w->r1 == doctest::Approx(r[0]).epsilon(1e-13));
    CHECK(w->r2 == doctest::Approx(r[1]).epsilon(1e-13));
    CHECK(w->r1 == doctest::Approx(0.0755710991).epsilon(1e-9));
    CHECK(w->r2 == doctest::Approx(9.924428901).epsilon(1e-9));
    CHECK_FALSE(case1_waist(0.6).has_value());
}

TEST_CASE("case1 radii solve the closed polynomial") {
    const double alpha = 0.3;
    const Vec y = Vec::Unit(4, 0), b = Vec::Unit(4, 0);
    for (double tau : {-2.0, 0.25, 0.5, 3.0}) {
        for (double r : case1_radii(tau, alpha)) {
            const Vec x = (Vec(4) << tau, r, 0, 0).finished();
            CHECK(std::abs(case1_closed_residual(x, y, alpha, b)) <= 1e-12 * (1 + std::pow(r + std::abs(tau), 4)));
        }
    }
    const Vec off = (Vec(4) << 0.5, 1.0, 0, 0).finished();
    CHECK(std::abs(case1_closed_residual(off, y, alpha, b)) > 1e-3);
}

TEST_CASE("case1 closed polynomial matches the sampled tube") {
    const double alpha = 0.1;
    const World w = fx::case1(fx::minkowski(4), alpha);
    const auto s = sample_axisymmetric_tube(w, Vec::Unit(4, 0), Kind::neutral, {-1.0, 0.3, 0.7, 2.0});
    for (const auto& row : s) {
        const auto ref = case1_radii(row.tau, alpha);
        REQUIRE(row.radii.size() == ref.size());
        for (size_t k = 0; k < ref.size(); ++k) CHECK(row.radii[k] == doctest::Approx(ref[k]).epsilon(1e-9));
    }
}

TEST_CASE("case1 asymptotic slope") {
    CHECK(case1_asymptotic_slope() == doctest::Approx(std::sqrt(3.0)));
    for (double g : {0.3, 0.5}) {
        const auto r = case1_radii(1000.0, g);
        CHECK(r.back() / 1000.0 == doctest::Approx(std::sqrt(3.0)).epsilon(1e-3));
    }
}

TEST_CASE("case2 asymptotic radius") {
    CHECK(case2_asymptotic_radius(0.2, 1.0, 1.0) == doctest::Approx(0.1));
    CHECK(case2_asymptotic_radius(-0.2, 1.0, 1.0) == doctest::Approx(0.1));
    CHECK_THROWS_AS(case2_asymptotic_radius(0.2, -1.0, 1.0), InputError);
    CHECK_THROWS_AS(case2_asymptotic_radius(0.2, 1.0, 0.0), InputError);
    const World w = fx::case2(fx::minkowski(4), 0.2, 1.0);
    const auto s = sample_axisymmetric_tube(w, Vec::Unit(4, 0), Kind::neutral, {1000.0});
    REQUIRE_FALSE(s[0].radii.empty());
    CHECK(s[0].radii.back() == doctest::Approx(0.1).epsilon(1e-3));
}

}
