#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <limits>

#include "fixtures.hpp"
#include "tgeom/io.hpp"

using namespace tgeom;

static Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }

TEST_SUITE("worldfunc") {

TEST_CASE("euclidean and constant_a values") {
    const World e = fx::euclidean(fx::ones(2));
    CHECK(eval_sigma(e, v2(0, 0), v2(1, 0)) == doctest::Approx(0.5).epsilon(1e-15));
    const World e3 = fx::euclidean(fx::ones(3));
    CHECK(eval_sigma(e3, Vec::Ones(3), Vec::Zero(3)) == doctest::Approx(1.5).epsilon(1e-15));

    const World c = fx::constant_a(fx::ones(2), v2(0.3, 0));
    CHECK(c.sigma(v2(0, 0), v2(1, 0)) == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(c.sigma(v2(1, 0), v2(0, 0)) == doctest::Approx(0.8).epsilon(1e-14));
    const auto [G, A] = decompose(c, v2(1, 0), v2(0, 0));
    CHECK(G == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(A == doctest::Approx(0.3).epsilon(1e-14));
}

TEST_CASE("case1 direct evaluation") {
    const World w = fx::case1(fx::minkowski(4), 0.2);
    // ξ² = 1, b·ξ = 1: 1 * (1 + 0.2) + 0.5
    CHECK(w.sigma(Vec::Unit(4, 0), Vec::Zero(4)) == doctest::Approx(1.7).epsilon(1e-14));
}

TEST_CASE("coincidence is exactly zero") {
    fx::Rng rng(1);
    const std::vector<World> worlds{fx::euclidean(fx::minkowski(3)), fx::constant_a(fx::ones(3), Vec::Ones(3)),
                                    fx::case1(fx::minkowski(3), 0.2), fx::case2(fx::minkowski(3), 0.2, 1.0),
                                    fx::cubic(fx::minkowski(3), 0.1)};
    for (const World& w : worlds)
        for (int t = 0; t < 1000; ++t) {
            const Vec x = rng.vec(3, -5, 5);
            REQUIRE(w.sigma(x, x) == 0.0);
        }
}

TEST_CASE("symmetric and antisymmetric parts") {
    fx::Rng rng(2);
    const std::vector<World> worlds{fx::constant_a(fx::minkowski(3), Vec::Ones(3)), fx::case1(fx::minkowski(3), 0.2),
                                    fx::case2(fx::minkowski(3), 0.2, 1.0), fx::cubic(fx::minkowski(3), 0.1)};
    for (const World& w : worlds)
        for (int t = 0; t < 200; ++t) {
            const Vec x = rng.vec(3, -0.4, 0.4), y = rng.vec(3, -0.4, 0.4);
            const auto [G, A] = w.decompose(x, y);
            const auto [Gs, As] = w.decompose(y, x);
            const double S = w.sigma(x, y);
            CHECK(std::abs(G + A - S) <= 2 * std::numeric_limits<double>::epsilon() * std::abs(S));
            CHECK(G == Gs);
            CHECK(std::abs(A + As) <= 8 * std::numeric_limits<double>::epsilon() * std::max(std::abs(G), std::abs(A)));
        }
    const World e = fx::euclidean(fx::ones(2));
    CHECK(e.A(v2(0.3, 1), v2(-2, 0.5)) == 0.0);
}

TEST_CASE("zero alpha reduces to the b-free world") {
    fx::Rng rng(3);
    auto s1 = fx::spec(WorldKind::case1, fx::minkowski(3));
    s1.b = Vec::Zero(3);
    s1.alpha = 0.0;
    auto s2 = fx::spec(WorldKind::case2, fx::minkowski(3));
    s2.b = Vec::Zero(3);
    s2.beta = 1.0;
    const World w1 = make_world(s1), w2 = make_world(s2), e = fx::euclidean(fx::minkowski(3));
    for (int t = 0; t < 100; ++t) {
        const Vec x = rng.vec(3), y = rng.vec(3);
        CHECK(w1.sigma(x, y) == doctest::Approx(e.sigma(x, y)).epsilon(1e-15));
        CHECK(w2.sigma(x, y) == doctest::Approx(e.sigma(x, y)).epsilon(1e-15));
    }
}

TEST_CASE("metric accessor is a signed square") {
    const World m = fx::euclidean(fx::minkowski(4));
    const SignedSquare t = m.rho(Vec::Zero(4), 2.0 * Vec::Unit(4, 0));
    CHECK(t.real());
    CHECK(t.rho() == doctest::Approx(2.0));
    const SignedSquare s = m.rho(Vec::Zero(4), Vec::Unit(4, 1));
    CHECK_FALSE(s.real());
    CHECK(s.square == doctest::Approx(-1.0));
    CHECK_THROWS_AS(s.rho(), ComplexBranchError);
}

TEST_CASE("spec validation") {
    auto s = fx::spec(WorldKind::euclidean, {1, 0});
    CHECK_THROWS_AS(make_world(s), InputError);
    auto c = fx::spec(WorldKind::case1, fx::ones(2));
    CHECK_THROWS_AS(make_world(c), InputError);  // b missing
    auto k = fx::spec(WorldKind::cubic_a, fx::ones(2));
    k.a3 = {1, 2, 0, 0, 0, 0, 0, 0};
    CHECK_THROWS_AS(make_world(k), InputError);  // not symmetric
    auto e = fx::spec(WorldKind::euclidean, fx::ones(2));
    e.alpha = 0.1;
    CHECK_THROWS_AS(make_world(e), InputError);
    const World w = fx::euclidean(fx::ones(2));
    CHECK_THROWS_AS(w.sigma(Vec::Zero(3), Vec::Zero(2)), InputError);
    Vec bad = Vec::Zero(2);
    bad[0] = std::nan("");
    CHECK_THROWS_AS(w.sigma(bad, Vec::Zero(2)), InputError);
}

TEST_CASE("json round trip") {
    auto s = fx::spec(WorldKind::cubic_a, fx::minkowski(3));
    s.a3 = fx::sym3(3, 0.1);
    const WorldSpec r = world_spec_from_json(world_spec_to_json(s));
    CHECK(r.kind == s.kind);
    CHECK(r.dim == 3);
    CHECK((r.metric - s.metric).norm() == 0.0);
    CHECK(r.a3 == s.a3);

    const auto j = nlohmann::json::parse(R"({"kind":"case1","dim":4,"metric":[1,-1,-1,-1],"b":[1,0,0,0],"alpha":0.2})");
    const World w = make_world(world_spec_from_json(j));
    CHECK(w.sigma(Vec::Unit(4, 0), Vec::Zero(4)) == doctest::Approx(1.7));

    CHECK_THROWS_AS(world_spec_from_json(nlohmann::json::parse(R"({"kind":"nope","dim":2,"metric":[1,1]})")),
                    InputError);
    CHECK_THROWS_AS(world_spec_from_json(nlohmann::json::parse(R"({"kind":"euclidean","dim":"x"})")), InputError);
}

TEST_CASE("format and atomic write") {
    const double x = 0.1 + 0.2;
    CHECK(std::stod(format_real(x)) == x);
    const std::string path = "tgeom_atomic_test.txt";
    write_file_atomic(path, "abc\n");
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "abc");
    std::remove(path.c_str());
}

TEST_CASE("composition with a map of sigma") {
    const World w = fx::case1(fx::minkowski(2), 0.2);
    const World f = w.compose([](double s) { return 2.0 * s; }, "twice");
    const Vec x = v2(0.3, 0.1), y = v2(-0.2, 0.05);
    CHECK(f.sigma(x, y) == doctest::Approx(2.0 * w.sigma(x, y)));
    CHECK(f.sigma(x, x) == 0.0);
}

}
