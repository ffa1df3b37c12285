#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dynkit/space.hpp"

using namespace dynkit;

TEST_CASE("canonicalize wraps circle coordinates into [0, period)") {
    Space c1 = Space::circle(1.0);
    CHECK(canonicalize(c1, {1.25})[0] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(canonicalize(c1, {0.25})[0] == doctest::Approx(0.25));

    Space line = Space::line();
    CHECK(canonicalize(line, {3.5})[0] == 3.5);

    Space c2pi = Space::circle(2.0 * M_PI);
    CHECK(canonicalize(c2pi, {-0.5})[0] == doctest::Approx(2.0 * M_PI - 0.5).epsilon(1e-12));
}

TEST_CASE("canonicalize rejects bad input") {
    Space plane = Space::plane();
    CHECK_THROWS_AS(canonicalize(plane, {1.0}), DimensionError);
    CHECK_THROWS_AS(canonicalize(plane, {1.0, std::nan("")}), DomainError);
    CHECK_THROWS_AS(canonicalize(plane, {1.0, INFINITY}), DomainError);
}

TEST_CASE("distance uses the shorter arc on circles") {
    Space c1 = Space::circle(1.0);
    Point p = canonicalize(c1, {0.9}), q = canonicalize(c1, {0.1});
    CHECK(distance(c1, p, q) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(distance(c1, p, p) == 0.0);
}

TEST_CASE("distance is Euclidean on the plane") {
    Space plane = Space::plane();
    Point o = canonicalize(plane, {0.0, 0.0}), p = canonicalize(plane, {3.0, 4.0});
    CHECK(distance(plane, o, p) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(distance(plane, o, p) == distance(plane, p, o));
}

TEST_CASE("metric axioms hold on random product-space points") {
    Space s = Space::plane().with_coord(Coord::circle(1.0));
    auto mk = [&](double a, double b, double c) { return canonicalize(s, {a, b, c}); };
    Point x = mk(0.3, -1.2, 0.95), y = mk(2.0, 0.5, 0.05), z = mk(-0.7, 0.0, 0.4);
    CHECK(distance(s, x, x) == 0.0);
    CHECK(distance(s, x, y) == distance(s, y, x));
    CHECK(distance(s, x, z) <= distance(s, x, y) + distance(s, y, z) + 1e-12);
}

TEST_CASE("approx_eq handles circle wraparound") {
    Space c1 = Space::circle(1.0);
    CHECK(approx_eq(c1, canonicalize(c1, {0.999999999}), canonicalize(c1, {0.0}), 1e-8));

    Space plane = Space::plane();
    CHECK_FALSE(approx_eq(plane, canonicalize(plane, {0.0, 0.0}),
                          canonicalize(plane, {1.0, 0.0}), 1e-8));
    Point p = canonicalize(plane, {0.5, 0.5});
    CHECK(approx_eq(plane, p, p, 1e-12));
}

TEST_CASE("coord constructors validate their arguments") {
    CHECK_THROWS_AS(Coord::circle(0.0), ConfigError);
    CHECK_THROWS_AS(Coord::circle(-1.0), ConfigError);
    CHECK_THROWS_AS(Coord::line(2.0, 1.0), ConfigError);
    Coord c = Coord::line(1.0, 2.0);
    CHECK(c.lo.value() == 1.0);
    CHECK(c.hi.value() == 2.0);
}

TEST_CASE("tolerances validate") {
    Tolerances tol;
    CHECK_NOTHROW(tol.validate());
    tol.tol_time = -1.0;
    CHECK_THROWS_AS(tol.validate(), ConfigError);
    tol = Tolerances{};
    tol.t_min = 0.0;
    CHECK_THROWS_AS(tol.validate(), ConfigError);
}
