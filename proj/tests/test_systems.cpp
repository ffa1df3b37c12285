#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dynkit/systems.hpp"

using namespace dynkit;

namespace {

MapSystem get_map(const std::string& name, const Params& p = {}) {
    return std::get<MapSystem>(catalog_get(name, p));
}

FlowSystem get_flow(const std::string& name, const Params& p = {}) {
    return std::get<FlowSystem>(catalog_get(name, p));
}

Point pt(const Space& s, std::vector<double> v) { return canonicalize(s, v); }

} // namespace

TEST_CASE("map_apply on the circle rotation") {
    MapSystem rot = get_map("circle_rotation", {{"alpha", 0.1}});
    CHECK(map_apply(rot, pt(rot.space, {0.95}), 1)[0] == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(map_apply(rot, pt(rot.space, {0.3}), 0)[0] == doctest::Approx(0.3));
    CHECK(map_apply(rot, pt(rot.space, {0.0}), -2)[0] == doctest::Approx(0.8).epsilon(1e-12));

    MapSystem quarter = get_map("circle_rotation", {{"alpha", 0.25}});
    CHECK(map_apply(quarter, pt(quarter.space, {0.0}), 4)[0] == doctest::Approx(0.0));
}

TEST_CASE("map inverse check passes on catalog maps") {
    for (const char* name : {"circle_rotation", "interval_identity"}) {
        MapSystem m = get_map(name);
        CheckReport rep = map_inverse_check(m, 50, 1e-9, 7);
        INFO(name);
        CHECK(rep.pass);
        CHECK(rep.samples_used == 50);
    }
}

TEST_CASE("closed-form annulus flows") {
    FlowSystem phi1 = get_flow("annulus_phi1");
    Point x = pt(phi1.space, {1.5, 0.0});
    Point y = flow_eval(phi1, x, 1.0);
    CHECK(y[0] == doctest::Approx(-1.5).epsilon(1e-12));
    CHECK(y[1] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(distance(phi1.space, flow_eval(phi1, x, 0.0), x) == doctest::Approx(0.0));

    FlowSystem phi2 = get_flow("annulus_phi2");
    Point q = flow_eval(phi2, pt(phi2.space, {1.5, 0.0}), 0.25);
    CHECK(q[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(q[1] == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("reverse is the time-mirrored flow") {
    FlowSystem phi2 = get_flow("annulus_phi2");
    FlowSystem psi = reverse(phi2);
    Point x = pt(phi2.space, {1.5, 0.0});
    Point q = flow_eval(psi, x, 0.25);
    CHECK(q[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(q[1] == doctest::Approx(-1.5).epsilon(1e-12));

    CHECK(distance(phi2.space, flow_eval(psi, x, 0.0), x) == 0.0);

    FlowSystem twice = reverse(psi);
    Rng rng(3);
    for (int i = 0; i < 20; ++i) {
        Point p = phi2.sample(rng);
        double t = 0.1 * i - 1.0;
        CHECK(distance(phi2.space, flow_eval(twice, p, t), flow_eval(phi2, p, t)) <= 1e-12);
    }
}

TEST_CASE("flow laws hold for closed forms and fail for the broken example") {
    CheckReport good = check_flow_laws(get_flow("annulus_phi1"), 100, 3.0, 1e-9, 11);
    CHECK(good.pass);
    CHECK(good.max_residual <= 1e-12);

    CheckReport bad = check_flow_laws(get_flow("broken_quadratic"), 100, 3.0, 1e-6, 11);
    CHECK_FALSE(bad.pass);
    CHECK(bad.max_residual > 1e-3);
}

TEST_CASE("ODE flow matches the closed form within RK4 accuracy") {
    FlowSystem ode = get_flow("annulus_phi2_ode", {{"step", 1e-3}});
    FlowSystem exact = get_flow("annulus_phi2");
    Point x = pt(exact.space, {1.5, 0.0});
    for (double t : {0.1, 0.5, 1.0, -0.7}) {
        CHECK(distance(exact.space, flow_eval(ode, x, t), flow_eval(exact, x, t)) <= 1e-6);
    }
    CheckReport rep = check_flow_laws(ode, 20, 1.0, 1e-6, 5);
    CHECK(rep.pass);
}

TEST_CASE("RK4 error scales like dt^4") {
    FlowSystem coarse = get_flow("annulus_phi2_ode", {{"step", 2e-3}});
    FlowSystem fine = get_flow("annulus_phi2_ode", {{"step", 1e-3}});
    FlowSystem exact = get_flow("annulus_phi2");
    Point x = pt(exact.space, {1.7, 0.0});
    double e_coarse = distance(exact.space, flow_eval(coarse, x, 1.0), flow_eval(exact, x, 1.0));
    double e_fine = distance(exact.space, flow_eval(fine, x, 1.0), flow_eval(exact, x, 1.0));
    CHECK(e_fine > 0.0);
    CHECK(e_coarse / e_fine >= 8.0); // 4th order would give 16; allow slack
}

TEST_CASE("catalog rejects unknown names and bad parameters") {
    CHECK_THROWS_AS(catalog_get("nonexistent"), ConfigError);
    CHECK_THROWS_AS(catalog_get("annulus_phi2_ode", {{"step", -1.0}}), ConfigError);
    for (const std::string& name : catalog_names()) CHECK_NOTHROW(catalog_get(name));
}

TEST_CASE("samplers stay inside the documented domains") {
    FlowSystem phi1 = get_flow("annulus_phi1");
    Rng rng(17);
    for (int i = 0; i < 100; ++i) {
        Point p = phi1.sample(rng);
        double r = std::hypot(p[0], p[1]);
        CHECK(r > 1.0);
        CHECK(r < 2.0);
    }
    MapSystem ident = get_map("interval_identity");
    for (int i = 0; i < 100; ++i) {
        double v = ident.sample(rng)[0];
        CHECK(v > 1.0);
        CHECK(v < 2.0);
    }
}
