#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dynkit/section.hpp"

using namespace dynkit;

namespace {

GlobalSectionSystem annulus(const std::string& name) { return catalog_section_system(name); }

Point pt(const GlobalSectionSystem& sys, std::vector<double> v) {
    return canonicalize(sys.flow.space, std::move(v));
}

} // namespace

TEST_CASE("on_section respects the level set and the domain predicate") {
    GlobalSectionSystem sys = annulus("annulus_phi1");
    CHECK(on_section(sys, pt(sys, {1.5, 0.0})));
    CHECK_FALSE(on_section(sys, pt(sys, {0.0, 1.5})));
    CHECK_FALSE(on_section(sys, pt(sys, {-1.5, 0.0})));
}

TEST_CASE("crossing detection finds the rotation periods") {
    GlobalSectionSystem phi2 = annulus("annulus_phi2");
    Point x = pt(phi2, {1.5, 0.0});

    auto found = crossing_detect(phi2, x, 0.5, 1.5);
    REQUIRE(found.size() == 1);
    CHECK(found[0].time == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(distance(phi2.flow.space, found[0].point, x) <= 1e-7);

    CHECK(crossing_detect(phi2, x, 0.1, 0.4).empty());

    GlobalSectionSystem phi1 = annulus("annulus_phi1");
    auto two = crossing_detect(phi1, x, 0.0, 4.5);
    REQUIRE(two.size() == 2);
    CHECK(two[0].time == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(two[1].time == doctest::Approx(4.0).epsilon(1e-8));

    CHECK_THROWS_AS(crossing_detect(phi2, x, 1.0, 1.0), PreconditionError);
}

TEST_CASE("return times of the catalog flows") {
    CHECK(return_time(annulus("annulus_phi2"), Point{{1.5, 0.0}}) ==
          doctest::Approx(1.0).epsilon(1e-8));
    CHECK(return_time(annulus("annulus_phi1"), Point{{1.5, 0.0}}) ==
          doctest::Approx(2.0).epsilon(1e-8));
    CHECK(return_time(annulus("annulus_radial_speed"), Point{{1.5, 0.0}}) ==
          doctest::Approx(2.0 * M_PI / 1.5).epsilon(1e-8));

    GlobalSectionSystem phi1 = annulus("annulus_phi1");
    CHECK_THROWS_AS(return_time(phi1, Point{{0.0, 1.5}}), PreconditionError);
}

TEST_CASE("the annulus Poincare maps are the identity") {
    GlobalSectionSystem phi1 = annulus("annulus_phi1");
    CHECK(distance(phi1.flow.space, poincare_map(phi1, Point{{1.5, 0.0}}), Point{{1.5, 0.0}}) <=
          1e-7);
    GlobalSectionSystem phi2 = annulus("annulus_phi2");
    CHECK(distance(phi2.flow.space, poincare_map(phi2, Point{{1.7, 0.0}}), Point{{1.7, 0.0}}) <=
          1e-7);
    CHECK(distance(phi1.flow.space, poincare_inverse(phi1, Point{{1.5, 0.0}}), Point{{1.5, 0.0}}) <=
          1e-7);
}

TEST_CASE("inverse identities on random section points") {
    for (const char* name : {"annulus_phi1", "annulus_phi2", "annulus_radial_speed"}) {
        GlobalSectionSystem sys = annulus(name);
        Rng rng(23);
        INFO(name);
        for (int i = 0; i < 10; ++i) {
            Point x = sys.sample_section(rng);
            CHECK(sys.dist(poincare_inverse(sys, poincare_map(sys, x)), x) <= 1e-6);
            CHECK(std::fabs(backward_return_time(sys, x) -
                            return_time(sys, poincare_inverse(sys, x))) <= 1e-6);
        }
    }
}

TEST_CASE("recurrence check") {
    GlobalSectionSystem phi1 = annulus("annulus_phi1");
    Rng rng(41);
    std::vector<Point> pts;
    for (int i = 0; i < 50; ++i) pts.push_back(phi1.sample_space(rng));
    CHECK(recurrence_check(phi1, pts, 10.0).pass);
    CHECK_FALSE(recurrence_check(phi1, pts, 0.01).pass);
}

TEST_CASE("return time is strictly positive even from the section") {
    GlobalSectionSystem phi2 = annulus("annulus_phi2");
    CHECK(return_time(phi2, Point{{1.5, 0.0}}) > phi2.tol.t_min);
}

TEST_CASE("return-time partial sums") {
    GlobalSectionSystem phi2 = annulus("annulus_phi2");
    auto s5 = return_time_partial_sums(phi2, Point{{1.5, 0.0}}, 5);
    REQUIRE(s5.size() == 5);
    for (int k = 0; k < 5; ++k) CHECK(s5[k] == doctest::Approx(k + 1.0).epsilon(1e-7));

    GlobalSectionSystem phi1 = annulus("annulus_phi1");
    auto s3 = return_time_partial_sums(phi1, Point{{1.5, 0.0}}, 3);
    REQUIRE(s3.size() == 3);
    for (int k = 0; k < 3; ++k) CHECK(s3[k] == doctest::Approx(2.0 * (k + 1)).epsilon(1e-7));

    for (size_t k = 1; k < s5.size(); ++k) CHECK(s5[k] > s5[k - 1]);
}

TEST_CASE("transversality probe") {
    CHECK(transversality_probe(annulus("annulus_phi1"), Point{{1.5, 0.0}}));
    CHECK(transversality_probe(annulus("annulus_radial_speed"), Point{{1.2, 0.0}}));

    GlobalSectionSystem tangent = catalog_section_system("plane_translation");
    CHECK_FALSE(transversality_probe(tangent, Point{{0.0, 0.0}}));
    CHECK_THROWS_AS(return_time(tangent, Point{{0.0, 0.0}}), RecurrenceError);
}

TEST_CASE("poincare_map_system packages P as a map system") {
    GlobalSectionSystem phi2 = annulus("annulus_phi2");
    MapSystem pm = poincare_map_system(phi2);
    CheckReport rep = map_inverse_check(pm, 20, 1e-6, 9);
    CHECK(rep.pass);
    Point x{{1.5, 0.0}};
    CHECK(distance(pm.space, map_apply(pm, x, 2), x) <= 1e-6);
}

TEST_CASE("catalog section lookup") {
    CHECK_THROWS_AS(catalog_section_system("circle_rotation"), ConfigError);
    for (const std::string& name : catalog_section_names())
        CHECK_NOTHROW(catalog_section_system(name));
}
