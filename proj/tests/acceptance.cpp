// Acceptance gate: eleven quantitative criteria, one pass/fail line each.
// Exits nonzero if any criterion fails.

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "dynkit/category.hpp"
#include "dynkit/section.hpp"
#include "dynkit/suspension.hpp"
#include "dynkit/systems.hpp"

using namespace dynkit;

namespace {

int g_failures = 0;

void report(int num, const std::string& what, bool pass, const std::string& detail) {
    std::printf("%s  %2d: %s%s%s\n", pass ? "PASS" : "FAIL", num, what.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!pass) ++g_failures;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// The annulus systems carry recurrent dynamics; plane_translation is the
// designed transversality failure and has no Poincare map at all.
std::vector<std::string> recurrent_section_names() {
    return {"annulus_phi1", "annulus_phi2", "annulus_phi2_ode", "annulus_radial_speed"};
}

std::vector<std::string> catalog_map_names() { return {"circle_rotation", "interval_identity"}; }

// 1. Poincare maps of the annulus rotations are the identity on A0.
void criterion_1() {
    double worst_disp = 0.0, worst_T = 0.0;
    const struct { const char* name; double T; } cases[] = {{"annulus_phi1", 2.0},
                                                            {"annulus_phi2", 1.0}};
    for (const auto& c : cases) {
        GlobalSectionSystem sys = catalog_section_system(c.name);
        for (int i = 0; i < 50; ++i) {
            Point x = sys.section_param((i + 1.0) / 51.0);
            worst_disp = std::max(worst_disp, sys.dist(poincare_map(sys, x), x));
            worst_T = std::max(worst_T, std::fabs(return_time(sys, x) - c.T));
        }
    }
    report(1, "annulus Poincare maps are the identity with periods 2.0 / 1.0",
           worst_disp <= 1e-6 && worst_T <= 1e-6,
           "max displacement " + fmt(worst_disp) + ", max period error " + fmt(worst_T));
}

// 2. Inverse identities of P over the recurrent catalog section systems.
void criterion_2() {
    double worst = 0.0;
    std::string errs;
    for (const std::string& name : recurrent_section_names()) {
        GlobalSectionSystem sys = catalog_section_system(name);
        Rng rng(101);
        for (int i = 0; i < 100; ++i) {
            Point x = sys.sample_section(rng);
            try {
                worst = std::max(worst, sys.dist(poincare_inverse(sys, poincare_map(sys, x)), x));
                worst = std::max(worst, std::fabs(backward_return_time(sys, x) -
                                                  return_time(sys, poincare_inverse(sys, x))));
            } catch (const Error& e) {
                errs = e.what();
            }
        }
    }
    report(2, "inverse identities of the Poincare map on all recurrent catalog systems",
           errs.empty() && worst <= 1e-6,
           errs.empty() ? "max residual " + fmt(worst) : errs);
}

// 3. Suspension flow laws are exact; the time-1 map is f on the nose.
void criterion_3() {
    double worst = 0.0;
    bool wrap_exact = true;
    for (const std::string& name : catalog_map_names()) {
        MapSystem f = std::get<MapSystem>(catalog_get(name));
        Rng rng(103);
        std::uniform_real_distribution<double> uh(0.0, 1.0), us(-3.0, 3.0);
        for (int i = 0; i < 1000; ++i) {
            TorusPoint p{f.sample(rng), uh(rng)};
            double s1 = us(rng), s2 = us(rng);
            worst = std::max(worst, torus_distance(f, suspension_eval(f, p, 0.0), p));
            worst = std::max(worst,
                             torus_distance(f, suspension_eval(f, suspension_eval(f, p, s1), s2),
                                            suspension_eval(f, p, s1 + s2)));
            TorusPoint w = suspension_eval(f, TorusPoint{p.base, 0.0}, 1.0);
            Point fx = f.forward_fn(p.base);
            if (w.height != 0.0 || w.base.values != fx.values) wrap_exact = false;
        }
    }
    report(3, "suspension identity/group laws exact; time-1 wrap equals f",
           worst <= 1e-12 && wrap_exact, "max law residual " + fmt(worst));
}

// 4. P o Sigma round trip: return time 1 and base map recovered.
void criterion_4() {
    double worst_T = 0.0, worst_P = 0.0;
    for (const std::string& name : catalog_map_names()) {
        MapSystem f = std::get<MapSystem>(catalog_get(name));
        GlobalSectionSystem susp = suspend_system(f);
        Rng rng(107);
        for (int i = 0; i < 100; ++i) {
            Point x = f.sample(rng);
            Point flat = torus_pack(TorusPoint{x, 0.0});
            worst_T = std::max(worst_T, std::fabs(return_time(susp, flat) - 1.0));
            TorusPoint img = torus_unpack(f, poincare_map(susp, flat));
            double d = distance(f.space, img.base, f.forward_fn(x));
            worst_P = std::max(worst_P, std::max(d, std::fabs(img.height)));
        }
    }
    report(4, "P(Sigma f) recovers f with unit return time", worst_T <= 1e-10 && worst_P <= 1e-10,
           "period error " + fmt(worst_T) + ", map error " + fmt(worst_P));
}

// 5. The canonical (k,tau) satisfies the weak-morphism law.
void criterion_5() {
    double worst = 0.0;
    bool pass = true;
    std::string detail;
    for (const char* name : {"annulus_phi1", "annulus_phi2", "annulus_radial_speed"}) {
        CheckReport rep = weak_morphism_check(canonical_counit(catalog_section_system(name)), 200,
                                              3.0, 1e-6, 109);
        worst = std::max(worst, rep.max_residual);
        if (!rep.pass) {
            pass = false;
            detail = std::string(name) + ": " + (rep.errors.empty() ? "residual too large"
                                                                    : rep.errors.front());
        }
    }
    report(5, "k/tau weak-morphism law on the annulus systems", pass && worst <= 1e-6,
           detail.empty() ? "max residual " + fmt(worst) : detail);
}

// 6. k is a bijection (both round trips) on every recurrent catalog system.
void criterion_6() {
    double worst = 0.0;
    std::string errs;
    for (const std::string& name : recurrent_section_names()) {
        GlobalSectionSystem sys = catalog_section_system(name);
        MapSystem psys = poincare_map_system(sys);
        Rng rng(113);
        std::uniform_real_distribution<double> uh(0.0, 1.0);
        for (int i = 0; i < 100; ++i) {
            try {
                Point y = sys.sample_space(rng);
                worst = std::max(worst, sys.dist(k_eval(sys, k_inverse(sys, y)), y));
                TorusPoint p{sys.sample_section(rng), uh(rng)};
                worst = std::max(worst,
                                 torus_distance(psys, k_inverse(sys, k_eval(sys, p)), p));
            } catch (const Error& e) {
                errs = e.what();
            }
        }
    }
    report(6, "k and k^-1 are mutually inverse on all recurrent catalog systems",
           errs.empty() && worst <= 1e-6, errs.empty() ? "max residual " + fmt(worst) : errs);
}

// 7. Triangle identities of the adjunction.
void criterion_7() {
    double worst1 = 0.0, worst2 = 0.0;
    bool pass = true;
    for (const std::string& name : catalog_map_names()) {
        MapSystem f = std::get<MapSystem>(catalog_get(name));
        CheckReport rep = triangle_identity_1(f, 100, 1e-9, 127);
        worst1 = std::max(worst1, rep.max_residual);
        pass = pass && rep.pass;
    }
    for (const std::string& name : recurrent_section_names()) {
        CheckReport rep = triangle_identity_2(catalog_section_system(name), 50, 1e-6, 127);
        worst2 = std::max(worst2, rep.max_residual);
        pass = pass && rep.pass;
    }
    report(7, "triangle identities (map systems at 1e-9, section systems at 1e-6)", pass,
           "triangle-1 " + fmt(worst1) + ", triangle-2 " + fmt(worst2));
}

// 8. Naturality of k and l on the documented morphisms.
void criterion_8() {
    bool pass = true;
    double worst = 0.0;
    std::string detail;
    auto tally = [&](const CheckReport& rep, const char* tag) {
        worst = std::max(worst, rep.max_residual);
        if (!rep.pass) {
            pass = false;
            detail = tag;
        }
    };
    try {
        GlobalSectionSystem phi1 = catalog_section_system("annulus_phi1");
        tally(naturality_check_k(WeakMorphism::identity(phi1), 30, 1e-6, 131), "k identity");

        WeakMorphism half;
        half.source = phi1;
        half.target = catalog_section_system("annulus_phi2");
        half.h = [](const Point& x) { return x; };
        half.tau = [](const Point&, double t) { return t / 2.0; };
        half.name = "(id, t/2)";
        tally(naturality_check_k(half, 30, 1e-6, 131), "k (id,t/2)");

        MapSystem rot = std::get<MapSystem>(catalog_get("circle_rotation"));
        tally(naturality_check_l(map_identity(rot), 100, 1e-6, 131), "l identity");

        MapMorphism shift;
        shift.source = rot;
        shift.target = rot;
        Space sp = rot.space;
        shift.h = [sp](const Point& x) { return canonicalize(sp, {x[0] + 0.5}); };
        shift.name = "x+0.5";
        tally(naturality_check_l(shift, 100, 1e-6, 131), "l x+0.5");
    } catch (const Error& e) {
        pass = false;
        detail = e.what();
    }
    report(8, "naturality of k and l on the documented morphisms", pass,
           detail.empty() ? "max residual " + fmt(worst) : detail);
}

// 9. Rate-preservation: identity, the canonical (k,tau), composition, scaling.
void criterion_9() {
    bool pass = true;
    double worst = 0.0;
    std::string detail;
    auto tally = [&](const CheckReport& rep, const char* tag) {
        worst = std::max(worst, rep.max_residual);
        if (!rep.pass) {
            pass = false;
            detail = tag;
        }
    };
    try {
        GlobalSectionSystem phi1 = catalog_section_system("annulus_phi1");
        CheckReport id_rep = rate_preserving_check(WeakMorphism::identity(phi1), 30, 1e-9, 137);
        tally(id_rep, "identity above rounding");

        for (const std::string& name : recurrent_section_names())
            tally(rate_preserving_check(canonical_counit(catalog_section_system(name)), 30, 1e-6,
                                        137),
                  "counit");

        WeakMorphism half;
        half.source = phi1;
        half.target = catalog_section_system("annulus_phi2");
        half.h = [](const Point& x) { return x; };
        half.tau = [](const Point&, double t) { return t / 2.0; };
        half.name = "(id, t/2)";
        tally(rate_composition_check(WeakMorphism::identity(half.target), half, 20, 1e-6, 137),
              "composition");
        tally(rate_scaling_check(half, 20, 1e-6, 137), "scaling law");
        tally(rate_scaling_check(WeakMorphism::identity(phi1), 20, 1e-6, 137), "scaling identity");
    } catch (const Error& e) {
        pass = false;
        detail = e.what();
    }
    report(9, "rate-preservation suite (identity, counit, composition, scaling)", pass,
           detail.empty() ? "max residual " + fmt(worst) : detail);
}

// 10. Finite-horizon divergence witness: partial return-time sums.
void criterion_10() {
    GlobalSectionSystem phi2 = catalog_section_system("annulus_phi2");
    const int N = 10000;
    std::vector<double> sums = return_time_partial_sums(phi2, Point{{1.5, 0.0}}, N);
    bool ok = static_cast<int>(sums.size()) == N;
    double prev = 0.0;
    for (int k = 0; ok && k < N; ++k) {
        if (!(sums[k] > prev) || sums[k] < (k + 1) * phi2.tol.t_min) ok = false;
        prev = sums[k];
    }
    report(10, "return-time partial sums strictly increase with k*t_min growth (N=10^4)", ok,
           ok ? "S_N = " + fmt(sums.back()) : "monotonicity violated");
}

// 11. ODE integration reproduces analytic return times and converges.
void criterion_11() {
    Tolerances tol;
    tol.tol_time = 1e-14; // keep bisection well below the integration error
    auto max_err = [&](double step) {
        GlobalSectionSystem sys = catalog_section_system("annulus_phi2_ode", {{"step", step}}, tol);
        double worst = 0.0;
        for (int i = 0; i < 8; ++i) {
            Point x = sys.section_param((i + 1.0) / 9.0);
            worst = std::max(worst, std::fabs(return_time(sys, x) - 1.0));
        }
        return worst;
    };
    double e1 = max_err(1e-3);
    double e2 = max_err(5e-4);
    bool ok = e1 <= 1e-5 && e2 > 0.0 && e1 / e2 >= 4.0;
    report(11, "ODE return times match the closed form and converge with the step", ok,
           "err(1e-3) = " + fmt(e1) + ", err(5e-4) = " + fmt(e2));
}

} // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    if (g_failures) std::printf("%d criterion(s) failed\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
