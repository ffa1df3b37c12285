#include "dynkit/category.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <sstream>

namespace dynkit {

namespace {

// ---- return-time orbit cache ----
//
// R_integral and its inverse walk the P-orbit of a base point; the canonical
// tau evaluates many times along the same orbit. Cells are extended lazily
// in both directions and reused.

struct Orbit {
    std::vector<Point> pts_fwd;  // P^0 x, P^1 x, ...
    std::vector<double> T_fwd;   // T(P^i x)
    std::vector<Point> pts_bwd;  // P^-1 x, P^-2 x, ...
    std::vector<double> T_bwd;
};

Orbit make_orbit(const Point& x) {
    Orbit o;
    o.pts_fwd.push_back(x);
    return o;
}

double orbit_T(const GlobalSectionSystem& sys, Orbit& o, long i) {
    if (i >= 0) {
        while (static_cast<long>(o.pts_fwd.size()) <= i)
            o.pts_fwd.push_back(poincare_map(sys, o.pts_fwd.back()));
        while (static_cast<long>(o.T_fwd.size()) <= i)
            o.T_fwd.push_back(return_time(sys, o.pts_fwd[o.T_fwd.size()]));
        return o.T_fwd[static_cast<size_t>(i)];
    }
    long k = -i; // need T(P^-k x), pts_bwd[k-1]
    while (static_cast<long>(o.pts_bwd.size()) < k) {
        const Point& prev = o.pts_bwd.empty() ? o.pts_fwd.front() : o.pts_bwd.back();
        o.pts_bwd.push_back(poincare_inverse(sys, prev));
    }
    while (static_cast<long>(o.T_bwd.size()) < k)
        o.T_bwd.push_back(return_time(sys, o.pts_bwd[o.T_bwd.size()]));
    return o.T_bwd[static_cast<size_t>(k - 1)];
}

double R_integral_orbit(const GlobalSectionSystem& sys, Orbit& o, double a) {
    if (!std::isfinite(a)) throw DomainError("R_integral: non-finite bound");
    if (a >= 0) {
        long m = static_cast<long>(std::floor(a));
        double sum = 0;
        for (long i = 0; i < m; ++i) sum += orbit_T(sys, o, i);
        double frac = a - static_cast<double>(m);
        if (frac > 0) sum += frac * orbit_T(sys, o, m);
        return sum;
    }
    double b = -a;
    long m = static_cast<long>(std::floor(b));
    double sum = 0;
    for (long i = 1; i <= m; ++i) sum += orbit_T(sys, o, -i);
    double frac = b - static_cast<double>(m);
    if (frac > 0) sum += frac * orbit_T(sys, o, -(m + 1));
    return -sum;
}

double R_integral_inverse_orbit(const GlobalSectionSystem& sys, Orbit& o, double v) {
    if (!std::isfinite(v)) throw DomainError("R_integral_inverse: non-finite value");
    if (v == 0) return 0.0;
    const long max_cells = static_cast<long>(std::fabs(v) / sys.tol.t_min) + 2;
    if (v > 0) {
        double acc = 0;
        for (long i = 0; i < max_cells; ++i) {
            double Ti = orbit_T(sys, o, i);
            if (acc + Ti >= v) return static_cast<double>(i) + (v - acc) / Ti;
            acc += Ti;
        }
    } else {
        double w = -v, acc = 0;
        for (long i = 1; i <= max_cells; ++i) {
            double Ti = orbit_T(sys, o, -i);
            if (acc + Ti >= w) return -(static_cast<double>(i - 1) + (w - acc) / Ti);
            acc += Ti;
        }
    }
    throw RecurrenceError("R_integral_inverse: value not attained within cell budget");
}

// Shared lazily-populated orbit store keyed by base-point coordinates.
using OrbitStore = std::map<std::vector<double>, Orbit>;
using OrbitStorePtr = std::shared_ptr<OrbitStore>;

Orbit& orbit_for(OrbitStore& store, const Point& x) {
    auto [it, inserted] = store.try_emplace(x.values, Orbit{});
    if (inserted) it->second = make_orbit(x);
    return it->second;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

void require(bool ok, const std::string& msg) {
    if (!ok) throw PreconditionError(msg);
}

} // namespace

WeakMorphism WeakMorphism::identity(const GlobalSectionSystem& sys) {
    WeakMorphism w;
    w.source = sys;
    w.target = sys;
    w.h = [](const Point& x) { return x; };
    w.tau = [](const Point&, double t) { return t; };
    w.name = "id(" + sys.name + ")";
    return w;
}

MapMorphism map_identity(const MapSystem& m) {
    MapMorphism mm;
    mm.source = m;
    mm.target = m;
    mm.h = [](const Point& x) { return x; };
    mm.name = "id(" + m.name + ")";
    return mm;
}

MapMorphism map_compose(const MapMorphism& h2, const MapMorphism& h1) {
    require(h1.target.space.dim() == h2.source.space.dim(), "map_compose: system mismatch");
    MapMorphism mm;
    mm.source = h1.source;
    mm.target = h2.target;
    PointFn f1 = h1.h, f2 = h2.h;
    mm.h = [f1, f2](const Point& x) { return f2(f1(x)); };
    mm.name = h2.name + " . " + h1.name;
    return mm;
}

CheckReport map_morphism_check(const MapMorphism& mm, int samples, double tol, std::uint64_t seed) {
    CheckReport rep;
    rep.name = "map-morphism:" + mm.name;
    rep.tolerance = tol;
    rep.seed = seed;
    Rng rng(seed);
    for (int i = 0; i < samples; ++i) {
        Point x = mm.source.sample(rng);
        try {
            Point lhs = mm.h(mm.source.forward_fn(x));
            Point rhs = mm.target.forward_fn(mm.h(x));
            rep.record(to_string(x), distance(mm.target.space, lhs, rhs));
        } catch (const Error& e) {
            rep.record_error(e.what());
        }
    }
    return rep.finalize();
}

CheckReport weak_morphism_check(const WeakMorphism& w,
                                const std::vector<std::pair<Point, double>>& samples, double tol) {
    CheckReport rep;
    rep.name = "weak-morphism:" + w.name;
    rep.tolerance = tol;
    for (const auto& [x, t] : samples) {
        try {
            Point lhs = w.h(flow_eval(w.source.flow, x, t));
            Point rhs = flow_eval(w.target.flow, w.h(x), w.tau(x, t));
            double r = w.target.dist(lhs, rhs);
            r = std::max(r, std::fabs(w.tau(x, 0.0)));
            rep.record(to_string(x) + " t=" + fmt(t), r);

            // tau(x,.) strictly increasing on a fixed 64-point grid.
            double prev = w.tau(x, -10.0);
            for (int j = 1; j < 64; ++j) {
                double tj = -10.0 + 20.0 * static_cast<double>(j) / 63.0;
                double cur = w.tau(x, tj);
                if (!(cur > prev)) {
                    rep.record_error("tau not strictly increasing at " + to_string(x) +
                                     " t=" + fmt(tj));
                    break;
                }
                prev = cur;
            }
        } catch (const Error& e) {
            rep.record_error(e.what());
        }
    }
    return rep.finalize();
}

CheckReport weak_morphism_check(const WeakMorphism& w, int samples, double time_range, double tol,
                                std::uint64_t seed) {
    Rng rng(seed);
    std::uniform_real_distribution<double> time(-time_range, time_range);
    std::vector<std::pair<Point, double>> draws;
    draws.reserve(static_cast<size_t>(samples));
    for (int i = 0; i < samples; ++i) draws.emplace_back(w.source.sample_space(rng), time(rng));
    CheckReport rep = weak_morphism_check(w, draws, tol);
    rep.seed = seed;
    return rep;
}

WeakMorphism weak_compose(const WeakMorphism& w2, const WeakMorphism& w1) {
    require(w1.target.flow.space.dim() == w2.source.flow.space.dim(),
            "weak_compose: system mismatch");
    WeakMorphism w;
    w.source = w1.source;
    w.target = w2.target;
    PointFn h1 = w1.h, h2 = w2.h;
    TimeReparam t1 = w1.tau, t2 = w2.tau;
    w.h = [h1, h2](const Point& x) { return h2(h1(x)); };
    w.tau = [h1, t1, t2](const Point& x, double t) { return t2(h1(x), t1(x, t)); };
    w.name = w2.name + " . " + w1.name;
    return w;
}

CheckReport section_preservation_check(const WeakMorphism& w, int samples, std::uint64_t seed) {
    CheckReport rep;
    rep.name = "section-preservation:" + w.name;
    rep.tolerance = 0.0;
    rep.seed = seed;
    Rng rng(seed);
    auto probe = [&](const Point& x, const char* tag) {
        try {
            bool src_on = on_section(w.source, x);
            bool tgt_on = on_section(w.target, w.h(x));
            rep.record(std::string(tag) + " " + to_string(x), src_on == tgt_on ? 0.0 : 1.0);
        } catch (const Error& e) {
            rep.record_error(e.what());
        }
    };
    for (int i = 0; i < samples; ++i) {
        Point on = w.source.sample_section(rng);
        probe(on, "on");
        // nudged just off the section along the flow
        probe(flow_eval(w.source.flow, on, 20.0 * w.source.tol.t_min), "near");
        probe(w.source.sample_space(rng), "off");
    }
    return rep.finalize();
}

CheckReport period_correspondence_check(const WeakMorphism& w, int samples, double tol,
                                        std::uint64_t seed) {
    CheckReport rep;
    rep.name = "period-correspondence:" + w.name;
    rep.tolerance = tol;
    rep.seed = seed;
    Rng rng(seed);
    for (int i = 0; i < samples; ++i) {
        Point x = w.source.sample_section(rng);
        try {
            double T1 = return_time(w.source, x);
            double T2 = return_time(w.target, w.h(x));
            rep.record(to_string(x), std::fabs(T2 - w.tau(x, T1)));
        } catch (const Error& e) {
            rep.record_error(e.what());
        }
    }
    return rep.finalize();
}

// ---- comparison data ----

double R_integral(const GlobalSectionSystem& sys, const Point& x, double a) {
    require(on_section(sys, x), "R_integral: base point not on the section");
    Orbit o = make_orbit(x);
    return R_integral_orbit(sys, o, a);
}

double R_integral_inverse(const GlobalSectionSystem& sys, const Point& x, double v) {
    require(on_section(sys, x), "R_integral_inverse: base point not on the section");
    Orbit o = make_orbit(x);
    return R_integral_inverse_orbit(sys, o, v);
}

Point k_eval(const GlobalSectionSystem& sys, const TorusPoint& p) {
    require(on_section(sys, p.base), "k_eval: base point not on the section");
    require(p.height >= 0.0 && p.height < 1.0, "k_eval: height outside [0,1)");
    double T = return_time(sys, p.base);
    return flow_eval(sys.flow, p.base, p.height * T);
}

TorusPoint k_inverse(const GlobalSectionSystem& sys, const Point& y) {
    double s = backward_crossing_time(sys, y);
    if (s == 0.0) return TorusPoint{y, 0.0};
    Point x = flow_eval(sys.flow, y, -s);
    double T = return_time(sys, x);
    double h = s / T;
    if (h >= 1.0) h = std::nextafter(1.0, 0.0); // refinement jitter at the far edge
    return TorusPoint{std::move(x), h};
}

double tau_eval(const GlobalSectionSystem& sys, const TorusPoint& p, double s) {
    require(on_section(sys, p.base), "tau_eval: base point not on the section");
    Orbit o = make_orbit(p.base);
    return R_integral_orbit(sys, o, s + p.height) - p.height * orbit_T(sys, o, 0);
}

TorusPoint unit_l(const MapSystem& m, const Point& x) {
    return TorusPoint{canonicalize(m.space, x.values), 0.0};
}

WeakMorphism canonical_counit(const GlobalSectionSystem& sys) {
    MapSystem psys = poincare_map_system(sys);
    WeakMorphism w;
    w.source = suspend_system(psys, sys.tol);
    w.target = sys;
    w.name = "(k,tau)(" + sys.name + ")";

    GlobalSectionSystem base = sys;
    w.h = [base, psys](const Point& flat) { return k_eval(base, torus_unpack(psys, flat)); };

    auto store = std::make_shared<OrbitStore>();
    w.tau = [base, psys, store](const Point& flat, double s) {
        TorusPoint p = torus_unpack(psys, flat);
        Orbit& o = orbit_for(*store, p.base);
        return R_integral_orbit(base, o, s + p.height) - p.height * orbit_T(base, o, 0);
    };
    return w;
}

WeakMorphism suspend_morphism(const MapMorphism& mm, const Tolerances& tol) {
    if (mm.source.sample) {
        CheckReport gate = map_morphism_check(mm, 32, tol.tol_law, 1);
        require(gate.pass, "suspend_morphism: base morphism law fails (max residual " +
                               fmt(gate.max_residual) + ")");
    }
    WeakMorphism w;
    w.source = suspend_system(mm.source, tol);
    w.target = suspend_system(mm.target, tol);
    w.name = "suspend(" + mm.name + ")";
    MapSystem src = mm.source;
    PointFn h = mm.h;
    w.h = [src, h](const Point& flat) {
        TorusPoint p = torus_unpack(src, flat);
        return torus_pack(TorusPoint{h(p.base), p.height});
    };
    w.tau = [](const Point&, double s) { return s; };
    return w;
}

MapMorphism poincare_functor_on_morphism(const WeakMorphism& w, int samples, double tol,
                                         std::uint64_t seed) {
    CheckReport sec = section_preservation_check(w, samples, seed);
    require(sec.pass, "poincare functor: morphism does not preserve the sections");

    MapMorphism mm;
    mm.source = poincare_map_system(w.source);
    mm.target = poincare_map_system(w.target);
    mm.h = w.h;
    mm.name = "P(" + w.name + ")";

    CheckReport law = map_morphism_check(mm, samples, tol, seed);
    if (!law.pass)
        throw Error("poincare functor: conjugacy law residual " + fmt(law.max_residual) +
                    " exceeds " + fmt(tol));
    return mm;
}

// ---- rate preservation ----

CheckReport rate_preserving_check(const WeakMorphism& w, int samples, double tol,
                                  std::uint64_t seed) {
    CheckReport rep;
    rep.name = "rate-preserving:" + w.name;
    rep.tolerance = tol;
    rep.seed = seed;
    Rng rng(seed);
    std::uniform_real_distribution<double> ut(0.0, 1.0), us(-3.0, 3.0);
    OrbitStore src_orbits, tgt_orbits;
    for (int i = 0; i < samples; ++i) {
        Point x = w.source.sample_section(rng);
        double t = ut(rng), s = us(rng);
        try {
            Orbit& o1 = orbit_for(src_orbits, x);
            double T1 = orbit_T(w.source, o1, 0);
            Point p = flow_eval(w.source.flow, x, t * T1);
            double arg = R_integral_orbit(w.source, o1, s + t) - t * T1;
            double lhs = w.tau(p, arg);

            Point hx = w.h(x);
            Orbit& o2 = orbit_for(tgt_orbits, hx);
            double T2 = orbit_T(w.target, o2, 0);
            double rhs = R_integral_orbit(w.target, o2, s + t) - t * T2;

            rep.record(to_string(x) + " t=" + fmt(t) + " s=" + fmt(s), std::fabs(lhs - rhs));
        } catch (const Error& e) {
            rep.record_error(e.what());
        }
    }
    return rep.finalize();
}

CheckReport rate_scaling_check(const WeakMorphism& w, int samples, double tol, std::uint64_t seed) {
    CheckReport pre = rate_preserving_check(w, samples, tol, seed);
    require(pre.pass, "rate_scaling_check: morphism is not rate-preserving (max residual " +
                          fmt(pre.max_residual) + ")");
    CheckReport rep;
    rep.name = "rate-scaling:" + w.name;
    rep.tolerance = tol;
    rep.seed = seed;
    Rng rng(seed);
    std::uniform_real_distribution<double> ut(0.0, 1.0);
    for (int i = 0; i < samples; ++i) {
        Point x = w.source.sample_section(rng);
        double t = ut(rng);
        try {
            double T1 = return_time(w.source, x);
            double lhs = w.tau(x, t * T1);
            double rhs = t * w.tau(x, T1);
            rep.record(to_string(x) + " t=" + fmt(t), std::fabs(lhs - rhs));
        } catch (const Error& e) {
            rep.record_error(e.what());
        }
    }
    return rep.finalize();
}

CheckReport rate_composition_check(const WeakMorphism& w2, const WeakMorphism& w1, int samples,
                                   double tol, std::uint64_t seed) {
    require(rate_preserving_check(w1, samples, tol, seed).pass,
            "rate_composition_check: first morphism is not rate-preserving");
    require(rate_preserving_check(w2, samples, tol, seed).pass,
            "rate_composition_check: second morphism is not rate-preserving");
    CheckReport rep = rate_preserving_check(weak_compose(w2, w1), samples, tol, seed);
    rep.name = "rate-composition:" + w2.name + " . " + w1.name;
    return rep;
}

// ---- adjunction laws ----

CheckReport triangle_identity_1(const MapSystem& m, int samples, double tol, std::uint64_t seed) {
    CheckReport rep;
    rep.name = "triangle-1:" + m.name;
    rep.tolerance = tol;
    rep.seed = seed;

    GlobalSectionSystem susp = suspend_system(m);
    auto store = std::make_shared<OrbitStore>();

    Rng rng(seed);
    std::uniform_real_distribution<double> ut(0.0, 1.0), us(-3.0, 3.0);
    for (int i = 0; i < samples; ++i) {
        Point x = m.sample(rng);
        double t = ut(rng), s = us(rng);
        try {
            Point p = torus_pack(TorusPoint{x, t}); // [x,t] in the mapping torus of f
            // Sigma(l)([x,t]) = [[x,0], t] over the Poincare system of the suspension
            TorusPoint lifted{torus_pack(TorusPoint{x, 0.0}), t};
            Point back = k_eval(susp, lifted);
            double space_res = susp.dist(back, p);

            Orbit& o = orbit_for(*store, lifted.base);
            double time_res = std::fabs(
                (R_integral_orbit(susp, o, s + t) - t * orbit_T(susp, o, 0)) - s);
            rep.record(to_string(x) + " t=" + fmt(t) + " s=" + fmt(s),
                       std::max(space_res, time_res));
        } catch (const Error& e) {
            rep.record_error(e.what());
        }
    }
    return rep.finalize();
}

CheckReport triangle_identity_2(const GlobalSectionSystem& sys, int samples, double tol,
                                std::uint64_t seed) {
    CheckReport rep;
    rep.name = "triangle-2:" + sys.name;
    rep.tolerance = tol;
    rep.seed = seed;
    Rng rng(seed);
    for (int i = 0; i < samples; ++i) {
        Point x = sys.sample_section(rng);
        try {
            rep.record(to_string(x), sys.dist(k_eval(sys, TorusPoint{x, 0.0}), x));
        } catch (const Error& e) {
            rep.record_error(e.what());
        }
    }
    return rep.finalize();
}

CheckReport naturality_check_k(const WeakMorphism& w, int samples, double tol, std::uint64_t seed) {
    CheckReport sec = section_preservation_check(w, samples, seed);
    require(sec.pass, "naturality_check_k: morphism does not preserve the sections");

    CheckReport rep;
    rep.name = "naturality-k:" + w.name;
    rep.tolerance = tol;
    rep.seed = seed;
    Rng rng(seed);
    std::uniform_real_distribution<double> ut(0.0, 1.0), us(-3.0, 3.0);
    OrbitStore src_orbits, tgt_orbits;
    for (int i = 0; i < samples; ++i) {
        Point x = w.source.sample_section(rng);
        double t = ut(rng), s = us(rng);
        try {
            // space square: h(k1([x,t])) = k2([h(x),t])
            Point lhs_pt = w.h(k_eval(w.source, TorusPoint{x, t}));
            Point hx = w.h(x);
            Point rhs_pt = k_eval(w.target, TorusPoint{hx, t});
            double space_res = w.target.dist(lhs_pt, rhs_pt);

            // time square: sigma(k1([x,t]), tau1([x,t],s)) = tau2([h(x),t],s)
            Orbit& o1 = orbit_for(src_orbits, x);
            double tau1 = R_integral_orbit(w.source, o1, s + t) - t * orbit_T(w.source, o1, 0);
            double lhs_time = w.tau(k_eval(w.source, TorusPoint{x, t}), tau1);
            Orbit& o2 = orbit_for(tgt_orbits, hx);
            double tau2 = R_integral_orbit(w.target, o2, s + t) - t * orbit_T(w.target, o2, 0);
            double time_res = std::fabs(lhs_time - tau2);

            rep.record(to_string(x) + " t=" + fmt(t) + " s=" + fmt(s),
                       std::max(space_res, time_res));
        } catch (const Error& e) {
            rep.record_error(e.what());
        }
    }
    return rep.finalize();
}

CheckReport naturality_check_l(const MapMorphism& mm, int samples, double tol, std::uint64_t seed) {
    CheckReport gate = map_morphism_check(mm, samples, tol, seed);
    require(gate.pass, "naturality_check_l: base morphism law fails");

    WeakMorphism hbar = suspend_morphism(mm);
    CheckReport rep;
    rep.name = "naturality-l:" + mm.name;
    rep.tolerance = tol;
    rep.seed = seed;
    Rng rng(seed);
    for (int i = 0; i < samples; ++i) {
        Point x = mm.source.sample(rng);
        try {
            // (P Sigma)(h) o l_f versus l_g o h; both land in the suspension of g
            Point via_functor = hbar.h(torus_pack(unit_l(mm.source, x)));
            Point direct = torus_pack(unit_l(mm.target, mm.h(x)));
            rep.record(to_string(x), hbar.target.dist(via_functor, direct));
        } catch (const Error& e) {
            rep.record_error(e.what());
        }
    }
    return rep.finalize();
}

WeakMorphism promote_to_rate_preserving(const WeakMorphism& w, int gate_samples, double tol,
                                        std::uint64_t seed) {
    CheckReport law = weak_morphism_check(w, gate_samples, 3.0, tol, seed);
    require(law.pass, "promote: weak-morphism law fails (max residual " + fmt(law.max_residual) +
                          ")");
    CheckReport sec = section_preservation_check(w, gate_samples, seed);
    require(sec.pass, "promote: morphism does not preserve the sections");

    GlobalSectionSystem src = w.source, tgt = w.target;
    PointFn h = w.h;
    auto src_orbits = std::make_shared<OrbitStore>();
    auto tgt_orbits = std::make_shared<OrbitStore>();

    WeakMorphism out;
    out.source = src;
    out.target = tgt;
    out.name = "promote(" + w.name + ")";
    out.h = [src, tgt, h](const Point& y) {
        TorusPoint p = k_inverse(src, y);
        return k_eval(tgt, TorusPoint{h(p.base), p.height});
    };
    out.tau = [src, tgt, h, src_orbits, tgt_orbits](const Point& y, double s) {
        TorusPoint p = k_inverse(src, y);
        Orbit& o1 = orbit_for(*src_orbits, p.base);
        double T1 = orbit_T(src, o1, 0);
        // invert tau1 at [x,t]: the r with R1(r+t) - t*T1 = s
        double r = R_integral_inverse_orbit(src, o1, s + p.height * T1) - p.height;
        Point hx = h(p.base);
        Orbit& o2 = orbit_for(*tgt_orbits, hx);
        double T2 = orbit_T(tgt, o2, 0);
        return R_integral_orbit(tgt, o2, r + p.height) - p.height * T2;
    };
    return out;
}

} // namespace dynkit
