#include "dynkit/section.hpp"

#include <cmath>

namespace dynkit {

namespace {

int sign_of(double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

Crossing refine_crossing(const GlobalSectionSystem& sys, const Point& bracket_start, double t_start,
                         double width, double g_lo, double g_hi) {
    double lo = 0.0, hi = width;
    if (g_hi == 0.0) lo = hi;
    while (hi - lo > sys.tol.tol_time) {
        double mid = 0.5 * (lo + hi);
        double gm = sys.section_g(flow_eval(sys.flow, bracket_start, mid));
        if (gm == 0.0) {
            lo = hi = mid;
            break;
        }
        if ((g_lo < 0) != (gm < 0))
            hi = mid;
        else {
            lo = mid;
            g_lo = gm;
        }
    }
    double s = 0.5 * (lo + hi);
    Crossing c;
    c.time = t_start + s;
    c.point = flow_eval(sys.flow, bracket_start, s);
    c.direction = sign_of(g_hi - g_lo);
    return c;
}

std::vector<Crossing> scan_crossings(const GlobalSectionSystem& sys, const Point& x, double t0,
                                     double t1, double min_sep, size_t max_count,
                                     bool* close_pairs) {
    std::vector<Crossing> out;
    if (close_pairs) *close_pairs = false;
    if (!(t0 < t1)) throw PreconditionError("crossing_detect: requires t0 < t1");
    const double dt = sys.tol.dt;

    Point cur = flow_eval(sys.flow, x, t0);
    double g_cur = sys.section_g(cur);
    long k = 0;
    double t_cur = t0;
    while (t_cur < t1 && out.size() < max_count) {
        ++k;
        double t_next = std::min(t0 + static_cast<double>(k) * dt, t1);
        double h = t_next - t_cur;
        Point next = flow_eval(sys.flow, cur, h);
        double g_next = sys.section_g(next);

        int s_cur = sign_of(g_cur), s_next = sign_of(g_next);
        bool bracket = (s_cur * s_next == -1) || (s_cur != 0 && s_next == 0);
        if (bracket) {
            Crossing c = refine_crossing(sys, cur, t_cur, h, g_cur, g_next);
            bool admitted = sys.domain_ok(c.point) &&
                            (sys.orientation == 0 || c.direction == sys.orientation) &&
                            (out.empty() || c.time - out.back().time >= min_sep);
            if (admitted) {
                if (close_pairs && !out.empty() && c.time - out.back().time < 2.0 * dt)
                    *close_pairs = true;
                out.push_back(std::move(c));
            }
        }
        cur = std::move(next);
        g_cur = g_next;
        t_cur = t_next;
    }
    return out;
}

double return_time_impl(const GlobalSectionSystem& sys, const Point& x, double horizon) {
    if (!on_section(sys, x)) throw PreconditionError("return_time: point is not on the section");
    if (sys.exact_return_time) return sys.exact_return_time(x);
    auto found = scan_crossings(sys, x, sys.tol.t_min, horizon, sys.tol.t_min, 1, nullptr);
    if (found.empty())
        throw RecurrenceError("no return within horizon " + std::to_string(horizon) + " from " +
                              to_string(x));
    return found.front().time;
}

} // namespace

bool on_section(const GlobalSectionSystem& sys, const Point& x) {
    return std::fabs(sys.section_g(x)) <= sys.tol.tol_space && sys.domain_ok(x);
}

std::vector<Crossing> crossing_detect(const GlobalSectionSystem& sys, const Point& x, double t0,
                                      double t1, bool* close_pairs) {
    return scan_crossings(sys, x, t0, t1, sys.tol.t_min, static_cast<size_t>(-1), close_pairs);
}

double return_time(const GlobalSectionSystem& sys, const Point& x) {
    return return_time_impl(sys, x, sys.tol.max_horizon);
}

double backward_crossing_time(const GlobalSectionSystem& sys, const Point& x) {
    if (on_section(sys, x)) return 0.0;
    if (sys.exact_backward_crossing) return sys.exact_backward_crossing(x);
    GlobalSectionSystem rev = reversed(sys);
    auto found = scan_crossings(rev, x, 0.0, sys.tol.max_horizon, 0.0, 1, nullptr);
    if (found.empty())
        throw RecurrenceError("no backward crossing within horizon from " + to_string(x));
    return found.front().time;
}

Point poincare_map(const GlobalSectionSystem& sys, const Point& x) {
    if (!on_section(sys, x)) throw PreconditionError("poincare_map: point is not on the section");
    if (sys.exact_return_time) return flow_eval(sys.flow, x, sys.exact_return_time(x));
    auto found = scan_crossings(sys, x, sys.tol.t_min, sys.tol.max_horizon, sys.tol.t_min, 1, nullptr);
    if (found.empty())
        throw RecurrenceError("no return within horizon from " + to_string(x));
    return found.front().point;
}

GlobalSectionSystem reversed(const GlobalSectionSystem& sys) {
    GlobalSectionSystem rev = sys;
    rev.flow = reverse(sys.flow);
    rev.orientation = -sys.orientation;
    rev.name = "reverse(" + sys.name + ")";
    // Exact hooks swap roles under time reversal.
    rev.exact_return_time = sys.exact_backward_return_time;
    rev.exact_backward_return_time = sys.exact_return_time;
    rev.exact_forward_crossing = sys.exact_backward_crossing;
    rev.exact_backward_crossing = sys.exact_forward_crossing;
    return rev;
}

Point poincare_inverse(const GlobalSectionSystem& sys, const Point& x) {
    return poincare_map(reversed(sys), x);
}

double backward_return_time(const GlobalSectionSystem& sys, const Point& x) {
    return return_time(reversed(sys), x);
}

CheckReport recurrence_check(const GlobalSectionSystem& sys, const std::vector<Point>& samples,
                             double horizon) {
    CheckReport rep;
    rep.name = "recurrence:" + sys.name;
    rep.tolerance = 0.0;
    GlobalSectionSystem rev = reversed(sys);
    for (const Point& x : samples) {
        try {
            bool fwd, bwd;
            if (on_section(sys, x)) {
                fwd = return_time_impl(sys, x, horizon) <= horizon;
                bwd = return_time_impl(rev, x, horizon) <= horizon;
            } else {
                if (sys.exact_forward_crossing)
                    fwd = sys.exact_forward_crossing(x) <= horizon;
                else
                    fwd = !scan_crossings(sys, x, 0.0, horizon, 0.0, 1, nullptr).empty();
                if (sys.exact_backward_crossing)
                    bwd = sys.exact_backward_crossing(x) <= horizon;
                else
                    bwd = !scan_crossings(rev, x, 0.0, horizon, 0.0, 1, nullptr).empty();
            }
            if (fwd && bwd)
                rep.record(to_string(x), 0.0);
            else
                rep.record_error("no " + std::string(fwd ? "backward" : "forward") +
                                 " crossing within horizon from " + to_string(x));
        } catch (const Error& e) {
            rep.record_error(e.what());
        }
    }
    return rep.finalize();
}

std::vector<double> return_time_partial_sums(const GlobalSectionSystem& sys, const Point& x, int N) {
    std::vector<double> sums;
    sums.reserve(static_cast<size_t>(N));
    Point cur = x;
    double acc = 0.0;
    for (int k = 0; k < N; ++k) {
        acc += return_time(sys, cur);
        sums.push_back(acc);
        if (k + 1 < N) cur = poincare_map(sys, cur);
    }
    return sums;
}

bool transversality_probe(const GlobalSectionSystem& sys, const Point& x) {
    if (!on_section(sys, x))
        throw PreconditionError("transversality_probe: point is not on the section");
    double delta = sys.tol.t_min / 2.0;
    double g_plus = sys.section_g(flow_eval(sys.flow, x, delta));
    double g_minus = sys.section_g(flow_eval(sys.flow, x, -delta));
    bool opposite = g_plus * g_minus < 0.0;
    double slope = std::fabs(g_plus - g_minus) / (2.0 * delta);
    return opposite && slope > sys.tol.tol_space / sys.tol.t_min;
}

MapSystem poincare_map_system(const GlobalSectionSystem& sys) {
    MapSystem m;
    m.space = sys.flow.space;
    m.name = "P(" + sys.name + ")";
    m.forward_fn = [sys](const Point& x) { return poincare_map(sys, x); };
    m.inverse_fn = [sys](const Point& x) { return poincare_inverse(sys, x); };
    m.sample = sys.sample_section;
    return m;
}

// ---- catalog sections ----

namespace {

GlobalSectionSystem annulus_section(FlowSystem fl, const Tolerances& tol) {
    GlobalSectionSystem sys;
    sys.name = fl.name;
    sys.flow = std::move(fl);
    sys.section_g = [](const Point& p) { return p[1]; };
    sys.in_domain = [](const Point& p) { return p[0] > 0.0; };
    sys.orientation = 0;
    sys.tol = tol;
    sys.sample_section = [](Rng& rng) {
        std::uniform_real_distribution<double> u(1.05, 1.95);
        return Point{{u(rng), 0.0}};
    };
    sys.sample_space = sys.flow.sample;
    sys.section_param = [](double u) { return Point{{1.0 + u, 0.0}}; };
    return sys;
}

} // namespace

GlobalSectionSystem catalog_section_system(const std::string& name, const Params& params,
                                           const Tolerances& tol) {
    tol.validate();
    if (name == "annulus_phi1" || name == "annulus_phi2" || name == "annulus_phi2_ode" ||
        name == "annulus_radial_speed")
        return annulus_section(std::get<FlowSystem>(catalog_get(name, params)), tol);
    if (name == "plane_translation") {
        GlobalSectionSystem sys;
        sys.flow = std::get<FlowSystem>(catalog_get(name, params));
        sys.name = name;
        sys.section_g = [](const Point& p) { return p[1]; };
        sys.orientation = 0;
        sys.tol = tol;
        sys.sample_section = [](Rng& rng) {
            std::uniform_real_distribution<double> u(-1.0, 1.0);
            return Point{{u(rng), 0.0}};
        };
        sys.sample_space = sys.flow.sample;
        sys.section_param = [](double u) { return Point{{2.0 * u - 1.0, 0.0}}; };
        return sys;
    }
    throw ConfigError("no catalog section system named '" + name + "'");
}

std::vector<std::string> catalog_section_names() {
    return {"annulus_phi1", "annulus_phi2", "annulus_phi2_ode", "annulus_radial_speed",
            "plane_translation"};
}

} // namespace dynkit
