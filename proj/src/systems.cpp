#include "dynkit/systems.hpp"

#include <cmath>
#include <sstream>

namespace dynkit {

namespace {

Env make_state_env(const Point& x) {
    Env env;
    for (int i = 0; i < x.dim(); ++i) env.set("x" + std::to_string(i + 1), x[i]);
    return env;
}

Point eval_coordwise(const Space& space, const std::vector<Expression>& exprs, const Env& env) {
    std::vector<double> out;
    out.reserve(exprs.size());
    for (const auto& e : exprs) out.push_back(e.eval(env));
    return canonicalize(space, out);
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

} // namespace

MapSystem MapSystem::from_exprs(Space space, std::vector<Expression> forward,
                                std::vector<Expression> inverse, std::string name) {
    if (static_cast<int>(forward.size()) != space.dim() ||
        static_cast<int>(inverse.size()) != space.dim())
        throw ConfigError("map system needs one expression per coordinate");
    MapSystem m;
    m.space = space;
    m.forward_exprs = forward;
    m.inverse_exprs = inverse;
    m.name = std::move(name);
    m.forward_fn = [space, forward](const Point& x) {
        return eval_coordwise(space, forward, make_state_env(x));
    };
    m.inverse_fn = [space, inverse](const Point& x) {
        return eval_coordwise(space, inverse, make_state_env(x));
    };
    return m;
}

Point map_apply(const MapSystem& m, const Point& x, long n) {
    if (x.dim() != m.space.dim()) throw DimensionError("map_apply: dimension mismatch");
    Point y = x;
    const PointFn& step = n >= 0 ? m.forward_fn : m.inverse_fn;
    for (long i = 0, k = std::labs(n); i < k; ++i) y = step(y);
    return y;
}

CheckReport map_inverse_check(const MapSystem& m, int samples, double tol, std::uint64_t seed) {
    CheckReport rep;
    rep.name = "map-inverse:" + m.name;
    rep.tolerance = tol;
    rep.seed = seed;
    Rng rng(seed);
    for (int i = 0; i < samples; ++i) {
        Point x = m.sample(rng);
        try {
            double r1 = distance(m.space, m.inverse_fn(m.forward_fn(x)), x);
            double r2 = distance(m.space, m.forward_fn(m.inverse_fn(x)), x);
            rep.record(to_string(x), std::max(r1, r2));
        } catch (const Error& e) {
            rep.record_error(e.what());
        }
    }
    return rep.finalize();
}

FlowSystem FlowSystem::closed_form(Space space, std::vector<Expression> exprs, std::string name) {
    if (static_cast<int>(exprs.size()) != space.dim())
        throw ConfigError("closed-form flow needs one expression per coordinate");
    FlowSystem fl;
    fl.space = space;
    fl.kind = Kind::ClosedForm;
    fl.exprs = exprs;
    fl.name = std::move(name);
    fl.eval_fn = [space, exprs](const Point& x, double t) {
        Env env = make_state_env(x);
        env.set("t", t);
        return eval_coordwise(space, exprs, env);
    };
    return fl;
}

FlowSystem FlowSystem::ode(Space space, std::vector<Expression> field, double step, std::string name) {
    if (static_cast<int>(field.size()) != space.dim())
        throw ConfigError("ODE flow needs one field expression per coordinate");
    if (!(step > 0)) throw ConfigError("ODE step must be positive");
    FlowSystem fl;
    fl.space = space;
    fl.kind = Kind::Ode;
    fl.exprs = field;
    fl.ode_step = step;
    fl.name = std::move(name);
    const int dim = space.dim();
    fl.eval_fn = [space, field, step, dim](const Point& x, double t) {
        // Classical fixed-step RK4. Negative t integrates the negated field.
        double dir = t >= 0 ? 1.0 : -1.0;
        double span = std::fabs(t);
        long steps = span == 0 ? 0 : static_cast<long>(std::ceil(span / step - 1e-12));
        double h = steps > 0 ? span / static_cast<double>(steps) : 0.0;

        std::vector<double> y(x.values);
        std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
        Env env;
        auto deriv = [&](const std::vector<double>& state, std::vector<double>& out) {
            for (int i = 0; i < dim; ++i) env.set("x" + std::to_string(i + 1), state[i]);
            for (int i = 0; i < dim; ++i) out[i] = dir * field[i].eval(env);
        };
        for (long s = 0; s < steps; ++s) {
            deriv(y, k1);
            for (int i = 0; i < dim; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
            deriv(tmp, k2);
            for (int i = 0; i < dim; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
            deriv(tmp, k3);
            for (int i = 0; i < dim; ++i) tmp[i] = y[i] + h * k3[i];
            deriv(tmp, k4);
            for (int i = 0; i < dim; ++i) y[i] += h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
        }
        return canonicalize(space, y);
    };
    return fl;
}

Point flow_eval(const FlowSystem& fl, const Point& x, double t) {
    if (x.dim() != fl.space.dim()) throw DimensionError("flow_eval: dimension mismatch");
    if (!std::isfinite(t)) throw DomainError("flow_eval: non-finite time");
    return fl.eval_fn(x, t);
}

FlowSystem reverse(const FlowSystem& fl) {
    FlowSystem r = fl;
    r.kind = FlowSystem::Kind::Callable;
    r.exprs.clear();
    r.name = "reverse(" + fl.name + ")";
    auto inner = fl.eval_fn;
    r.eval_fn = [inner](const Point& x, double t) { return inner(x, -t); };
    return r;
}

CheckReport check_flow_laws(const FlowSystem& fl,
                            const std::vector<std::tuple<Point, double, double>>& samples, double tol) {
    CheckReport rep;
    rep.name = "flow-laws:" + fl.name;
    rep.tolerance = tol;
    for (const auto& [x, t, s] : samples) {
        try {
            double r_id = distance(fl.space, flow_eval(fl, x, 0.0), x);
            Point lhs = flow_eval(fl, flow_eval(fl, x, t), s);
            Point rhs = flow_eval(fl, x, t + s);
            double r_group = distance(fl.space, lhs, rhs);
            rep.record(to_string(x) + " t=" + fmt(t) + " s=" + fmt(s), std::max(r_id, r_group));
        } catch (const Error& e) {
            rep.record_error(e.what());
        }
    }
    return rep.finalize();
}

CheckReport check_flow_laws(const FlowSystem& fl, int samples, double time_range, double tol,
                            std::uint64_t seed) {
    Rng rng(seed);
    std::uniform_real_distribution<double> time(-time_range, time_range);
    std::vector<std::tuple<Point, double, double>> draws;
    draws.reserve(static_cast<size_t>(samples));
    for (int i = 0; i < samples; ++i) draws.emplace_back(fl.sample(rng), time(rng), time(rng));
    CheckReport rep = check_flow_laws(fl, draws, tol);
    rep.seed = seed;
    return rep;
}

// ---- catalog ----

namespace {

Expression E(const std::string& s) { return Expression::parse(s); }

Space annulus_space() {
    return Space{{Coord::line(-2.0, 2.0), Coord::line(-2.0, 2.0)}};
}

Sampler annulus_sampler() {
    return [](Rng& rng) {
        std::uniform_real_distribution<double> ur(1.05, 1.95), ua(0.0, 2.0 * M_PI);
        double r = ur(rng), a = ua(rng);
        return Point{{r * std::cos(a), r * std::sin(a)}};
    };
}

FlowSystem make_rotation_flow(const std::string& speed, const std::string& name) {
    // Rigid rotation of the plane, angular position advancing by speed*t.
    FlowSystem fl = FlowSystem::closed_form(
        annulus_space(),
        {E("x1*cos(" + speed + "*t) - x2*sin(" + speed + "*t)"),
         E("x1*sin(" + speed + "*t) + x2*cos(" + speed + "*t)")},
        name);
    fl.sample = annulus_sampler();
    return fl;
}

double get_param(const Params& params, const std::string& key, double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

void reject_unknown(const Params& params, std::initializer_list<const char*> known) {
    for (const auto& [k, v] : params) {
        bool ok = false;
        for (const char* name : known)
            if (k == name) ok = true;
        if (!ok) throw ConfigError("unknown parameter '" + k + "'");
    }
}

} // namespace

CatalogSystem catalog_get(const std::string& name, const Params& params) {
    if (name == "annulus_phi1") {
        reject_unknown(params, {});
        return make_rotation_flow("pi", name);
    }
    if (name == "annulus_phi2") {
        reject_unknown(params, {});
        return make_rotation_flow("2*pi", name);
    }
    if (name == "annulus_radial_speed") {
        reject_unknown(params, {});
        return make_rotation_flow("sqrt(x1^2 + x2^2)", name);
    }
    if (name == "annulus_phi2_ode") {
        reject_unknown(params, {"step"});
        double step = get_param(params, "step", 1e-3);
        if (!(step > 0 && step < 1.0)) throw ConfigError("annulus_phi2_ode: step out of range (0,1)");
        FlowSystem fl =
            FlowSystem::ode(annulus_space(), {E("-2*pi*x2"), E("2*pi*x1")}, step, name);
        fl.sample = annulus_sampler();
        return fl;
    }
    if (name == "circle_rotation") {
        reject_unknown(params, {"alpha"});
        double alpha = get_param(params, "alpha", 0.1);
        if (!std::isfinite(alpha)) throw ConfigError("circle_rotation: alpha must be finite");
        MapSystem m = MapSystem::from_exprs(Space::circle(1.0), {E("x1 + " + fmt(alpha))},
                                            {E("x1 - " + fmt(alpha))}, name);
        m.sample = [](Rng& rng) {
            std::uniform_real_distribution<double> u(0.0, 1.0);
            return Point{{u(rng)}};
        };
        return m;
    }
    if (name == "interval_identity") {
        reject_unknown(params, {});
        MapSystem m = MapSystem::from_exprs(Space::line(1.0, 2.0), {E("x1")}, {E("x1")}, name);
        m.sample = [](Rng& rng) {
            std::uniform_real_distribution<double> u(1.05, 1.95);
            return Point{{u(rng)}};
        };
        return m;
    }
    if (name == "plane_translation") {
        reject_unknown(params, {});
        FlowSystem fl = FlowSystem::closed_form(Space::plane(), {E("x1 + t"), E("x2")}, name);
        fl.sample = [](Rng& rng) {
            std::uniform_real_distribution<double> u(-1.0, 1.0);
            return Point{{u(rng), u(rng)}};
        };
        return fl;
    }
    if (name == "broken_quadratic") {
        reject_unknown(params, {});
        FlowSystem fl = FlowSystem::closed_form(Space::line(), {E("x1 + t^2")}, name);
        fl.sample = [](Rng& rng) {
            std::uniform_real_distribution<double> u(-1.0, 1.0);
            return Point{{u(rng)}};
        };
        return fl;
    }
    throw ConfigError("unknown catalog system '" + name + "'");
}

std::vector<std::string> catalog_names() {
    return {"annulus_phi1",      "annulus_phi2",    "annulus_phi2_ode", "annulus_radial_speed",
            "circle_rotation",   "interval_identity", "plane_translation", "broken_quadratic"};
}

} // namespace dynkit
