#include "dynkit/suspension.hpp"

#include <cmath>

namespace dynkit {

TorusPoint torus_canonicalize(const MapSystem& m, const Point& x, double t) {
    if (!std::isfinite(t)) throw DomainError("torus_canonicalize: non-finite height");
    long n = static_cast<long>(std::floor(t));
    double h = t - static_cast<double>(n);
    if (h >= 1.0) { // rounding at the seam
        h -= 1.0;
        ++n;
    }
    return TorusPoint{map_apply(m, x, n), h};
}

TorusPoint suspension_eval(const MapSystem& m, const TorusPoint& p, double s) {
    return torus_canonicalize(m, p.base, p.height + s);
}

double torus_distance(const MapSystem& m, const TorusPoint& p, const TorusPoint& q) {
    auto euclid = [&](const Point& pb, double ph, const Point& qb, double qh) {
        double dx = distance(m.space, pb, qb);
        double dh = ph - qh;
        return std::sqrt(dx * dx + dh * dh);
    };
    double best = euclid(p.base, p.height, q.base, q.height);
    best = std::min(best, euclid(m.forward_fn(p.base), p.height - 1.0, q.base, q.height));
    best = std::min(best, euclid(m.inverse_fn(p.base), p.height + 1.0, q.base, q.height));
    best = std::min(best, euclid(p.base, p.height, m.forward_fn(q.base), q.height - 1.0));
    best = std::min(best, euclid(p.base, p.height, m.inverse_fn(q.base), q.height + 1.0));
    return best;
}

Space torus_space(const Space& base) { return base.with_coord(Coord::line(0.0, 1.0)); }

Point torus_pack(const TorusPoint& p) {
    Point flat = p.base;
    flat.values.push_back(p.height);
    return flat;
}

TorusPoint torus_unpack(const MapSystem& m, const Point& flat) {
    if (flat.dim() != m.space.dim() + 1) throw DimensionError("torus_unpack: dimension mismatch");
    TorusPoint p;
    p.base.values.assign(flat.values.begin(), flat.values.end() - 1);
    p.height = flat.values.back();
    return p;
}

GlobalSectionSystem suspend_system(const MapSystem& m, const Tolerances& tol) {
    tol.validate();

    FlowSystem fl;
    fl.space = torus_space(m.space);
    fl.kind = FlowSystem::Kind::Callable;
    fl.name = "suspension(" + m.name + ")";
    fl.eval_fn = [m](const Point& flat, double s) {
        return torus_pack(suspension_eval(m, torus_unpack(m, flat), s));
    };
    if (m.sample) {
        Sampler base_sample = m.sample;
        fl.sample = [base_sample](Rng& rng) {
            std::uniform_real_distribution<double> u(0.0, 1.0);
            Point b = base_sample(rng);
            double h = u(rng);
            return torus_pack(TorusPoint{std::move(b), h});
        };
    }

    GlobalSectionSystem sys;
    sys.flow = std::move(fl);
    sys.name = "suspension(" + m.name + ")";
    sys.tol = tol;
    sys.orientation = +1;
    // Signed height distance to the section, continuous across the seam.
    sys.section_g = [](const Point& flat) {
        double h = flat.values.back();
        return h < 0.5 ? h : h - 1.0;
    };
    sys.metric = [m](const Point& a, const Point& b) {
        return torus_distance(m, torus_unpack(m, a), torus_unpack(m, b));
    };

    const double eps = tol.tol_space;
    sys.exact_return_time = [](const Point& flat) { return 1.0 - flat.values.back(); };
    sys.exact_backward_return_time = [eps](const Point& flat) {
        double h = flat.values.back();
        return h <= eps ? 1.0 : h;
    };
    sys.exact_forward_crossing = [eps](const Point& flat) {
        double h = flat.values.back();
        return h <= eps ? 0.0 : 1.0 - h;
    };
    sys.exact_backward_crossing = [eps](const Point& flat) {
        double h = flat.values.back();
        return h <= eps ? 0.0 : h;
    };

    sys.sample_space = sys.flow.sample;
    if (m.sample) {
        Sampler base_sample = m.sample;
        sys.sample_section = [base_sample](Rng& rng) {
            return torus_pack(TorusPoint{base_sample(rng), 0.0});
        };
    }
    return sys;
}

} // namespace dynkit
