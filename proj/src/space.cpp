#include "dynkit/space.hpp"

#include <cmath>
#include <sstream>

namespace dynkit {

Coord Coord::line(double lo, double hi) {
    if (!(lo < hi)) throw ConfigError("box bounds require lo < hi");
    Coord c;
    c.lo = lo;
    c.hi = hi;
    return c;
}

Coord Coord::circle(double period) {
    if (!(period > 0.0)) throw ConfigError("circle period must be positive");
    Coord c;
    c.kind = CoordKind::Circle;
    c.period = period;
    return c;
}

Space Space::line(std::optional<double> lo, std::optional<double> hi) {
    Coord c;
    if (lo && hi) c = Coord::line(*lo, *hi);
    return Space{{c}};
}

Space Space::plane() { return Space{{Coord::line(), Coord::line()}}; }

Space Space::circle(double period) { return Space{{Coord::circle(period)}}; }

Space Space::with_coord(const Coord& c) const {
    Space s = *this;
    s.coords.push_back(c);
    return s;
}

void Tolerances::validate() const {
    if (!(tol_space > 0 && tol_time > 0 && tol_law > 0 && t_min > 0 && max_horizon > 0 && dt > 0))
        throw ConfigError("all tolerances must be strictly positive");
    if (!(t_min > tol_time)) throw ConfigError("t_min must exceed tol_time");
    if (!(dt < max_horizon)) throw ConfigError("dt must be below max_horizon");
}

Point canonicalize(const Space& space, const std::vector<double>& raw) {
    if (static_cast<int>(raw.size()) != space.dim())
        throw DimensionError("point has " + std::to_string(raw.size()) + " coordinates, space expects " +
                             std::to_string(space.dim()));
    Point p;
    p.values.resize(raw.size());
    for (size_t i = 0; i < raw.size(); ++i) {
        double v = raw[i];
        if (!std::isfinite(v)) throw DomainError("non-finite coordinate at index " + std::to_string(i));
        const Coord& c = space.coords[i];
        if (c.kind == CoordKind::Circle) {
            v = std::fmod(v, c.period);
            if (v < 0) v += c.period;
            if (v >= c.period) v = 0.0; // fmod rounding at the seam
        }
        p.values[i] = v;
    }
    return p;
}

double distance(const Space& space, const Point& p, const Point& q) {
    if (p.dim() != space.dim() || q.dim() != space.dim())
        throw DimensionError("distance: dimension mismatch");
    double acc = 0;
    for (size_t i = 0; i < p.values.size(); ++i) {
        double d = std::fabs(p.values[i] - q.values[i]);
        const Coord& c = space.coords[i];
        if (c.kind == CoordKind::Circle) d = std::min(d, c.period - d);
        acc += d * d;
    }
    return std::sqrt(acc);
}

bool approx_eq(const Space& space, const Point& p, const Point& q, double tol) {
    if (!(tol > 0)) throw DomainError("approx_eq: tolerance must be positive");
    return distance(space, p, q) <= tol;
}

std::string to_string(const Point& p) {
    std::ostringstream os;
    os << "(";
    for (int i = 0; i < p.dim(); ++i) {
        if (i) os << ", ";
        os << p[i];
    }
    os << ")";
    return os.str();
}

} // namespace dynkit
