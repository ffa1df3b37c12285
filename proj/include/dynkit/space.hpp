#ifndef DYNKIT_SPACE_HPP
#define DYNKIT_SPACE_HPP

#include <optional>
#include <string>
#include <vector>

#include "dynkit/errors.hpp"

namespace dynkit {

enum class CoordKind { Line, Circle };

/// One coordinate of a product space: an unbounded real line (with optional
/// advisory box bounds) or a circle of given period.
struct Coord {
    CoordKind kind = CoordKind::Line;
    double period = 0.0;              // Circle only, > 0
    std::optional<double> lo, hi;     // Line only, advisory bounds, lo < hi

    static Coord line() { return Coord{}; }
    static Coord line(double lo, double hi);
    static Coord circle(double period);
};

/// A finite product of lines and circles. The only state spaces this library
/// represents; covers intervals, planes, annuli (via domain predicates),
/// circles and tori.
struct Space {
    std::vector<Coord> coords;

    int dim() const { return static_cast<int>(coords.size()); }

    static Space line(std::optional<double> lo = {}, std::optional<double> hi = {});
    static Space plane();
    static Space circle(double period = 1.0);

    /// Product of this space with extra coordinates appended.
    Space with_coord(const Coord& c) const;
};

/// A state vector. Always stored canonically: circle coordinates in
/// [0, period), every value finite.
struct Point {
    std::vector<double> values;

    int dim() const { return static_cast<int>(values.size()); }
    double operator[](int i) const { return values[static_cast<size_t>(i)]; }
};

/// Numerical policy shared by every check in the library.
struct Tolerances {
    double tol_space = 1e-8;   // point-equality distance
    double tol_time = 1e-10;   // crossing-time bisection target
    double tol_law = 1e-6;     // law-residual pass bound
    double t_min = 1e-4;       // minimum admissible return time
    double max_horizon = 1e3;  // recurrence search bound
    double dt = 1e-2;          // march step for crossing detection

    void validate() const;
};

/// Reduce raw coordinates to canonical form (circle values into [0, period)).
/// Throws DimensionError / DomainError on bad input.
Point canonicalize(const Space& space, const std::vector<double>& raw);

/// Product metric: Euclidean, with circle coordinates contributing the
/// shorter arc.
double distance(const Space& space, const Point& p, const Point& q);

bool approx_eq(const Space& space, const Point& p, const Point& q, double tol);

std::string to_string(const Point& p);

} // namespace dynkit

#endif
