#ifndef DYNKIT_SUSPENSION_HPP
#define DYNKIT_SUSPENSION_HPP

#include "dynkit/section.hpp"
#include "dynkit/systems.hpp"

namespace dynkit {

/// A point [x,t] of the mapping torus X_f, stored in normal form:
/// base canonical in the base space, height in [0,1).
struct TorusPoint {
    Point base;
    double height = 0.0;
};

/// Reduce (x, t) to its normal form [f^n(x), t-n] with t-n in [0,1).
/// The wrap applies f to the base; this is the defining relation of the
/// mapping torus, never a plain mod-1 reduction.
TorusPoint torus_canonicalize(const MapSystem& m, const Point& x, double t);

/// The suspension flow: [x,t] evolved for time s, i.e. [f^n(x), s+t-n] with
/// s+t-1 < n <= s+t. Integer bookkeeping is exact.
TorusPoint suspension_eval(const MapSystem& m, const TorusPoint& p, double s);

/// Distance on the mapping torus: minimum over the seam representatives
/// (x,h), (f(x),h-1), (f^-1(x),h+1).
double torus_distance(const MapSystem& m, const TorusPoint& p, const TorusPoint& q);

/// Flat encoding used to run torus points through the generic flow/section
/// machinery: base coordinates followed by the height.
Space torus_space(const Space& base);
Point torus_pack(const TorusPoint& p);
TorusPoint torus_unpack(const MapSystem& m, const Point& flat);

/// The suspension (Sigma f, X_f) with its canonical section {[x,0]}.
/// Return-time and crossing queries are answered analytically (exact), the
/// flow and metric operate on packed points.
GlobalSectionSystem suspend_system(const MapSystem& m, const Tolerances& tol = {});

} // namespace dynkit

#endif
