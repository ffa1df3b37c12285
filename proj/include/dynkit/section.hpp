#ifndef DYNKIT_SECTION_HPP
#define DYNKIT_SECTION_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dynkit/report.hpp"
#include "dynkit/systems.hpp"

namespace dynkit {

using ScalarFn = std::function<double(const Point&)>;
using PredicateFn = std::function<bool(const Point&)>;
using MetricFn = std::function<double(const Point&, const Point&)>;

/// A flow together with a global Poincare section S = {g = 0} (optionally
/// restricted by a domain predicate). Orientation restricts admitted
/// crossings to one sign of d/dt g; 0 admits both.
struct GlobalSectionSystem {
    FlowSystem flow;
    ScalarFn section_g;
    PredicateFn in_domain;   // null = everywhere
    int orientation = 0;     // -1, 0, +1
    Tolerances tol;

    /// Metric used by every residual involving this system's points.
    /// Null = product metric of flow.space. Suspensions install a mapping
    /// torus metric that handles the seam.
    MetricFn metric;

    /// Analytic shortcuts, exact when set (suspensions). Return times are
    /// taken from a section point; crossing times from an arbitrary point
    /// (first s >= 0 with Phi(x, +-s) in S). reversed() swaps the pairs.
    ScalarFn exact_return_time;          // T_Phi on S
    ScalarFn exact_backward_return_time; // T_Psi on S, Psi the reversed flow
    ScalarFn exact_forward_crossing;     // first s >= 0 with Phi(x, s) in S
    ScalarFn exact_backward_crossing;    // first s >= 0 with Phi(x, -s) in S

    Sampler sample_section; // random point on S
    Sampler sample_space;   // random point of X
    std::function<Point(double)> section_param; // u in (0,1) -> point on S, for grids
    std::string name;

    double dist(const Point& a, const Point& b) const {
        return metric ? metric(a, b) : distance(flow.space, a, b);
    }
    bool domain_ok(const Point& x) const { return !in_domain || in_domain(x); }
};

/// One transversal intersection of an orbit with the section.
struct Crossing {
    double time = 0.0;
    Point point;
    int direction = 0; // sign of d/dt g at the crossing
};

bool on_section(const GlobalSectionSystem& sys, const Point& x);

/// March Phi(x,.) over [t0,t1] with step tol.dt; refine each admitted sign
/// change of g by bisection to tol.tol_time. Crossings are sorted by time and
/// separated by at least tol.t_min. If close_pairs is given it is set when
/// two refined crossings fall within 2*dt (possible missed crossings).
std::vector<Crossing> crossing_detect(const GlobalSectionSystem& sys, const Point& x, double t0,
                                      double t1, bool* close_pairs = nullptr);

/// Smallest return time T(x) in (t_min, max_horizon]. Throws RecurrenceError
/// when no crossing is found.
double return_time(const GlobalSectionSystem& sys, const Point& x);

/// First backward crossing time s* >= 0 with Phi(x,-s*) in S; 0 when x is on
/// the section. x need not be on S.
double backward_crossing_time(const GlobalSectionSystem& sys, const Point& x);

Point poincare_map(const GlobalSectionSystem& sys, const Point& x);

/// The same system driven by the reversed flow (orientation flipped, exact
/// shortcuts swapped where available).
GlobalSectionSystem reversed(const GlobalSectionSystem& sys);

/// P Psi with Psi(x,t) = Phi(x,-t); the inverse of poincare_map.
Point poincare_inverse(const GlobalSectionSystem& sys, const Point& x);

/// T_Psi on the reversed flow.
double backward_return_time(const GlobalSectionSystem& sys, const Point& x);

CheckReport recurrence_check(const GlobalSectionSystem& sys, const std::vector<Point>& samples,
                             double horizon);

/// Partial sums of T((P^n)(x)), n = 0..N-1. Strictly increasing.
std::vector<double> return_time_partial_sums(const GlobalSectionSystem& sys, const Point& x, int N);

/// True iff g changes sign across the orbit at x and the difference-quotient
/// estimate of |d/dt g| clears tol_space/t_min.
bool transversality_probe(const GlobalSectionSystem& sys, const Point& x);

/// The Poincare map of sys packaged as a map dynamical system on the section.
MapSystem poincare_map_system(const GlobalSectionSystem& sys);

/// Catalog flows paired with their canonical sections (annulus flows with
/// A0 = the real segment (1,2); plane_translation with the tangent section
/// y = 0, the designed transversality failure).
GlobalSectionSystem catalog_section_system(const std::string& name, const Params& params = {},
                                           const Tolerances& tol = {});

std::vector<std::string> catalog_section_names();

} // namespace dynkit

#endif
