#ifndef DYNKIT_SYSTEMS_HPP
#define DYNKIT_SYSTEMS_HPP

#include <functional>
#include <map>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "dynkit/expr.hpp"
#include "dynkit/report.hpp"
#include "dynkit/space.hpp"

namespace dynkit {

using Rng = std::mt19937_64;
using PointFn = std::function<Point(const Point&)>;
using Sampler = std::function<Point(Rng&)>;

/// A map dynamical system (f, X): a homeomorphism given by forward and
/// inverse rules. Rules may come from parsed expressions (config files,
/// catalog) or be arbitrary callables (Poincare maps of numeric flows).
struct MapSystem {
    Space space;
    PointFn forward_fn;
    PointFn inverse_fn;
    std::vector<Expression> forward_exprs; // empty when the rule is a builtin callable
    std::vector<Expression> inverse_exprs;
    Sampler sample; // random point of the system's domain
    std::string name;

    static MapSystem from_exprs(Space space, std::vector<Expression> forward,
                                std::vector<Expression> inverse, std::string name = {});
};

/// Iterate f^n (negative n uses the inverse). Result is canonical.
Point map_apply(const MapSystem& m, const Point& x, long n);

/// Sampled check that forward and inverse really invert each other.
CheckReport map_inverse_check(const MapSystem& m, int samples, double tol, std::uint64_t seed);

/// A flow (Phi, X). Closed-form flows evaluate an expression in x1..xn and
/// t; ODE flows integrate a vector field with fixed-step RK4; callable flows
/// wrap arbitrary evaluators (suspensions, reversals).
struct FlowSystem {
    enum class Kind { ClosedForm, Ode, Callable };

    Space space;
    Kind kind = Kind::Callable;
    std::function<Point(const Point&, double)> eval_fn;
    std::vector<Expression> exprs; // closed form or ODE field
    double ode_step = 1e-3;
    Sampler sample;
    std::string name;

    static FlowSystem closed_form(Space space, std::vector<Expression> exprs, std::string name = {});
    static FlowSystem ode(Space space, std::vector<Expression> field, double step,
                          std::string name = {});
};

/// Phi(x, t), canonicalized.
Point flow_eval(const FlowSystem& fl, const Point& x, double t);

/// The time-reversed flow Psi(x,t) = Phi(x,-t). Exact by construction.
FlowSystem reverse(const FlowSystem& fl);

/// Verify the flow identity Phi(x,0)=x and group law Phi(Phi(x,t),s)=Phi(x,t+s)
/// on the given (x, t, s) samples.
CheckReport check_flow_laws(const FlowSystem& fl,
                            const std::vector<std::tuple<Point, double, double>>& samples, double tol);

/// Same check with internally drawn samples (|t|,|s| <= time_range).
CheckReport check_flow_laws(const FlowSystem& fl, int samples, double time_range, double tol,
                            std::uint64_t seed);

// ---- catalog ----

using CatalogSystem = std::variant<MapSystem, FlowSystem>;
using Params = std::map<std::string, double>;

/// Built-in example systems. Throws ConfigError for unknown names or
/// out-of-range parameters.
///
///   annulus_phi1          flow z e^{i pi t} on the annulus 1<|z|<2
///   annulus_phi2          flow z e^{2 pi i t} on the annulus
///   annulus_phi2_ode      the same rigid rotation as an ODE field (param: step)
///   annulus_radial_speed  rotation with angular speed w(r)=r (non-constant return time)
///   circle_rotation       map x -> x+alpha mod 1 (param: alpha)
///   interval_identity     identity map on (1,2)
///   plane_translation     flow (x,y) -> (x+t, y); tangent to the section y=0
///   broken_quadratic      Phi(x,t)=x+t^2; deliberately violates the group law
CatalogSystem catalog_get(const std::string& name, const Params& params = {});

std::vector<std::string> catalog_names();

} // namespace dynkit

#endif
