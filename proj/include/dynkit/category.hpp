#ifndef DYNKIT_CATEGORY_HPP
#define DYNKIT_CATEGORY_HPP

#include <functional>
#include <string>
#include <vector>

#include "dynkit/report.hpp"
#include "dynkit/section.hpp"
#include "dynkit/suspension.hpp"
#include "dynkit/systems.hpp"

namespace dynkit {

/// Morphism of map dynamical systems: h with h o f = g o h.
struct MapMorphism {
    MapSystem source, target;
    PointFn h;
    std::vector<Expression> h_exprs; // empty when h is a builtin callable
    std::string name;
};

using TimeReparam = std::function<double(const Point&, double)>;

/// Weak morphism (h, tau) between flows with sections:
/// h(Phi(x,t)) = Psi(h(x), tau(x,t)), tau(x,0)=0, tau(x,.) increasing.
/// A flow morphism is the special case tau(x,t) = t.
struct WeakMorphism {
    GlobalSectionSystem source, target;
    PointFn h;
    TimeReparam tau;
    std::string name;

    static WeakMorphism identity(const GlobalSectionSystem& sys);
};

MapMorphism map_identity(const MapSystem& m);
MapMorphism map_compose(const MapMorphism& h2, const MapMorphism& h1);

// ---- law checkers ----

CheckReport map_morphism_check(const MapMorphism& mm, int samples, double tol, std::uint64_t seed);

/// Intertwining law plus tau(x,0)=0 and strict monotonicity of tau(x,.) on a
/// 64-point grid spanning [-10,10].
CheckReport weak_morphism_check(const WeakMorphism& w,
                                const std::vector<std::pair<Point, double>>& samples, double tol);
CheckReport weak_morphism_check(const WeakMorphism& w, int samples, double time_range, double tol,
                                std::uint64_t seed);

/// (h2,tau2) o (h1,tau1) with tau(x,t) = tau2(h1(x), tau1(x,t)).
WeakMorphism weak_compose(const WeakMorphism& w2, const WeakMorphism& w1);

/// on_section(target, h(x)) <=> on_section(source, x) over on/near/off
/// section samples, i.e. S = h^-1(S').
CheckReport section_preservation_check(const WeakMorphism& w, int samples, std::uint64_t seed);

/// |T_Psi(h(x)) - tau(x, T_Phi(x))| over section samples.
CheckReport period_correspondence_check(const WeakMorphism& w, int samples, double tol,
                                        std::uint64_t seed);

// ---- the comparison data of the adjunction ----

/// Signed integral of the return-time step function along the P-orbit of x:
/// cell [i,i+1) has height T(P^i(x)). Piecewise linear, strictly increasing.
double R_integral(const GlobalSectionSystem& sys, const Point& x, double a);

/// Inverse of a -> R_integral(sys,x,a): the a with R_integral(sys,x,a) = v.
double R_integral_inverse(const GlobalSectionSystem& sys, const Point& x, double v);

/// k([x,t]) = Phi(x, t*T(x)); a bijection from the mapping torus of P(sys)
/// onto the phase space.
Point k_eval(const GlobalSectionSystem& sys, const TorusPoint& p);

/// Inverse of k: locate the last section crossing before y, return
/// [x, s*/T(x)].
TorusPoint k_inverse(const GlobalSectionSystem& sys, const Point& y);

/// tau([x,t],s) = R_integral(x, s+t) - t*T(x); the canonical time
/// reparametrization paired with k.
double tau_eval(const GlobalSectionSystem& sys, const TorusPoint& p, double s);

/// Unit of the adjunction: x -> [x,0].
TorusPoint unit_l(const MapSystem& m, const Point& x);

/// The canonical (k,tau) packaged as a weak morphism from the suspension of
/// P(sys) to sys. Operates on packed torus points.
WeakMorphism canonical_counit(const GlobalSectionSystem& sys);

/// The suspension functor on morphisms: h-bar([x,t]) = [h(x), t], a flow
/// morphism between the suspensions of source and target.
WeakMorphism suspend_morphism(const MapMorphism& mm, const Tolerances& tol = {});

/// The Poincare functor on morphisms: the restriction h|_S packaged as a map
/// morphism between the Poincare systems. Gated on section preservation and
/// the conjugacy residual.
MapMorphism poincare_functor_on_morphism(const WeakMorphism& w, int samples, double tol,
                                         std::uint64_t seed);

// ---- rate preservation and the adjunction laws ----

/// Defining equation of rate-preserving morphisms, sampled over
/// (x in S1, t in [0,1), s).
CheckReport rate_preserving_check(const WeakMorphism& w, int samples, double tol,
                                  std::uint64_t seed);

/// Scaling law sigma(x, t*T(x)) = t*sigma(x, T(x)).
CheckReport rate_scaling_check(const WeakMorphism& w, int samples, double tol, std::uint64_t seed);

/// The composite of two rate-preserving morphisms is rate-preserving.
CheckReport rate_composition_check(const WeakMorphism& w2, const WeakMorphism& w1, int samples,
                                   double tol, std::uint64_t seed);

/// k_{Sigma f} o Sigma(l) = id on the mapping torus (space part) and the
/// associated time part equals s.
CheckReport triangle_identity_1(const MapSystem& m, int samples, double tol, std::uint64_t seed);

/// P(k,tau) o l = id on the section: d(k([x,0]), x) over section samples.
CheckReport triangle_identity_2(const GlobalSectionSystem& sys, int samples, double tol,
                                std::uint64_t seed);

/// Both naturality squares of (k,tau) for a section-preserving morphism.
CheckReport naturality_check_k(const WeakMorphism& w, int samples, double tol, std::uint64_t seed);

/// Naturality square of l for a map morphism.
CheckReport naturality_check_l(const MapMorphism& mm, int samples, double tol, std::uint64_t seed);

/// Conjugate an invertible weak morphism by the k isomorphisms:
/// k2 o Sigma(P(w)) o k1^-1, which is rate-preserving and agrees with w on
/// the source section. Gates on the weak-morphism and section checks.
WeakMorphism promote_to_rate_preserving(const WeakMorphism& w, int gate_samples, double tol,
                                        std::uint64_t seed);

} // namespace dynkit

#endif
