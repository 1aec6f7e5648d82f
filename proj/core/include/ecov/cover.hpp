#pragma once

#include <functional>
#include <string>

#include "ecov/ellipsoid.hpp"

namespace ecov {

/// Declared constants of a continuous ellipsoid cover:
///   volume:  a1 * 2^-t <= |theta_{x,t}| <= a2 * 2^-t
///   shape:   for intersecting theta_{x,t}, theta_{y,t+s} (s >= 0)
///            a3 * 2^{-a4 s} <= 1/||M_{y,t+s}^{-1} M_{x,t}||   and
///            ||M_{x,t}^{-1} M_{y,t+s}|| <= a5 * 2^{-a6 s}.
struct CoverParams {
    int dim = 2;
    double a1 = 1.0, a2 = 1.0;
    double a3 = 1.0, a4 = 1.0, a5 = 1.0, a6 = 1.0;
};

void validate_params(const CoverParams& p);

/// A continuous ellipsoid cover: eval(x, t) is the ellipsoid theta_{x,t}
/// centered at x at scale t (volume comparable to 2^-t).
struct Cover {
    std::string name;
    int dim = 2;
    CoverParams params;
    bool nested_in_t = true; // t' <= t implies theta_{x,t} subset theta_{x,t'}
    std::function<Ellipsoid(const Vec&, double)> eval;
    /// Upper bound on any semi-axis of a cover ellipsoid of the given volume;
    /// used to box metric balls for Monte Carlo. Optional.
    std::function<double(double)> max_extent;
};

/// Validated evaluation: checks dimensions and that t is finite.
Ellipsoid cover_eval(const Cover& cover, const Vec& x, double t);

/// Balls of volume exactly 2^-t. a1 = a2 = 1, a4 = a6 = 1/n.
Cover isotropic_cover(int n);

/// theta_{x,t} = diag(2^{-e_1 t}, ..., 2^{-e_n t})(B^n) + x with e_i > 0
/// summing to 1; volume is exactly omega_n 2^-t.
Cover diagonal_cover(const Vec& exponents);

/// The pointwise-variable planar cover: axis-aligned ellipses of area
/// pi 2^-t whose eccentricity grows as the center approaches the x1-axis.
Cover theta0_cover();

/// Regimes of the theta0 semi-axis table at center ordinate x2, scale t.
enum class Theta0Regime {
    large_scale, // t <= 0: ball of radius 2^{-t/2}
    far_field,   // t > 0, |x2| >  2^{-t/3}: same ball
    transition,  // t > 0, 2^{-t/2} < |x2| <= 2^{-t/3}
    near_axis    // t > 0, |x2| <= 2^{-t/2}
};
Theta0Regime theta0_regime(double x2, double t);
void theta0_semi_axes(double x2, double t, double* s1, double* s2);

/// Cover of ellipses inscribed in the flag-type rectangles
/// |y1-x1| < delta, |y2-x2| < max(delta^{k+1}, |x1|^k delta), with delta =
/// r(t) chosen so the ellipse area is exactly 2^-t. k = 0 is isotropic.
Cover nsw_cover(int k);

/// r(t) for nsw_cover: closed form per branch, bisection fallback.
/// branch 1: delta >= |x1| (area pi delta^{k+2}); branch 2: delta <= |x1|.
struct NswDelta {
    double delta = 0.0;
    int branch = 0; // 1, 2, or 3 for the bisection fallback
};
NswDelta nsw_delta(int k, double x1, double t);

/// theta0 with volumes halved on the half-plane x1 > 0. Deliberately broken
/// fixture for exercising validator failure paths and exit codes.
Cover corrupted_theta0_cover();

} // namespace ecov
