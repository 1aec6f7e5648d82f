#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "ecov/cover.hpp"
#include "ecov/report.hpp"

namespace ecov {

enum class Symmetry {
    exact, // rho(x,y) == rho(y,x)
    quasi  // rho(x,y) <= C * rho(y,x) on the documented sampling region
};

/// A quasi-distance oracle. eval(x, y) treats x as the ball center: the ball
/// B(x, r) is {y : eval(x, y) < r}. Geometry hooks are optional closed forms;
/// certifiers fall back to generic bisection / Monte Carlo when they are
/// absent.
struct QuasiDistance {
    std::string name;
    int dim = 2;
    Symmetry symmetry = Symmetry::exact;
    double quasi_symmetry_bound = 1.0; // C above, when symmetry == quasi

    std::function<double(const Vec&, const Vec&)> eval;

    /// Axis-aligned half-widths of a box certain to contain B(x, r).
    std::function<Vec(const Vec&, double)> ball_box;
    /// Maximal centered ellipsoid inscribed in B(x, r), when the ball shape
    /// is known exactly (rectangles, Euclidean balls).
    std::function<Ellipsoid(const Vec&, double)> inscribed_ellipse;
    /// |B(x, r)| in closed form, when exact.
    std::function<double(const Vec&, double)> exact_ball_volume;
};

/// Smallest volume of a cover ellipsoid centered at x that contains y:
/// bisection on the scale t of the membership indicator y in theta_{x,t},
/// which is monotone for covers nested in t. Returns the volume on the
/// membership side of the crossing; exactly 0 when x == y. The scale is
/// resolved to t_tol (default 5e-9, about 4e-9 relative in volume; coarser
/// values trade accuracy for fewer cover evaluations during searches).
/// Scales are confined to [-60, 80]; a bracket that would leave this range
/// throws numeric_error.
double rho_one_sided(const Cover& cover, const Vec& x, const Vec& y,
                     double t_tol = 5e-9);

/// min(rho_one_sided(x,y), rho_one_sided(y,x)); symmetric by construction.
double rho_induced(const Cover& cover, const Vec& x, const Vec& y,
                   double t_tol = 5e-9);

/// Wraps a cover's induced distance as a QuasiDistance. The cover is copied
/// into the closure. Ball boxes come from cover.max_extent when present.
QuasiDistance induced_metric(const Cover& cover);

/// The induced metric of the isotropic cover with its closed forms attached:
/// rho = omega_n |x-y|^n, balls are Euclidean balls of volume exactly r.
QuasiDistance isotropic_induced_metric(int n);

/// Piecewise closed form for the planar pointwise-variable cover distance,
/// with the intermediate quantities exposed for reporting and debugging.
///   case 1:  |x-y| >= 1  or  |x2| > |x-y|^{2/3}         -> pi |x-y|^2
///   case 2:  |x-y| < 1  and  |x2| <= phi(x,y)           -> pi phi^2,
///            phi = 2^{-3/4} [ d1^2 + sqrt(d1^4 + 4 d2^2) ]^{3/4}
///   case 3:  otherwise -> pi z^-3 where z > 0 solves a z^5 + b z = 1 with
///            a = d1^2 x2^2, b = d2^2 / x2^2
/// Ties at the case boundaries dispatch to the earlier case. max_form is the
/// two-term comparison max{ |d1|^{6/5} |x2|^{6/5}, d2^6 |x2|^-6 } reported
/// alongside the case-3 solver value (they agree within a factor of 8).
struct Theta0RhoDetail {
    int case_id = 0;
    double value = 0.0;
    double phi = 0.0;      // case 2 only
    double z = 0.0;        // case 3 only
    double max_form = 0.0; // case 3 only
};
Theta0RhoDetail rho_theta0_detail(const Vec& x, const Vec& y);
double rho_theta0(const Vec& x, const Vec& y);

/// Flag-type distance on the plane whose balls are the rectangles
/// |y1-x1| < r, |y2-x2| < max(r^{k+1}, |x1|^k r):
///   rho_k(x, y) = max{ |d1|, min{ |d2|^{1/(k+1)}, |d2| / |x1|^k } }
/// with the min collapsing to |d2|^{1/(k+1)} when x1 == 0 and k >= 1.
double rho_nsw(int k, const Vec& x, const Vec& y);

QuasiDistance theta0_metric();
QuasiDistance nsw_metric(int k);
QuasiDistance supnorm_metric(int n);
QuasiDistance euclidean_metric(int n);

struct BallVolumeOptions {
    std::uint64_t seed = 0;
    std::uint64_t points = 100000;
    int workers = 1;
    /// Overrides the metric's ball_box hook when set.
    std::optional<Vec> box_half_widths;
};

struct BallVolumeEstimate {
    double volume = 0.0;
    double ci_half_width = 0.0; // 99% two-sided binomial, in volume units
    double box_volume = 0.0;
    std::uint64_t hits = 0;
    std::uint64_t points = 0;
};

/// Hit-or-miss Monte Carlo estimate of |B(x, r)| over the bounding box.
/// Requires a box (hook or override); throws contract_error without one.
BallVolumeEstimate ball_volume_mc(const QuasiDistance& d, const Vec& x, double r,
                                  const BallVolumeOptions& opt);

/// exact_ball_volume when the metric has it, Monte Carlo otherwise.
double ball_volume(const QuasiDistance& d, const Vec& x, double r,
                   const BallVolumeOptions& opt);

struct TripleSampleOptions {
    std::uint64_t seed = 0;
    std::uint64_t samples = 10000;
    double box_half = 4.0;
    int workers = 1;
};

/// kappa_hat = max over sampled triples of rho(x,y) / (rho(x,z) + rho(z,y)),
/// z the intermediate point; mixes uniform, collinear, and near-endpoint
/// placements since collinear triples are extremal for the shipped metrics.
CertReport triangle_constant(const QuasiDistance& d, const TripleSampleOptions& opt);

/// Distance axioms on samples: zero iff equal (1e-12), positivity, and the
/// declared symmetry mode. Quasi-symmetric metrics are sampled away from
/// their degenerate locus (|x1|, |y1| >= 0.1 for the flag-type family).
CertReport metric_axioms(const QuasiDistance& d, const TripleSampleOptions& opt);

struct AhlforsOptions {
    std::uint64_t seed = 0;
    std::uint64_t centers = 48; // sampled centers; the origin is always probed
    double box_half = 4.0;
    double r_log2_lo = -12.0;
    double r_log2_hi = 6.0;
    int radii = 10; // geometric radius ladder across [2^lo, 2^hi]
    std::uint64_t mc_points = 20000;
    int workers = 1;
    /// |d log2(|B|/r) / d log2 r| above this flags divergence.
    double slope_tol = 0.3;
};

/// Measures |B(x,r)| / r over a radius ladder at sampled centers. Passing
/// yields c1_hat with (1/c1_hat) r <= |B| <= c1_hat r on all samples; a
/// center whose ratio drifts in r beyond slope_tol produces a divergence
/// witness (center, fitted slope) and fails the report.
CertReport ahlfors_certify(const QuasiDistance& d, const AhlforsOptions& opt);

} // namespace ecov
