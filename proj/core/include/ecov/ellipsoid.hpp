#pragma once

#include "ecov/kernels.hpp"
#include "ecov/mat.hpp"
#include "ecov/rng.hpp"

namespace ecov {

/// Solid ellipsoid M(B^n) + c, the image of the closed Euclidean unit ball
/// under a nonsingular affine map.
struct Ellipsoid {
    Mat M;
    Vec c;

    int dim() const { return c.size(); }
};

/// Volume of the unit ball in R^n.
double unit_ball_volume(int n);

/// Validating constructor: dimensions must agree, entries be finite, and
/// |det M| >= 1e-12 * ||M||^n (nonsingularity floor).
Ellipsoid make_ellipsoid(const Mat& m, const Vec& c);

double volume(const Ellipsoid& e);

/// Dilation about the ellipsoid's own center: f * (E - c) + c, f > 0.
Ellipsoid dilate(const Ellipsoid& e, double f);

bool contains_point(const Ellipsoid& e, const Vec& p, double tol = 1e-12);

/// inner subset-of outer, both solid, to relative slack `tol`.
bool contains_ellipsoid(const Ellipsoid& inner, const Ellipsoid& outer,
                        double tol = 1e-10);

bool intersects(const Ellipsoid& a, const Ellipsoid& b, double tol = 1e-10);

/// Orthogonal U and positive diagonal D (descending) with U A(B^n) = D(B^n);
/// D carries the singular values of A.
struct DiagReduction {
    Mat U;
    Mat D;
};
DiagReduction diag_reduce(const Mat& a);

/// For eta subset-of xi (precondition, checked), certifies the reverse
/// inclusion xi subset-of factor * eta with factor = 2 |xi|/|eta| in general
/// and |xi|/|eta| when the centers coincide (within 1e-12). `tightest` is the
/// smallest passing dilation factor, found by bisection over the containment
/// predicate.
struct ReverseInclusion {
    bool pass = false;
    bool same_center = false;
    double volume_ratio = 0.0; // |xi| / |eta|
    double factor_bound = 0.0; // the certified factor
    double tightest = 0.0;
};
ReverseInclusion check_reverse_inclusion(const Ellipsoid& eta, const Ellipsoid& xi);

/// M = R diag(sigma) R' with independent random rotations and
/// log2(sigma_i) ~ U(log2_sigma_lo, log2_sigma_hi); center uniform in the box.
Ellipsoid random_ellipsoid(SeededRng& rng, int n, double log2_sigma_lo,
                           double log2_sigma_hi, const Vec& center_lo,
                           const Vec& center_hi);

/// Haar-ish random orthogonal matrix (Gram-Schmidt of a Gaussian sample).
Mat random_orthogonal(SeededRng& rng, int n);

} // namespace ecov
