#pragma once

#include <functional>
#include <vector>

#include "ecov/mat.hpp"

namespace ecov {

/// Extrema of |A u + d| over the closed unit ball |u| <= 1.
/// `lo` is attained in the interior iff the ellipsoid body A(B) + d covers a
/// point of norm |lo| there; `hi` is always attained on |u| = 1.
struct NormExtrema {
    double lo = 0.0;
    double hi = 0.0;
    Vec arg_lo; // u achieving lo
    Vec arg_hi; // u achieving hi
};

/// Computes min/max of |A u + d| over |u| <= 1 to ~1e-10 relative accuracy.
/// A may be singular or zero; d any finite vector of matching dimension.
NormExtrema norm_extrema_on_ball(const Mat& a, const Vec& d);

/// Root of a monotone continuous f on [lo, hi] with f(lo), f(hi) of opposite
/// sign (contract error otherwise). Plain bisection to |hi-lo| <= xtol.
double bisect_monotone(const std::function<double(double)>& f, double lo, double hi,
                       double xtol);

/// Strict root bracket for sum_i a_i x^{b_i} = 1 (all a_i, b_i > 0):
/// lower = min_i d^{-1/b_i} * upper, upper = min_i a_i^{-1/b_i}, d = #terms.
struct PowerSumBracket {
    double lower = 0.0;
    double upper = 0.0;
};
PowerSumBracket power_sum_bracket(const std::vector<double>& a,
                                  const std::vector<double>& b);

/// Unique positive root of sum_i a_i x^{b_i} = 1, safeguarded Newton inside
/// the bracket above, to residual |f(x) - 1| <= 1e-12.
double solve_power_sum(const std::vector<double>& a, const std::vector<double>& b);

} // namespace ecov
