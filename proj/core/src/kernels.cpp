#include "ecov/kernels.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "ecov/eig.hpp"
#include "ecov/error.hpp"

namespace ecov {

namespace {

// ---------------------------------------------------------------------------
// Extremizing |A u + d|^2 = u^T B u + 2 w~^T u + |d|^2 over |u| <= 1, with
// B = A^T A. In the eigenbasis of B (B = V diag(lambda) V^T, lambda
// descending, w = V^T A^T d) the stationarity conditions on the sphere read
//
//   max:  (mu I - diag(lambda)) v = w,  mu >= lambda_1,
//   min:  (diag(lambda) + nu I) v = -w, nu >= 0,
//
// and |v| = 1 becomes the secular equation
//
//   psi(m) = sum_i w_i^2 / (m - lambda_i)^2 = 1   (max; m = mu > lambda_1)
//   psi(m) = sum_i w_i^2 / (lambda_i + m)^2 = 1   (min; m = nu > 0),
//
// both strictly decreasing in m on their bracket. The max root lies in
// (lambda_1, lambda_1 + |w|]; the hard case (w orthogonal to the top
// eigenspace and psi(lambda_1) <= 1) pins mu = lambda_1 with the norm
// deficit placed in the top eigenspace. The min is interior (least-squares
// point inside the ball) or has its root in (0, |w|]. Candidate points are
// evaluated directly through |A u + d|, so solver error enters the reported
// value only at second order.
// ---------------------------------------------------------------------------

struct SecularFn {
    const Vec& w;
    const Vec& lam;
    bool max_branch; // denominators m - lambda_i (max) vs lambda_i + m (min)

    double operator()(double m) const {
        double s = 0.0;
        for (int i = 0; i < w.size(); ++i) {
            double den = max_branch ? m - lam[i] : lam[i] + m;
            double q = w[i] / den;
            s += q * q;
        }
        return s;
    }

    double derivative(double m) const {
        double s = 0.0;
        for (int i = 0; i < w.size(); ++i) {
            double den = max_branch ? m - lam[i] : lam[i] + m;
            s += -2.0 * w[i] * w[i] / (den * den * den);
        }
        return s;
    }
};

// Root of psi(m) = 1 on [lo, hi] with psi(lo) >= 1 >= psi(hi); psi decreasing.
double solve_secular(const SecularFn& psi, double lo, double hi) {
    double m = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        double f = psi(m) - 1.0;
        if (std::abs(f) < 1e-14) return m; // test before moving m off the root
        if (f > 0.0)
            lo = m;
        else
            hi = m;
        if (hi - lo <= 1e-14 * std::max(1.0, std::abs(hi))) break;
        double step_m = m - f / psi.derivative(m); // Newton; psi' < 0 on bracket
        if (std::isfinite(step_m) && step_m > lo && step_m < hi)
            m = step_m;
        else
            m = 0.5 * (lo + hi);
    }
    return 0.5 * (lo + hi);
}

Vec normalized_or(const Vec& v, const Vec& fallback) {
    double nr = v.norm();
    if (nr < 1e-300) return fallback;
    return v * (1.0 / nr);
}

} // namespace

NormExtrema norm_extrema_on_ball(const Mat& a, const Vec& d) {
    const int n = a.size();
    if (d.size() != n) throw contract_error("norm_extrema_on_ball: dimension mismatch");
    if (!a.finite() || !d.finite())
        throw contract_error("norm_extrema_on_ball: non-finite input");

    Mat b(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += a(k, i) * a(k, j);
            b(i, j) = s;
            b(j, i) = s;
        }
    const SymEig eig = sym_eig(b);
    Vec lam = eig.values;
    for (int i = 0; i < n; ++i) lam[i] = std::max(lam[i], 0.0);
    const Mat& v = eig.vectors;

    // w = V^T A^T d
    Vec atd(n);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += a(k, i) * d[k];
        atd[i] = s;
    }
    Vec w(n);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += v(k, i) * atd[k];
        w[i] = s;
    }

    const double lam1 = lam[0];
    const double wnorm = w.norm();
    auto value_at = [&](const Vec& coeffs) {
        Vec u(n);
        for (int r = 0; r < n; ++r) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += v(r, k) * coeffs[k];
            u[r] = s;
        }
        Vec au = a * u + d;
        return std::pair<double, Vec>(au.norm(), u);
    };

    NormExtrema out;

    // ---- max ----
    {
        Vec best_v(n);
        best_v[0] = 1.0; // top eigenvector fallback (w == 0 case)
        if (wnorm > 0.0) {
            const double top_tol = std::max(1e-13 * std::max(lam1, 1.0), 1e-300);
            double psi_rest = 0.0; // psi at lambda_1 over the non-top part
            double wtop2 = 0.0;
            for (int i = 0; i < n; ++i) {
                if (lam1 - lam[i] <= top_tol)
                    wtop2 += w[i] * w[i];
                else {
                    double q = w[i] / (lam1 - lam[i]);
                    psi_rest += q * q;
                }
            }
            SecularFn psi{w, lam, true};
            bool hard = false;
            if (wtop2 <= 1e-28 * wnorm * wnorm && psi_rest <= 1.0) hard = true;
            if (hard) {
                Vec vv(n);
                double used = 0.0;
                for (int i = 0; i < n; ++i) {
                    if (lam1 - lam[i] > top_tol) {
                        vv[i] = w[i] / (lam1 - lam[i]);
                        used += vv[i] * vv[i];
                    }
                }
                // Deposit the norm deficit in the top eigenspace; the objective
                // value does not depend on how it is spread there.
                vv[0] += std::sqrt(std::max(0.0, 1.0 - used));
                best_v = normalized_or(vv, best_v);
            } else {
                // Root in (lambda_1, lambda_1 + |w|]: walk the lower end up
                // until psi >= 1 to obtain a valid bracket.
                double hi = lam1 + wnorm;
                double gap = wnorm;
                double lo = hi;
                for (int it = 0; it < 200; ++it) {
                    gap *= 0.5;
                    lo = lam1 + gap;
                    if (psi(lo) >= 1.0 || gap < 1e-18 * std::max(lam1, 1.0)) break;
                }
                if (psi(lo) >= 1.0) {
                    double mu = solve_secular(psi, lo, hi);
                    Vec vv(n);
                    for (int i = 0; i < n; ++i) {
                        double den = mu - lam[i];
                        vv[i] = den > 0.0 ? w[i] / den : 0.0;
                    }
                    best_v = normalized_or(vv, best_v);
                } else {
                    // psi < 1 arbitrarily close to lambda_1: numerically the
                    // hard case; same construction as above.
                    Vec vv(n);
                    double used = 0.0;
                    for (int i = 0; i < n; ++i) {
                        if (lam1 - lam[i] > top_tol) {
                            vv[i] = w[i] / (lam1 - lam[i]);
                            used += vv[i] * vv[i];
                        }
                    }
                    vv[0] += std::sqrt(std::max(0.0, 1.0 - used));
                    best_v = normalized_or(vv, best_v);
                }
            }
        }
        auto [val, arg] = value_at(best_v);
        // The stationary point is checked against the +/- top eigenvector;
        // every candidate is feasible, so the max never overshoots.
        Vec e0(n);
        e0[0] = 1.0;
        auto [v1, a1] = value_at(e0);
        e0[0] = -1.0;
        auto [v2, a2] = value_at(e0);
        out.hi = val;
        out.arg_hi = arg;
        if (v1 > out.hi) {
            out.hi = v1;
            out.arg_hi = a1;
        }
        if (v2 > out.hi) {
            out.hi = v2;
            out.arg_hi = a2;
        }
    }

    // ---- min ----
    {
        const double w_tiny = 1e-15 * std::max(wnorm, std::sqrt(lam1) * d.norm()) + 1e-300;
        bool unbounded_dir = false;
        Vec v0(n);
        for (int i = 0; i < n; ++i) {
            if (lam[i] > 1e-14 * std::max(lam1, 1e-300))
                v0[i] = -w[i] / lam[i];
            else if (std::abs(w[i]) > w_tiny)
                unbounded_dir = true; // descent direction in the kernel of B
            else
                v0[i] = 0.0;
        }
        if (!unbounded_dir && v0.norm() <= 1.0) {
            auto [val, arg] = value_at(v0);
            out.lo = val;
            out.arg_lo = arg;
        } else {
            SecularFn psi{w, lam, false};
            double hi = std::max(wnorm, 1e-300);
            double gap = hi;
            double lo = hi;
            for (int it = 0; it < 200; ++it) {
                gap *= 0.5;
                lo = gap;
                if (psi(lo) >= 1.0 || gap < 1e-300) break;
            }
            double nu = solve_secular(psi, lo, hi);
            Vec vv(n);
            for (int i = 0; i < n; ++i) vv[i] = -w[i] / (lam[i] + nu);
            auto [val, arg] = value_at(normalized_or(vv, vv));
            out.lo = val;
            out.arg_lo = arg;
        }
        if (out.lo > out.hi) out.lo = out.hi; // guard rounding on degenerate input
    }
    return out;
}

double bisect_monotone(const std::function<double(double)>& f, double lo, double hi,
                       double xtol) {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
        throw contract_error("bisect_monotone: bad bracket");
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw contract_error("bisect_monotone: f(lo) and f(hi) have the same sign");
    for (int it = 0; it < 500 && hi - lo > xtol; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

PowerSumBracket power_sum_bracket(const std::vector<double>& a,
                                  const std::vector<double>& b) {
    if (a.empty() || a.size() != b.size())
        throw contract_error("power_sum_bracket: need matching nonempty coefficient lists");
    const double d = static_cast<double>(a.size());
    double upper = std::numeric_limits<double>::infinity();
    double shrink = 1.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!(a[i] > 0.0) || !(b[i] > 0.0))
            throw contract_error("power_sum_bracket: coefficients and exponents must be positive");
        upper = std::min(upper, std::pow(a[i], -1.0 / b[i]));
        shrink = std::min(shrink, std::pow(d, -1.0 / b[i]));
    }
    return {shrink * upper, upper};
}

double solve_power_sum(const std::vector<double>& a, const std::vector<double>& b) {
    PowerSumBracket br = power_sum_bracket(a, b);
    auto f = [&](double x) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * std::pow(x, b[i]);
        return s - 1.0;
    };
    auto fp = [&](double x) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i)
            s += a[i] * b[i] * std::pow(x, b[i] - 1.0);
        return s;
    };
    // f(lower) < 0 < f(upper) strictly for d >= 2; single-term sums sit at
    // the boundary, so widen by one ulp-ish factor to keep the bracket valid.
    double lo = br.lower * (1.0 - 1e-12);
    double hi = br.upper * (1.0 + 1e-12);
    double x = std::sqrt(lo * hi);
    for (int it = 0; it < 200; ++it) {
        double fx = f(x);
        if (std::abs(fx) <= 1e-12) break;
        if (fx < 0.0)
            lo = x;
        else
            hi = x;
        double nx = x - fx / fp(x);
        x = (std::isfinite(nx) && nx > lo && nx < hi) ? nx : 0.5 * (lo + hi);
    }
    // The analytic root is strictly interior to the bracket; when a dominant
    // term pushes the iterate onto an endpoint at double precision, step one
    // ulp back inside. The residual moves by O(1e-15), far within target.
    if (x >= br.upper)
        x = std::nextafter(br.upper, 0.0);
    else if (x <= br.lower)
        x = std::nextafter(br.lower, br.upper);
    if (std::abs(f(x)) > 1e-12)
        throw numeric_error("solve_power_sum: residual target not reached");
    return x;
}

} // namespace ecov
