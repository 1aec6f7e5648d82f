#include "ecov/ellipsoid.hpp"

#include <cmath>

#include "ecov/eig.hpp"
#include "ecov/error.hpp"

namespace ecov {

double unit_ball_volume(int n) {
    Vec::check_dim(n);
    // omega_n = omega_{n-2} * 2 pi / n, omega_1 = 2, omega_2 = pi.
    const double pi = 3.14159265358979323846;
    double even = pi, odd = 2.0;
    if (n == 1) return odd;
    if (n == 2) return even;
    for (int k = 3; k <= n; ++k) {
        if (k % 2 == 0)
            even = even * 2.0 * pi / k;
        else
            odd = odd * 2.0 * pi / k;
    }
    return n % 2 == 0 ? even : odd;
}

Ellipsoid make_ellipsoid(const Mat& m, const Vec& c) {
    if (m.size() != c.size()) throw contract_error("make_ellipsoid: dimension mismatch");
    if (!m.finite() || !c.finite()) throw contract_error("make_ellipsoid: non-finite input");
    const double nrm = spectral_norm(m);
    if (std::abs(det(m)) < 1e-12 * std::pow(nrm, m.size()))
        throw contract_error("make_ellipsoid: matrix below nonsingularity floor");
    return Ellipsoid{m, c};
}

double volume(const Ellipsoid& e) {
    return std::abs(det(e.M)) * unit_ball_volume(e.dim());
}

Ellipsoid dilate(const Ellipsoid& e, double f) {
    if (!(f > 0.0) || !std::isfinite(f))
        throw contract_error("dilate: factor must be positive and finite");
    return Ellipsoid{e.M * f, e.c};
}

bool contains_point(const Ellipsoid& e, const Vec& p, double tol) {
    if (p.size() != e.dim()) throw contract_error("contains_point: dimension mismatch");
    Vec z = Lu(e.M).solve(p - e.c);
    return z.norm() <= 1.0 + tol;
}

namespace {

// Normalized coordinates of `inner` relative to `outer`: the map
// u |-> M_out^{-1}(M_in u + c_in - c_out) sends the unit ball onto the inner
// body expressed in the frame where the outer body is the unit ball.
NormExtrema relative_extrema(const Ellipsoid& inner, const Ellipsoid& outer) {
    const int n = inner.dim();
    Lu lu(outer.M);
    Vec dvec = lu.solve(inner.c - outer.c);
    Mat rel(n);
    for (int j = 0; j < n; ++j) {
        Vec col(n);
        for (int i = 0; i < n; ++i) col[i] = inner.M(i, j);
        Vec sol = lu.solve(col);
        for (int i = 0; i < n; ++i) rel(i, j) = sol[i];
    }
    return norm_extrema_on_ball(rel, dvec);
}

} // namespace

bool contains_ellipsoid(const Ellipsoid& inner, const Ellipsoid& outer, double tol) {
    if (inner.dim() != outer.dim())
        throw contract_error("contains_ellipsoid: dimension mismatch");
    return relative_extrema(inner, outer).hi <= 1.0 + tol;
}

bool intersects(const Ellipsoid& a, const Ellipsoid& b, double tol) {
    if (a.dim() != b.dim()) throw contract_error("intersects: dimension mismatch");
    return relative_extrema(b, a).lo <= 1.0 + tol;
}

DiagReduction diag_reduce(const Mat& a) {
    const int n = a.size();
    if (!a.finite()) throw contract_error("diag_reduce: non-finite input");
    const double nrm = spectral_norm(a);
    if (std::abs(det(a)) < 1e-12 * std::pow(nrm, n))
        throw contract_error("diag_reduce: matrix below nonsingularity floor");
    // A A^T = W diag(lambda) W^T; U = W^T maps A(B) onto diag(sqrt(lambda))(B).
    Mat aat(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += a(i, k) * a(j, k);
            aat(i, j) = s;
            aat(j, i) = s;
        }
    SymEig e = sym_eig(aat);
    Vec d(n);
    for (int i = 0; i < n; ++i) d[i] = std::sqrt(std::max(e.values[i], 0.0));
    return DiagReduction{e.vectors.transpose(), Mat::diag(d)};
}

ReverseInclusion check_reverse_inclusion(const Ellipsoid& eta, const Ellipsoid& xi) {
    if (!contains_ellipsoid(eta, xi))
        throw contract_error("check_reverse_inclusion: eta not contained in xi");
    ReverseInclusion out;
    out.volume_ratio = volume(xi) / volume(eta);
    const double center_scale = std::max({1.0, eta.c.norm(), xi.c.norm()});
    out.same_center = (eta.c - xi.c).norm() <= 1e-12 * center_scale;
    out.factor_bound = out.same_center ? out.volume_ratio : 2.0 * out.volume_ratio;
    out.pass = contains_ellipsoid(xi, dilate(eta, out.factor_bound));

    // Smallest passing factor via bisection on the same predicate.
    double hi = out.factor_bound;
    for (int it = 0; !contains_ellipsoid(xi, dilate(eta, hi)); ++it) { // only if pass failed
        if (it >= 200) throw numeric_error("check_reverse_inclusion: no enclosing factor");
        hi *= 2.0;
    }
    double lo = 1e-9;
    if (contains_ellipsoid(xi, dilate(eta, lo))) {
        out.tightest = lo;
    } else {
        for (int it = 0; it < 200 && hi - lo > 1e-9 * hi; ++it) {
            double mid = 0.5 * (lo + hi);
            if (contains_ellipsoid(xi, dilate(eta, mid)))
                hi = mid;
            else
                lo = mid;
        }
        out.tightest = hi;
    }
    return out;
}

Mat random_orthogonal(SeededRng& rng, int n) {
    Mat q(n);
    for (int j = 0; j < n; ++j) {
        Vec v(n);
        for (;;) {
            v = rng.normal_vec(n);
            // Two Gram-Schmidt passes for orthogonality at working precision.
            for (int pass = 0; pass < 2; ++pass)
                for (int k = 0; k < j; ++k) {
                    double proj = 0.0;
                    for (int i = 0; i < n; ++i) proj += q(i, k) * v[i];
                    for (int i = 0; i < n; ++i) v[i] -= proj * q(i, k);
                }
            if (v.norm() > 1e-8) break;
        }
        double nr = v.norm();
        for (int i = 0; i < n; ++i) q(i, j) = v[i] / nr;
    }
    return q;
}

Ellipsoid random_ellipsoid(SeededRng& rng, int n, double log2_sigma_lo,
                           double log2_sigma_hi, const Vec& center_lo,
                           const Vec& center_hi) {
    if (center_lo.size() != n || center_hi.size() != n)
        throw contract_error("random_ellipsoid: center box dimension mismatch");
    Mat r1 = random_orthogonal(rng, n);
    Mat r2 = random_orthogonal(rng, n);
    Vec sigma(n);
    for (int i = 0; i < n; ++i) sigma[i] = rng.exp2_uniform(log2_sigma_lo, log2_sigma_hi);
    Vec c = rng.in_box(center_lo, center_hi);
    return make_ellipsoid(r1 * Mat::diag(sigma) * r2, c);
}

} // namespace ecov
