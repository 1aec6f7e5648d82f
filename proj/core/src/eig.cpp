#include "ecov/eig.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "ecov/error.hpp"

namespace ecov {

namespace {

double off_diag_frobenius(const Mat& a) {
    const int n = a.size();
    double s = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

} // namespace

SymEig sym_eig(const Mat& s) {
    const int n = s.size();
    if (n < 1) throw contract_error("sym_eig: empty matrix");
    if (!s.finite()) throw contract_error("sym_eig: non-finite entries");

    const double scale = std::max(s.max_abs(), 1e-300);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(s(i, j) - s(j, i)) > 1e-12 * scale)
                throw contract_error("sym_eig: input not symmetric");

    Mat a = s;
    // Symmetrize exactly so rotation updates preserve symmetry bit-for-bit.
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double m = 0.5 * (a(i, j) + a(j, i));
            a(i, j) = m;
            a(j, i) = m;
        }
    Mat v = Mat::identity(n);

    const double fro = a.frobenius();
    const double threshold = 1e-14 * std::max(fro, 1e-300);

    bool converged = off_diag_frobenius(a) <= threshold;
    for (int sweep = 0; sweep < 100 && !converged; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::abs(apq) <= 1e-2 * threshold / n) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;

                for (int k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - sn * akq;
                    a(k, q) = sn * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - sn * aqk;
                    a(q, k) = sn * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - sn * vkq;
                    v(k, q) = sn * vkp + c * vkq;
                }
            }
        }
        converged = off_diag_frobenius(a) <= threshold;
    }
    if (!converged) throw numeric_error("sym_eig: Jacobi sweep cap exceeded");

    std::array<int, kMaxDim> order{};
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.begin() + n,
              [&](int i, int j) { return a(i, i) > a(j, j) || (a(i, i) == a(j, j) && i < j); });

    SymEig out{Vec(n), Mat(n)};
    for (int k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]);
        for (int r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
    }
    return out;
}

double spectral_norm(const Mat& a) {
    if (!a.finite()) throw contract_error("spectral_norm: non-finite entries");
    const int n = a.size();
    Mat b(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += a(k, i) * a(k, j);
            b(i, j) = s;
            b(j, i) = s;
        }
    SymEig e = sym_eig(b);
    return std::sqrt(std::max(e.values[0], 0.0));
}

} // namespace ecov
