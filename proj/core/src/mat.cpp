#include "ecov/mat.hpp"

#include <cmath>

#include "ecov/eig.hpp"

namespace ecov {

Mat Mat::identity(int n) {
    Mat m(n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Mat Mat::diag(const Vec& d) {
    Mat m(d.size());
    for (int i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

Vec Mat::diagonal() const {
    Vec d(n_);
    for (int i = 0; i < n_; ++i) d[i] = (*this)(i, i);
    return d;
}

Mat Mat::transpose() const {
    Mat t(n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Mat& Mat::operator+=(const Mat& o) {
    for (int i = 0; i < n_ * n_; ++i) m_[i] += o.m_[i];
    return *this;
}

Mat& Mat::operator-=(const Mat& o) {
    for (int i = 0; i < n_ * n_; ++i) m_[i] -= o.m_[i];
    return *this;
}

Mat& Mat::operator*=(double s) {
    for (int i = 0; i < n_ * n_; ++i) m_[i] *= s;
    return *this;
}

Vec Mat::operator*(const Vec& x) const {
    if (x.size() != n_) throw contract_error("matrix-vector dimension mismatch");
    Vec y(n_);
    for (int i = 0; i < n_; ++i) {
        double s = 0.0;
        for (int j = 0; j < n_; ++j) s += (*this)(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

Mat Mat::operator*(const Mat& o) const {
    if (o.n_ != n_) throw contract_error("matrix-matrix dimension mismatch");
    Mat r(n_);
    for (int i = 0; i < n_; ++i)
        for (int k = 0; k < n_; ++k) {
            double a = (*this)(i, k);
            if (a == 0.0) continue;
            for (int j = 0; j < n_; ++j) r(i, j) += a * o(k, j);
        }
    return r;
}

double Mat::frobenius() const {
    double s = 0.0;
    for (int i = 0; i < n_ * n_; ++i) s += m_[i] * m_[i];
    return std::sqrt(s);
}

double Mat::max_abs() const {
    double m = 0.0;
    for (int i = 0; i < n_ * n_; ++i) m = std::max(m, std::abs(m_[i]));
    return m;
}

bool Mat::finite() const {
    for (int i = 0; i < n_ * n_; ++i)
        if (!std::isfinite(m_[i])) return false;
    return true;
}

Lu::Lu(const Mat& a) : lu_(a) {
    const int n = a.size();
    det_ = 1.0;
    for (int i = 0; i < n; ++i) piv_[i] = i;
    for (int col = 0; col < n; ++col) {
        int p = col;
        double best = std::abs(lu_(col, col));
        for (int r = col + 1; r < n; ++r) {
            double v = std::abs(lu_(r, col));
            if (v > best) {
                best = v;
                p = r;
            }
        }
        if (p != col) {
            for (int j = 0; j < n; ++j) std::swap(lu_(p, j), lu_(col, j));
            std::swap(piv_[p], piv_[col]);
            det_ = -det_;
        }
        const double pivot = lu_(col, col);
        det_ *= pivot;
        if (pivot == 0.0) {
            singular_ = true;
            continue;
        }
        for (int r = col + 1; r < n; ++r) {
            double f = lu_(r, col) / pivot;
            lu_(r, col) = f;
            for (int j = col + 1; j < n; ++j) lu_(r, j) -= f * lu_(col, j);
        }
    }
}

Vec Lu::solve(const Vec& b) const {
    if (singular_) throw numeric_error("Lu::solve: singular matrix");
    const int n = lu_.size();
    if (b.size() != n) throw contract_error("Lu::solve: dimension mismatch");
    Vec y(n);
    for (int i = 0; i < n; ++i) {
        double s = b[piv_[i]];
        for (int j = 0; j < i; ++j) s -= lu_(i, j) * y[j];
        y[i] = s;
    }
    Vec x(n);
    for (int i = n - 1; i >= 0; --i) {
        double s = y[i];
        for (int j = i + 1; j < n; ++j) s -= lu_(i, j) * x[j];
        x[i] = s / lu_(i, i);
    }
    return x;
}

double det(const Mat& a) { return Lu(a).det(); }

Mat inverse(const Mat& a, double floor_rel) {
    const int n = a.size();
    if (!a.finite()) throw contract_error("inverse: non-finite matrix");
    const double nrm = spectral_norm(a);
    const double d = det(a);
    if (std::abs(d) < floor_rel * std::pow(nrm, n))
        throw contract_error("inverse: |det| below nonsingularity floor");
    Lu lu(a);
    Mat inv(n);
    for (int j = 0; j < n; ++j) {
        Vec e(n);
        e[j] = 1.0;
        Vec col = lu.solve(e);
        for (int i = 0; i < n; ++i) inv(i, j) = col[i];
    }
    return inv;
}

} // namespace ecov
