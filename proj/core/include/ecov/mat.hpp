#pragma once

#include <array>

#include "ecov/vec.hpp"

namespace ecov {

/// Square n x n matrix, n <= 8, row-major, value semantics.
class Mat {
public:
    Mat() = default;

    explicit Mat(int n) : n_(n) { Vec::check_dim(n); }

    int size() const { return n_; }

    double operator()(int i, int j) const { return m_[i * n_ + j]; }
    double& operator()(int i, int j) { return m_[i * n_ + j]; }

    static Mat identity(int n);
    static Mat diag(const Vec& d);

    Vec diagonal() const;
    Mat transpose() const;

    Mat& operator+=(const Mat& o);
    Mat& operator-=(const Mat& o);
    Mat& operator*=(double s);

    friend Mat operator+(Mat a, const Mat& b) { return a += b; }
    friend Mat operator-(Mat a, const Mat& b) { return a -= b; }
    friend Mat operator*(double s, Mat a) { return a *= s; }
    friend Mat operator*(Mat a, double s) { return a *= s; }

    Vec operator*(const Vec& x) const;
    Mat operator*(const Mat& o) const;

    double frobenius() const;
    double max_abs() const;
    bool finite() const;

private:
    std::array<double, kMaxDim * kMaxDim> m_{};
    int n_ = 0;
};

/// LU factorization with partial pivoting; the workhorse behind det / solve /
/// inverse. Construction never throws: `singular()` reports rank deficiency
/// at working precision and det() is still exact-signed zero-ish.
class Lu {
public:
    explicit Lu(const Mat& a);

    double det() const { return det_; }
    bool singular() const { return singular_; }

    /// Solves A x = b. Throws numeric_error if the factorization is singular.
    Vec solve(const Vec& b) const;

private:
    Mat lu_;
    std::array<int, kMaxDim> piv_{};
    double det_ = 0.0;
    bool singular_ = false;
};

double det(const Mat& a);

/// Inverse of a well-conditioned-enough matrix. Enforces the nonsingularity
/// floor |det A| >= floor_rel * ||A||_2^n and throws contract_error below it.
Mat inverse(const Mat& a, double floor_rel = 1e-12);

} // namespace ecov
