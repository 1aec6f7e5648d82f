#pragma once

#include <array>
#include <cmath>
#include <initializer_list>

#include "ecov/error.hpp"

namespace ecov {

/// Dimensions are small and bounded (analysis lives in R^n, 2 <= n <= 8), so
/// vectors are fixed-capacity value types with no heap traffic.
inline constexpr int kMaxDim = 8;

class Vec {
public:
    Vec() = default;

    explicit Vec(int n, double fill = 0.0) : n_(n) {
        check_dim(n);
        for (int i = 0; i < n; ++i) v_[i] = fill;
    }

    Vec(std::initializer_list<double> xs) : n_(static_cast<int>(xs.size())) {
        check_dim(n_);
        int i = 0;
        for (double x : xs) v_[i++] = x;
    }

    int size() const { return n_; }

    double operator[](int i) const { return v_[i]; }
    double& operator[](int i) { return v_[i]; }

    Vec& operator+=(const Vec& o) {
        check_same(o);
        for (int i = 0; i < n_; ++i) v_[i] += o.v_[i];
        return *this;
    }
    Vec& operator-=(const Vec& o) {
        check_same(o);
        for (int i = 0; i < n_; ++i) v_[i] -= o.v_[i];
        return *this;
    }
    Vec& operator*=(double s) {
        for (int i = 0; i < n_; ++i) v_[i] *= s;
        return *this;
    }

    friend Vec operator+(Vec a, const Vec& b) { return a += b; }
    friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
    friend Vec operator*(double s, Vec a) { return a *= s; }
    friend Vec operator*(Vec a, double s) { return a *= s; }

    friend bool operator==(const Vec& a, const Vec& b) {
        if (a.n_ != b.n_) return false;
        for (int i = 0; i < a.n_; ++i)
            if (a.v_[i] != b.v_[i]) return false;
        return true;
    }

    double dot(const Vec& o) const {
        check_same(o);
        double s = 0.0;
        for (int i = 0; i < n_; ++i) s += v_[i] * o.v_[i];
        return s;
    }

    double norm2() const { return dot(*this); }
    double norm() const { return std::sqrt(norm2()); }

    double norm_inf() const {
        double m = 0.0;
        for (int i = 0; i < n_; ++i) m = std::max(m, std::abs(v_[i]));
        return m;
    }

    bool finite() const {
        for (int i = 0; i < n_; ++i)
            if (!std::isfinite(v_[i])) return false;
        return true;
    }

    static void check_dim(int n) {
        if (n < 1 || n > kMaxDim)
            throw contract_error("vector dimension must be in [1, 8]");
    }

private:
    void check_same(const Vec& o) const {
        if (n_ != o.n_) throw contract_error("vector dimension mismatch");
    }

private:
    std::array<double, kMaxDim> v_{};
    int n_ = 0;
};

} // namespace ecov
