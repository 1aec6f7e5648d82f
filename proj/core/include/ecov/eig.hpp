#pragma once

#include "ecov/mat.hpp"

namespace ecov {

/// Eigendecomposition of a symmetric matrix: S = V diag(values) V^T with
/// `values` sorted descending and eigenvectors in the columns of `vectors`.
struct SymEig {
    Vec values;
    Mat vectors;
};

/// Cyclic Jacobi. Input must be symmetric to relative 1e-12 (contract error
/// otherwise). Converges when the off-diagonal Frobenius mass falls below
/// 1e-14 * ||S||_F; throws numeric_error if 100 sweeps do not get there.
SymEig sym_eig(const Mat& s);

/// Operator 2-norm: sqrt(lambda_max(A^T A)). Defined for any finite square A.
double spectral_norm(const Mat& a);

} // namespace ecov
