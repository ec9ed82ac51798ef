#pragma once

#include <complex>
#include <vector>

#include "rci/matrix.hpp"

/**
 * @file spectral.hpp
 * Dense eigenvalue, singular-value and Lyapunov kernels for small matrices
 * (dimension up to a few dozen; the indicator code uses at most 8x8 / 64x64).
 *
 * Everything here is a pure function of its arguments.
 */

namespace rci {

/// A RealMatrix that is square and symmetric to 1e-12 * (1 + max|M|).
class SymmetricMatrix {
public:
    SymmetricMatrix() = default;
    /// Throws DimensionError if not square, NumericError if asymmetric beyond tolerance.
    explicit SymmetricMatrix(RealMatrix m);

    /// Returns (m + m^T) / 2 without a tolerance check.
    static SymmetricMatrix symmetrize(const RealMatrix& m);

    [[nodiscard]] std::size_t dim() const noexcept { return m_.rows(); }
    [[nodiscard]] const RealMatrix& matrix() const noexcept { return m_; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return m_(i, j); }

    friend bool operator==(const SymmetricMatrix&, const SymmetricMatrix&) = default;

private:
    RealMatrix m_;
};

/// All eigenvalues of a square matrix, via Householder-Hessenberg reduction
/// followed by Francis double-shift QR. Order is unspecified.
std::vector<std::complex<double>> eigenvalues(const RealMatrix& a);

/// Real parts of all eigenvalues, sorted descending.
std::vector<double> eig_real_parts(const RealMatrix& a);

/// max Re(lambda).
double spectral_abscissa(const RealMatrix& a);

/// True iff every eigenvalue has real part strictly below -margin.
bool is_hurwitz(const RealMatrix& a, double margin = 0.0);

/// Eigenvalues of a symmetric matrix (cyclic Jacobi), ascending.
std::vector<double> symmetric_eigenvalues(const SymmetricMatrix& s);

double lambda_max(const SymmetricMatrix& s);
double lambda_min(const SymmetricMatrix& s);

/// All eigenvalues > 1e-10 * (1 + lambda_max).
bool is_positive_definite(const SymmetricMatrix& s);

/// Singular values (one-sided Jacobi), descending. Works for any shape.
std::vector<double> singular_values(const RealMatrix& a);

/// Largest singular value, i.e. the induced 2-norm.
double spectral_norm(const RealMatrix& a);

/// Smallest singular value of a square matrix.
double min_singular_value(const RealMatrix& a);

/// lambda_max / lambda_min of a positive definite matrix.
/// Throws DefinitenessError when the matrix is not positive definite.
double condition_number(const SymmetricMatrix& q);

/// Solves a x = b with partial-pivot LU. Throws NumericError if a is singular.
Vec lu_solve(const RealMatrix& a, std::span<const double> b);

/// Matrix inverse via LU. Throws NumericError if singular.
RealMatrix inverse(const RealMatrix& a);

/**
 * Solves A^T Q + Q A + C = 0 for symmetric Q.
 *
 * Uses the Kronecker form (I (x) A^T + A^T (x) I) vec(Q) = -vec(C) and a dense
 * LU solve, then symmetrizes. A must be Hurwitz (StabilityError otherwise) and
 * C positive semidefinite (DefinitenessError otherwise).
 */
SymmetricMatrix solve_lyapunov(const RealMatrix& a, const SymmetricMatrix& c);

/// ||A^T Q + Q A + C||_2.
double lyapunov_residual(const RealMatrix& a, const SymmetricMatrix& q, const SymmetricMatrix& c);

} // namespace rci
