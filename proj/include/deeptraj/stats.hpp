#pragma once

#include <span>
#include <utility>

#include "deeptraj/matrix.hpp"

namespace deeptraj {

/// 1 / (1 + e^-x), evaluated without overflow for large |x|.
double logistic(double x) noexcept;

/// Sample Pearson correlation. Throws SizeMismatch / TooFewPoints on bad
/// lengths and ConstantVector if either input has zero variance.
double pearson_correlation(std::span<const double> a, std::span<const double> b);

struct MeanCovariance {
  Vector mean;
  Matrix covariance;  ///< unbiased, divisor n - 1
};

/// Mean and sample covariance of the rows of `points`.
MeanCovariance mean_and_covariance(const Matrix& points);

struct EigenDecomposition {
  Vector values;   ///< descending
  Matrix vectors;  ///< column j pairs with values[j]
};

/// Cyclic Jacobi eigen-solver for small symmetric matrices.
EigenDecomposition symmetric_eigen(const Matrix& symmetric, double tolerance = 1e-14,
                                   int max_sweeps = 100);

/// d x m matrix whose orthonormal columns are the leading eigenvectors of the
/// sample covariance of `points`. Throws DegenerateCovariance if fewer than m
/// eigenvalues are strictly positive.
Matrix top_principal_directions(const Matrix& points, std::size_t m);

/// Orthonormal basis of the column space of `a` (modified Gram-Schmidt).
/// Throws DegenerateCovariance if the columns are linearly dependent.
Matrix orthonormal_basis(const Matrix& a);

/// Largest principal angle (radians) between the column spaces of two
/// matrices with orthonormal columns.
double largest_principal_angle(const Matrix& basis_a, const Matrix& basis_b);

/// Lower Cholesky factor of a symmetric positive definite matrix, or an
/// empty matrix if the factorization breaks down.
Matrix cholesky(const Matrix& spd);

/// Solves (L L^T) x = b given the Cholesky factor L.
Vector cholesky_solve(const Matrix& lower, std::span<const double> b);

}  // namespace deeptraj
