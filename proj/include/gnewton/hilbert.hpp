#pragma once

// Finite-dimensional inner-product space primitives and the positive-operator
// calculus used throughout the solver: symmetric parts, a cyclic Jacobi
// eigensolver, inverse norms of positive operators and Banach's lemma bound.

#include <Eigen/Dense>

#include <cstddef>
#include <string_view>

namespace gnewton {

using Vector = Eigen::VectorXd;
using LinearOperator = Eigen::MatrixXd;

/// Off-diagonal Frobenius tolerance for the Jacobi sweeps, relative to max(1, ||S||_F).
inline constexpr double kEigTol = 1e-12;
inline constexpr int kEigMaxSweeps = 100;

void require_finite(const Vector& v, std::string_view what);
void require_finite(const LinearOperator& a, std::string_view what);
void require_same_dim(const Vector& a, const Vector& b, std::string_view what);
void require_square(const LinearOperator& a, std::string_view what);
void require_apply_dim(const LinearOperator& a, const Vector& v, std::string_view what);

double inner(const Vector& a, const Vector& b);
double norm(const Vector& v);

/// (A + A^T) / 2, mirror entries averaged so the result is exactly symmetric.
LinearOperator symmetrize(const LinearOperator& a);

/// All eigenvalues of a symmetric matrix in ascending order (cyclic Jacobi).
Vector eigenvalues_sym(const LinearOperator& s);

double min_eigenvalue_sym(const LinearOperator& s);
double max_eigenvalue_sym(const LinearOperator& s);

bool is_positive(const LinearOperator& s, double tol);

/// ||S^{-1}|| = 1 / lambda_min(S) for symmetric positive definite S.
/// Throws SingularOperator when lambda_min <= kEigTol.
double inverse_norm(const LinearOperator& s);

/// Largest singular value, sqrt(lambda_max(A^T A)).
double operator_norm(const LinearOperator& a);

/// 1 / (1 - ||B - I||); throws NotContractive when ||B - I|| >= 1.
double banach_inverse_bound(const LinearOperator& b);

/// Dense solve A x = b with partial-pivot LU. Throws SingularOperator on a zero pivot.
Vector solve_dense(const LinearOperator& a, const Vector& b);

LinearOperator inverse_dense(const LinearOperator& a);

} // namespace gnewton
