#include "gnewton/hilbert.hpp"

#include "gnewton/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gnewton {

namespace {

std::string label(std::string_view what) { return std::string(what); }

void require_symmetric(const LinearOperator& s, std::string_view what) {
  require_square(s, what);
  const double scale = std::max(1.0, s.norm());
  if ((s - s.transpose()).norm() > 1e-12 * scale) {
    throw DomainError(label(what) + ": operator is not symmetric");
  }
}

double off_diagonal_norm(const LinearOperator& a) {
  double sum = 0.0;
  const auto n = a.rows();
  for (Eigen::Index p = 0; p < n; ++p) {
    for (Eigen::Index q = 0; q < n; ++q) {
      if (p != q) sum += a(p, q) * a(p, q);
    }
  }
  return std::sqrt(sum);
}

// One Jacobi rotation zeroing a(p, q); a stays symmetric.
void rotate(LinearOperator& a, Eigen::Index p, Eigen::Index q) {
  const double apq = a(p, q);
  if (apq == 0.0) return;
  const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const auto n = a.rows();
  for (Eigen::Index k = 0; k < n; ++k) {
    if (k == p || k == q) continue;
    const double akp = a(k, p);
    const double akq = a(k, q);
    a(k, p) = a(p, k) = c * akp - s * akq;
    a(k, q) = a(q, k) = s * akp + c * akq;
  }
  a(p, p) -= t * apq;
  a(q, q) += t * apq;
  a(p, q) = a(q, p) = 0.0;
}

} // namespace

void require_finite(const Vector& v, std::string_view what) {
  if (!v.allFinite()) throw NonFiniteValue(label(what) + ": vector has non-finite entries");
}

void require_finite(const LinearOperator& a, std::string_view what) {
  if (!a.allFinite()) throw NonFiniteValue(label(what) + ": operator has non-finite entries");
}

void require_same_dim(const Vector& a, const Vector& b, std::string_view what) {
  if (a.size() != b.size()) {
    throw DimensionMismatch(label(what) + ": dimension " + std::to_string(a.size()) + " vs " +
                            std::to_string(b.size()));
  }
}

void require_square(const LinearOperator& a, std::string_view what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw DimensionMismatch(label(what) + ": operator is " + std::to_string(a.rows()) + "x" +
                            std::to_string(a.cols()) + ", expected non-empty square");
  }
}

void require_apply_dim(const LinearOperator& a, const Vector& v, std::string_view what) {
  require_square(a, what);
  if (a.cols() != v.size()) {
    throw DimensionMismatch(label(what) + ": operator of size " + std::to_string(a.cols()) +
                            " applied to vector of size " + std::to_string(v.size()));
  }
}

double inner(const Vector& a, const Vector& b) {
  require_same_dim(a, b, "inner");
  return a.dot(b);
}

double norm(const Vector& v) { return v.norm(); }

LinearOperator symmetrize(const LinearOperator& a) {
  require_square(a, "symmetrize");
  const auto n = a.rows();
  LinearOperator s(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    s(i, i) = a(i, i);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double m = 0.5 * (a(i, j) + a(j, i));
      s(i, j) = m;
      s(j, i) = m;
    }
  }
  return s;
}

Vector eigenvalues_sym(const LinearOperator& s) {
  require_symmetric(s, "eigenvalues_sym");
  require_finite(s, "eigenvalues_sym");
  LinearOperator a = symmetrize(s);
  const auto n = a.rows();
  const double threshold = kEigTol * std::max(1.0, a.norm());
  int sweep = 0;
  while (off_diagonal_norm(a) > threshold) {
    if (sweep++ == kEigMaxSweeps) {
      throw EigenNonConvergence("Jacobi eigensolve did not converge in " + std::to_string(kEigMaxSweeps) +
                                " sweeps");
    }
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) rotate(a, p, q);
    }
  }
  Vector eig = a.diagonal();
  std::sort(eig.begin(), eig.end());
  return eig;
}

double min_eigenvalue_sym(const LinearOperator& s) { return eigenvalues_sym(s)(0); }

double max_eigenvalue_sym(const LinearOperator& s) {
  const Vector eig = eigenvalues_sym(s);
  return eig(eig.size() - 1);
}

bool is_positive(const LinearOperator& s, double tol) { return min_eigenvalue_sym(s) >= -tol; }

double inverse_norm(const LinearOperator& s) {
  const double lmin = min_eigenvalue_sym(s);
  if (lmin <= kEigTol) {
    throw SingularOperator("inverse_norm: smallest eigenvalue " + std::to_string(lmin) +
                           " is not positive");
  }
  return 1.0 / lmin;
}

double operator_norm(const LinearOperator& a) {
  require_square(a, "operator_norm");
  const LinearOperator gram = symmetrize(a.transpose() * a);
  return std::sqrt(std::max(0.0, max_eigenvalue_sym(gram)));
}

double banach_inverse_bound(const LinearOperator& b) {
  require_square(b, "banach_inverse_bound");
  const double dist = operator_norm(b - LinearOperator::Identity(b.rows(), b.cols()));
  if (dist >= 1.0) {
    throw NotContractive("banach_inverse_bound: ||B - I|| = " + std::to_string(dist) + " >= 1");
  }
  return 1.0 / (1.0 - dist);
}

Vector solve_dense(const LinearOperator& a, const Vector& b) {
  require_apply_dim(a, b, "solve_dense");
  Eigen::PartialPivLU<LinearOperator> lu(a);
  if (!(lu.rcond() > 1e-15)) throw SingularOperator("solve_dense: matrix is numerically singular");
  return lu.solve(b);
}

LinearOperator inverse_dense(const LinearOperator& a) {
  require_square(a, "inverse_dense");
  Eigen::PartialPivLU<LinearOperator> lu(a);
  if (!(lu.rcond() > 1e-15)) throw SingularOperator("inverse_dense: matrix is numerically singular");
  return lu.inverse();
}

} // namespace gnewton
