#include "gnewton/subproblem.hpp"

#include "gnewton/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gnewton {

namespace {

void check_shapes(const LinearizedInclusion& p) {
  require_apply_dim(p.A, p.x, "solve_step");
  require_same_dim(p.g, p.x, "solve_step");
  if (p.T.dimension() != p.x.size()) throw DimensionMismatch("solve_step: operator T has wrong dimension");
  require_finite(p.g, "solve_step g");
  require_finite(p.x, "solve_step x");
  require_finite(p.A, "solve_step A");
}

// c = lambda_min(sym A); the step is only well defined for c > 0.
double strong_monotonicity(const LinearOperator& a) {
  const double c = min_eigenvalue_sym(symmetrize(a));
  const double scale = std::max(1.0, operator_norm(a));
  if (!(c > kEigTol * scale)) {
    throw NotStronglyMonotone("solve_step: lambda_min(sym F'(x)) = " + std::to_string(c) +
                              " is not positive");
  }
  return c;
}

} // namespace

StepResult solve_step_direct(const LinearizedInclusion& p) {
  check_shapes(p);
  if (!p.T.is_zero()) throw DomainError("solve_step_direct: only valid for T = 0");
  strong_monotonicity(p.A);
  StepResult out;
  out.y = p.x + solve_dense(p.A, -p.g);
  return out;
}

StepResult solve_step_forward_backward(const LinearizedInclusion& p, const StepOptions& opt, const Vector* start) {
  check_shapes(p);
  if (!(opt.tol > 0.0)) throw DomainError("solve_step: tol must be > 0");
  const double c = strong_monotonicity(p.A);
  const double L = operator_norm(p.A);
  StepResult out;
  out.beta = c / (L * L);
  out.contraction = std::sqrt(std::max(0.0, 1.0 - (c * c) / (L * L)));

  const double scale = std::min(1.0, out.beta);
  Vector y = start != nullptr ? *start : p.x;
  require_same_dim(y, p.x, "solve_step start");
  for (std::size_t it = 1; it <= opt.max_iter; ++it) {
    const Vector forward = y - out.beta * (p.g + p.A * (y - p.x));
    Vector next = resolvent(p.T, out.beta, forward);
    const double res = (next - y).norm() / scale;
    out.history.push_back(res);
    y = std::move(next);
    if (res <= opt.tol) {
      out.y = std::move(y);
      out.iterations = it;
      out.residual = res;
      return out;
    }
  }
  throw MaxIterExceeded("solve_step: forward-backward did not reach tol " + std::to_string(opt.tol) + " in " +
                        std::to_string(opt.max_iter) + " iterations");
}

Vector solve_step(const LinearizedInclusion& p, const StepOptions& opt) {
  if (p.T.is_zero()) return solve_step_direct(p).y;
  return solve_step_forward_backward(p, opt).y;
}

double natural_residual(const Vector& F_val, const Vector& x, const MonotoneOperator& T, double lambda) {
  require_same_dim(F_val, x, "natural_residual");
  if (!(lambda > 0.0)) throw DomainError("natural_residual: lambda must be > 0");
  return (x - resolvent(T, lambda, x - lambda * F_val)).norm() / lambda;
}

} // namespace gnewton
