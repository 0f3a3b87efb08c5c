#pragma once

#include "gnewton/hilbert.hpp"
#include "gnewton/monotone.hpp"

#include <cstddef>
#include <vector>

namespace gnewton {

/// 0 in g + A (y - x) + T(y): one step of Newton's method for F + T at x,
/// with g = F(x) and A = F'(x).
struct LinearizedInclusion {
  Vector g;
  LinearOperator A;
  Vector x;
  MonotoneOperator T;
};

struct StepOptions {
  double tol = 1e-12;
  std::size_t max_iter = 10'000;
};

struct StepResult {
  Vector y;
  std::size_t iterations = 0;
  double residual = 0.0;       ///< ||y_prev - y_next|| / min(beta, 1) at termination (0 for a direct solve)
  double beta = 0.0;           ///< forward-backward step c / L^2
  double contraction = 0.0;    ///< sqrt(1 - c^2 / L^2)
  std::vector<double> history; ///< forward-backward residuals, one per iteration
};

/// Solves the inclusion. T = Zero dispatches to a dense LU solve; every other
/// operator runs forward-backward splitting y <- J_{beta T}(y - beta (g + A (y - x)))
/// from y = x until ||y - J_{beta T}(...)|| / min(beta, 1) <= tol.
/// Throws NotStronglyMonotone when lambda_min(sym(A)) <= 0, MaxIterExceeded on the cap.
Vector solve_step(const LinearizedInclusion& p, const StepOptions& opt = {});

StepResult solve_step_direct(const LinearizedInclusion& p);
StepResult solve_step_forward_backward(const LinearizedInclusion& p, const StepOptions& opt = {},
                                       const Vector* start = nullptr);

/// ||x - J_{lambda T}(x - lambda F(x))|| / lambda; zero exactly at solutions of F + T \ni 0.
double natural_residual(const Vector& F_val, const Vector& x, const MonotoneOperator& T, double lambda = 1.0);

} // namespace gnewton
