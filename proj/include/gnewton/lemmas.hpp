#pragma once

// Sampled checks of the auxiliary inequalities the local convergence proof is
// built from. Each sweep reports the largest violation lhs - rhs, scaled by
// 1 / (1 + |rhs|); a correct implementation on a valid problem stays <= 0 up to
// rounding.

#include "gnewton/majorant.hpp"
#include "gnewton/newton.hpp"
#include "gnewton/sweep.hpp"

#include <cstdint>

namespace gnewton {

struct LemmaSweep {
  double max_violation = 0.0;
  std::size_t worst_index = 0;
  std::size_t samples = 0;
};

/// ||B^{-1}|| <= 1 / (1 - ||B - I||) for random B = I + E with ||E|| < 1.
LemmaSweep sweep_banach_bound(Eigen::Index n, std::size_t samples, std::uint64_t seed,
                              Execution exec = Execution::Parallel);

/// <S x, x> >= ||x||^2 / ||S^{-1}|| for random symmetric positive definite S.
LemmaSweep sweep_adjoint_bound(Eigen::Index n, std::size_t samples, std::uint64_t seed,
                               Execution exec = Execution::Parallel);

/// ||sym F'(x*)^{-1}|| ||E_F(x, x*)|| <= e_f(||x* - x||, 0) for x in B(x*, min(kappa, R)).
LemmaSweep sweep_linearization_bound(const ProblemInstance& p, const MajorantFunction& f, std::size_t samples,
                                     std::uint64_t seed, Execution exec = Execution::Parallel);

/// For ||x - x*|| < min(kappa, nu): sym F'(x) is positive definite and
/// ||sym F'(x)^{-1}|| <= ||sym F'(x*)^{-1}|| / |f'(||x - x*||)|.
/// A lost positivity counts as an infinite violation.
LemmaSweep sweep_inverse_norm_bound(const ProblemInstance& p, const MajorantFunction& f, std::size_t samples,
                                    std::uint64_t seed, Execution exec = Execution::Parallel);

/// For ||x - x*|| <= t < r: ||N(x) - x*|| <= (|n_f(t)| / t^2) ||x - x*||^2 with N
/// the Newton step map; t is drawn in [||x - x*||, r).
LemmaSweep sweep_newton_step_contraction(const ProblemInstance& p, const MajorantFunction& f, std::size_t samples,
                                         std::uint64_t seed, Execution exec = Execution::Parallel);

/// Newton step map N_{F+T}(x): solution y of 0 in F(x) + F'(x)(y - x) + T(y).
Vector newton_step(const ProblemInstance& p, const Vector& x, double inner_tol = 1e-12);

} // namespace gnewton
