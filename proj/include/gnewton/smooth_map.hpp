#pragma once

#include "gnewton/hilbert.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace gnewton {

/// c[0] + c[1] x + c[2] x^2 + ..., differentiated `order` times, evaluated at x.
double polynomial_value(const std::vector<double>& coeffs, double x, int order = 0);

/// F(u) = M u + q + (p_0(u_0), ..., p_{n-1}(u_{n-1})) with scalar polynomials p_i.
/// An empty term list means p_i = 0. Covers affine maps, scalar polynomials and
/// the componentwise-nonlinear systems used by the problem library.
struct SeparablePolynomialSystem {
  LinearOperator M;
  Vector q;
  std::vector<std::vector<double>> terms;

  Eigen::Index dimension() const { return q.size(); }
  void validate() const;
};

/// Continuously differentiable F with its Jacobian. Callables must be pure.
class SmoothMap {
public:
  using EvalFn = std::function<Vector(const Vector&)>;
  using JacobianFn = std::function<LinearOperator(const Vector&)>;

  SmoothMap(Eigen::Index n, EvalFn eval, JacobianFn jacobian);

  static SmoothMap from_polynomial(SeparablePolynomialSystem sys);

  Eigen::Index dimension() const { return dim_; }
  Vector eval(const Vector& x) const;
  LinearOperator jacobian(const Vector& x) const;

  /// Present when the map was built from a polynomial system; gives exact
  /// higher derivatives in one dimension.
  const std::optional<SeparablePolynomialSystem>& polynomial() const { return poly_; }

private:
  Eigen::Index dim_;
  EvalFn eval_;
  JacobianFn jacobian_;
  std::optional<SeparablePolynomialSystem> poly_;
};

struct JacobianCheck {
  double max_error = 0.0; ///< worst ||central difference - F'(x) e|| / (1 + ||F'(x)||)
  bool ok = true;
};

/// Central-difference consistency check of F' against F at seeded points of B[center, radius].
JacobianCheck check_jacobian(const SmoothMap& map, const Vector& center, double radius,
                             std::size_t samples, std::uint64_t seed, double tol = 1e-6);

} // namespace gnewton
