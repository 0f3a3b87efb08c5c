#include "gnewton/smooth_map.hpp"

#include "gnewton/errors.hpp"
#include "gnewton/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace gnewton {

double polynomial_value(const std::vector<double>& coeffs, double x, int order) {
  if (order < 0) throw DomainError("polynomial_value: negative derivative order");
  double acc = 0.0;
  // Horner on the differentiated coefficients c[k] * k!/(k-order)!.
  for (std::size_t k = coeffs.size(); k-- > static_cast<std::size_t>(order);) {
    double c = coeffs[k];
    for (int j = 0; j < order; ++j) c *= static_cast<double>(k - static_cast<std::size_t>(j));
    acc = acc * x + c;
  }
  return acc;
}

void SeparablePolynomialSystem::validate() const {
  const Eigen::Index n = q.size();
  if (n < 1) throw InvalidProblem("polynomial system: dimension must be >= 1");
  if (M.rows() != n || M.cols() != n) {
    throw DimensionMismatch("polynomial system: M must be " + std::to_string(n) + "x" + std::to_string(n));
  }
  if (!terms.empty() && terms.size() != static_cast<std::size_t>(n)) {
    throw DimensionMismatch("polynomial system: need one term list per component");
  }
  require_finite(M, "polynomial system M");
  require_finite(q, "polynomial system q");
  for (const auto& t : terms) {
    for (double c : t) {
      if (!std::isfinite(c)) throw NonFiniteValue("polynomial system: non-finite coefficient");
    }
  }
}

SmoothMap::SmoothMap(Eigen::Index n, EvalFn eval, JacobianFn jacobian)
    : dim_(n), eval_(std::move(eval)), jacobian_(std::move(jacobian)) {
  if (n < 1) throw DimensionMismatch("SmoothMap: dimension must be >= 1");
  if (!eval_ || !jacobian_) throw InvalidProblem("SmoothMap: eval and jacobian are required");
}

SmoothMap SmoothMap::from_polynomial(SeparablePolynomialSystem sys) {
  sys.validate();
  auto eval = [sys](const Vector& u) {
    Vector out = sys.M * u + sys.q;
    if (!sys.terms.empty()) {
      for (Eigen::Index i = 0; i < u.size(); ++i) out(i) += polynomial_value(sys.terms[i], u(i));
    }
    return out;
  };
  auto jac = [sys](const Vector& u) {
    LinearOperator j = sys.M;
    if (!sys.terms.empty()) {
      for (Eigen::Index i = 0; i < u.size(); ++i) j(i, i) += polynomial_value(sys.terms[i], u(i), 1);
    }
    return j;
  };
  SmoothMap map(sys.dimension(), std::move(eval), std::move(jac));
  map.poly_ = std::move(sys);
  return map;
}

Vector SmoothMap::eval(const Vector& x) const {
  if (x.size() != dim_) throw DimensionMismatch("SmoothMap::eval: wrong input dimension");
  Vector y = eval_(x);
  if (y.size() != dim_) throw DimensionMismatch("SmoothMap::eval: wrong output dimension");
  require_finite(y, "SmoothMap::eval");
  return y;
}

LinearOperator SmoothMap::jacobian(const Vector& x) const {
  if (x.size() != dim_) throw DimensionMismatch("SmoothMap::jacobian: wrong input dimension");
  LinearOperator j = jacobian_(x);
  if (j.rows() != dim_ || j.cols() != dim_) throw DimensionMismatch("SmoothMap::jacobian: wrong shape");
  require_finite(j, "SmoothMap::jacobian");
  return j;
}

JacobianCheck check_jacobian(const SmoothMap& map, const Vector& center, double radius,
                             std::size_t samples, std::uint64_t seed, double tol) {
  JacobianCheck out;
  const double h = 1e-6;
  for (std::size_t s = 0; s < samples; ++s) {
    auto rng = sample_rng(seed, s);
    const Vector x = random_in_ball(rng, center, radius);
    const Vector e = random_unit_vector(rng, center.size());
    const Vector fd = (map.eval(x + h * e) - map.eval(x - h * e)) / (2.0 * h);
    const LinearOperator j = map.jacobian(x);
    const double err = (fd - j * e).norm() / (1.0 + operator_norm(j));
    out.max_error = std::max(out.max_error, err);
  }
  out.ok = out.max_error <= tol;
  return out;
}

} // namespace gnewton
