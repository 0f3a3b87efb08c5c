#pragma once

// Maximal monotone operators T represented through their resolvents
// J_{lambda T} = (I + lambda T)^{-1}.

#include "gnewton/hilbert.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <variant>

namespace gnewton {

struct ZeroOperator {};

/// Normal cone of the box [lower, upper]; +-infinity entries mark unbounded sides.
struct NormalConeBox {
  Vector lower;
  Vector upper;
};

/// Subdifferential of weight * ||x||_1.
struct L1Subdifferential {
  double weight = 0.0;
};

/// Extension point: any maximal monotone operator given by its resolvent.
/// The callable must be pure and thread-safe.
struct CustomResolvent {
  std::string name;
  std::function<Vector(double lambda, const Vector& z)> resolvent;
};

class MonotoneOperator {
public:
  using Kind = std::variant<ZeroOperator, NormalConeBox, L1Subdifferential, CustomResolvent>;

  static MonotoneOperator zero(Eigen::Index n);
  static MonotoneOperator box(Vector lower, Vector upper);
  /// N_{R^n_+}; the inclusion becomes a complementarity problem.
  static MonotoneOperator nonnegative_orthant(Eigen::Index n);
  static MonotoneOperator l1(Eigen::Index n, double weight);
  static MonotoneOperator custom(Eigen::Index n, CustomResolvent r);

  Eigen::Index dimension() const { return dim_; }
  const Kind& kind() const { return kind_; }
  bool is_zero() const { return std::holds_alternative<ZeroOperator>(kind_); }
  std::string name() const;

private:
  MonotoneOperator(Eigen::Index n, Kind k) : dim_(n), kind_(std::move(k)) {}

  Eigen::Index dim_;
  Kind kind_;
};

/// The unique y with z - y in lambda * T(y).
Vector resolvent(const MonotoneOperator& t, double lambda, const Vector& z);

struct GraphPoint {
  Vector point;
  Vector value; ///< element of T(point)
};

/// (y, (z - y) / lambda) with y = resolvent(t, lambda, z).
GraphPoint graph_sample(const MonotoneOperator& t, double lambda, const Vector& z);

/// Samples graph points at seeded pseudorandom z (uniform in [-5, 5]^n, lambda
/// drawn from {0.1, 1, 10}) and checks <u - v, x - y> >= -1e-12 on all pairs.
bool check_monotone(const MonotoneOperator& t, std::size_t samples, std::uint64_t seed);

} // namespace gnewton
