#include "gnewton/monotone.hpp"

#include "gnewton/errors.hpp"
#include "gnewton/sweep.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace gnewton {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

} // namespace

MonotoneOperator MonotoneOperator::zero(Eigen::Index n) {
  if (n < 1) throw DimensionMismatch("MonotoneOperator::zero: dimension must be >= 1");
  return {n, ZeroOperator{}};
}

MonotoneOperator MonotoneOperator::box(Vector lower, Vector upper) {
  require_same_dim(lower, upper, "MonotoneOperator::box");
  if (lower.size() < 1) throw DimensionMismatch("MonotoneOperator::box: dimension must be >= 1");
  for (Eigen::Index i = 0; i < lower.size(); ++i) {
    if (std::isnan(lower(i)) || std::isnan(upper(i))) {
      throw InvalidProblem("MonotoneOperator::box: NaN bound");
    }
    if (lower(i) > upper(i)) throw InvalidProblem("MonotoneOperator::box: lower > upper");
    if (lower(i) == INFINITY || upper(i) == -INFINITY) {
      throw InvalidProblem("MonotoneOperator::box: empty box component");
    }
  }
  const Eigen::Index n = lower.size();
  return {n, NormalConeBox{std::move(lower), std::move(upper)}};
}

MonotoneOperator MonotoneOperator::nonnegative_orthant(Eigen::Index n) {
  return box(Vector::Zero(n), Vector::Constant(n, INFINITY));
}

MonotoneOperator MonotoneOperator::l1(Eigen::Index n, double weight) {
  if (n < 1) throw DimensionMismatch("MonotoneOperator::l1: dimension must be >= 1");
  if (!(weight >= 0.0) || !std::isfinite(weight)) {
    throw InvalidProblem("MonotoneOperator::l1: weight must be finite and >= 0");
  }
  return {n, L1Subdifferential{weight}};
}

MonotoneOperator MonotoneOperator::custom(Eigen::Index n, CustomResolvent r) {
  if (n < 1) throw DimensionMismatch("MonotoneOperator::custom: dimension must be >= 1");
  if (!r.resolvent) throw InvalidProblem("MonotoneOperator::custom: empty resolvent");
  return {n, std::move(r)};
}

std::string MonotoneOperator::name() const {
  return std::visit(Overloaded{[](const ZeroOperator&) { return std::string("zero"); },
                               [](const NormalConeBox&) { return std::string("normal_cone_box"); },
                               [](const L1Subdifferential&) { return std::string("l1_subdifferential"); },
                               [](const CustomResolvent& c) { return "custom:" + c.name; }},
                    kind_);
}

Vector resolvent(const MonotoneOperator& t, double lambda, const Vector& z) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("resolvent: lambda must be > 0");
  if (z.size() != t.dimension()) {
    throw DimensionMismatch("resolvent: operator dimension " + std::to_string(t.dimension()) +
                            " vs vector " + std::to_string(z.size()));
  }
  require_finite(z, "resolvent");
  return std::visit(
      Overloaded{[&](const ZeroOperator&) -> Vector { return z; },
                 [&](const NormalConeBox& b) -> Vector {
                   // Projection onto the box; infinite bounds never bind.
                   Vector y = z;
                   for (Eigen::Index i = 0; i < y.size(); ++i) {
                     if (y(i) < b.lower(i)) y(i) = b.lower(i);
                     if (y(i) > b.upper(i)) y(i) = b.upper(i);
                   }
                   return y;
                 },
                 [&](const L1Subdifferential& l) -> Vector {
                   const double shrink = lambda * l.weight;
                   Vector y(z.size());
                   for (Eigen::Index i = 0; i < z.size(); ++i) {
                     const double mag = std::max(std::abs(z(i)) - shrink, 0.0);
                     y(i) = std::copysign(mag, z(i));
                     if (mag == 0.0) y(i) = 0.0;
                   }
                   return y;
                 },
                 [&](const CustomResolvent& c) -> Vector {
                   Vector y = c.resolvent(lambda, z);
                   require_same_dim(y, z, "resolvent(custom)");
                   require_finite(y, "resolvent(custom)");
                   return y;
                 }},
      t.kind());
}

GraphPoint graph_sample(const MonotoneOperator& t, double lambda, const Vector& z) {
  Vector y = resolvent(t, lambda, z);
  Vector u = (z - y) / lambda;
  return {std::move(y), std::move(u)};
}

bool check_monotone(const MonotoneOperator& t, std::size_t samples, std::uint64_t seed) {
  if (samples < 2) throw DomainError("check_monotone: need at least 2 samples");
  static constexpr std::array<double, 3> kLambdas{0.1, 1.0, 10.0};
  std::vector<GraphPoint> pts;
  pts.reserve(samples);
  for (std::size_t s = 0; s < samples; ++s) {
    auto rng = sample_rng(seed, s);
    std::uniform_real_distribution<double> coord(-5.0, 5.0);
    Vector z(t.dimension());
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = coord(rng);
    const double lambda = kLambdas[rng() % kLambdas.size()];
    pts.push_back(graph_sample(t, lambda, z));
  }
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double gap = (pts[i].value - pts[j].value).dot(pts[i].point - pts[j].point);
      if (gap < -1e-12) return false;
    }
  }
  return true;
}

} // namespace gnewton
