#include "helpers.hpp"

#include "gnewton/errors.hpp"
#include "gnewton/subproblem.hpp"
#include "gnewton/sweep.hpp"

#include <doctest.h>

using namespace gnewton;
using testing::mat;
using testing::vec;

namespace {

// A with sym(A) SPD in [1, 10] plus a skew part of comparable size.
LinearizedInclusion random_inclusion(std::uint64_t seed, MonotoneOperator T) {
  auto rng = sample_rng(seed, 0);
  const Eigen::Index n = T.dimension();
  std::normal_distribution<double> g(0.0, 1.0);
  LinearOperator skew(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) skew(i, j) = g(rng);
  }
  skew = skew - skew.transpose().eval();
  const LinearOperator a = random_spd(rng, n, 1.0, 10.0) + skew;
  return {random_in_ball(rng, Vector::Zero(n), 3.0), a, random_in_ball(rng, Vector::Zero(n), 2.0), std::move(T)};
}

Vector fixed_point_gap(const LinearizedInclusion& p, const Vector& y, double beta) {
  return y - resolvent(p.T, beta, y - beta * (p.g + p.A * (y - p.x)));
}

} // namespace

TEST_SUITE("subproblem_solver") {

TEST_CASE("solve_step examples") {
  const LinearizedInclusion scalar{vec({0.44}), mat({{2.4}}), vec({1.2}), MonotoneOperator::zero(1)};
  CHECK(solve_step(scalar)(0) == doctest::Approx(1.2 - 0.44 / 2.4).epsilon(1e-15));
  CHECK(solve_step(scalar)(0) == doctest::Approx(1.0166667).epsilon(1e-7));

  const LinearizedInclusion vi{vec({1.5}), mat({{1.0}}), vec({0.5}), MonotoneOperator::nonnegative_orthant(1)};
  CHECK(std::abs(solve_step(vi)(0)) <= 1e-12);

  // g = 0 and 0 in T(x): x is the fixed point.
  const LinearizedInclusion still{vec({0, 0}), mat({{2, 1}, {-1, 3}}), vec({0, 0.5}),
                                  MonotoneOperator::box(vec({0, 0}), vec({1, 1}))};
  CHECK((solve_step(still) - still.x).norm() <= 1e-12);
}

TEST_CASE("natural_residual examples") {
  CHECK(natural_residual(vec({3, -4}), vec({7, 1}), MonotoneOperator::zero(2)) == 5.0);
  CHECK(natural_residual(vec({1}), vec({0}), MonotoneOperator::nonnegative_orthant(1)) == 0.0);
  CHECK(natural_residual(vec({0}), vec({2}), MonotoneOperator::zero(1)) == 0.0);
  CHECK_THROWS_AS(natural_residual(vec({0}), vec({2}), MonotoneOperator::zero(1), 0.0), DomainError);
}

TEST_CASE("forward-backward agrees with the direct solve for T = 0") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(seed % 8);
    auto p = random_inclusion(seed, MonotoneOperator::zero(n));
    const StepOptions opt{1e-12, 100'000};
    const auto fb = solve_step_forward_backward(p, opt);
    const auto direct = solve_step_direct(p);
    CHECK((fb.y - direct.y).norm() <= 10.0 * opt.tol);
  }
}

TEST_CASE("inclusion certificate and contraction on random instances") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(seed % 6);
    std::vector<MonotoneOperator> kinds{MonotoneOperator::nonnegative_orthant(n), MonotoneOperator::l1(n, 0.5),
                                        MonotoneOperator::box(Vector::Constant(n, -1.0), Vector::Constant(n, 1.0))};
    for (auto& T : kinds) {
      const auto p = random_inclusion(seed, T);
      const StepOptions opt{1e-12, 100'000};
      const auto r = solve_step_forward_backward(p, opt);
      CHECK(r.contraction < 1.0);
      CHECK(r.beta > 0.0);
      // Certificate: t_val = (z - y)/beta lies in T(y) by construction of the resolvent.
      const Vector z = r.y - r.beta * (p.g + p.A * (r.y - p.x));
      const auto gp = graph_sample(p.T, r.beta, z);
      const Vector cert = p.g + p.A * (gp.point - p.x) + gp.value;
      CHECK(cert.norm() <= opt.tol * (1.0 + operator_norm(p.A)));
      CHECK(fixed_point_gap(p, r.y, r.beta).norm() <= opt.tol);
      for (std::size_t k = 1; k < r.history.size() && r.history[k - 1] > 1e-9; ++k) {
        CHECK(r.history[k] <= (r.contraction + 1e-10) * r.history[k - 1] + 1e-15);
      }
      // Uniqueness: a different inner start lands on the same point.
      const Vector other = p.x + Vector::Constant(n, 5.0);
      const auto r2 = solve_step_forward_backward(p, opt, &other);
      CHECK((r.y - r2.y).norm() <= 10.0 * opt.tol / (min_eigenvalue_sym(symmetrize(p.A))));
    }
  }
}

TEST_CASE("errors") {
  const LinearizedInclusion indefinite{vec({1, 1}), mat({{1, 0}, {0, -1}}), vec({0, 0}),
                                       MonotoneOperator::nonnegative_orthant(2)};
  CHECK_THROWS_AS(solve_step(indefinite), NotStronglyMonotone);
  const LinearizedInclusion zero_sym{vec({1}), mat({{0}}), vec({0}), MonotoneOperator::zero(1)};
  CHECK_THROWS_AS(solve_step(zero_sym), NotStronglyMonotone);
  // Nearly skew A: contraction close to 1, so one iteration is not enough.
  const LinearizedInclusion slow{vec({-1, -1}), mat({{0.01, 1}, {-1, 0.01}}), vec({0, 0}),
                                 MonotoneOperator::nonnegative_orthant(2)};
  CHECK_THROWS_AS(solve_step(slow, StepOptions{1e-12, 1}), MaxIterExceeded);
  const LinearizedInclusion wrong{vec({1, 1}), mat({{1, 0}, {0, 1}}), vec({0, 0}), MonotoneOperator::zero(3)};
  CHECK_THROWS_AS(solve_step(wrong), DimensionMismatch);
  const LinearizedInclusion ok{vec({1}), mat({{1}}), vec({0}), MonotoneOperator::nonnegative_orthant(1)};
  CHECK_THROWS_AS(solve_step_direct(ok), DomainError);
}

}
