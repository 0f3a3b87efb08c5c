#include "helpers.hpp"

#include "gnewton/errors.hpp"
#include "gnewton/hilbert.hpp"
#include "gnewton/lemmas.hpp"
#include "gnewton/sweep.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <doctest.h>

#include <cmath>
#include <limits>

using namespace gnewton;
using testing::mat;
using testing::vec;

namespace {

LinearOperator random_matrix(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> g(0.0, 1.0);
  LinearOperator a(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) a(i, j) = g(rng);
  }
  return a;
}

} // namespace

TEST_SUITE("hilbert_core") {

TEST_CASE("symmetrize examples") {
  CHECK(symmetrize(mat({{0, 1}, {0, 0}})) == mat({{0, 0.5}, {0.5, 0}}));
  CHECK(symmetrize(LinearOperator::Identity(3, 3)) == LinearOperator::Identity(3, 3));
  CHECK(symmetrize(mat({{1, 2}, {0, 1}})) == mat({{1, 1}, {1, 1}}));
  CHECK_THROWS_AS(symmetrize(LinearOperator::Zero(2, 3)), DimensionMismatch);
}

TEST_CASE("symmetrize is exactly symmetric, idempotent, linear and preserves the quadratic form") {
  for (std::uint64_t s = 0; s < 50; ++s) {
    auto rng = sample_rng(11, s);
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(s % 7);
    const LinearOperator a = random_matrix(rng, n);
    const LinearOperator b = random_matrix(rng, n);
    const LinearOperator sa = symmetrize(a);
    CHECK(sa == sa.transpose());
    CHECK(symmetrize(sa) == sa);
    CHECK((symmetrize(2.0 * a + b) - (2.0 * sa + symmetrize(b))).norm() <= 1e-13 * (1.0 + a.norm() + b.norm()));
    const Vector x = random_unit_vector(rng, n) * 3.0;
    CHECK(std::abs(inner(a * x, x) - inner(sa * x, x)) <= 1e-12 * (1.0 + a.norm()) * x.squaredNorm());
  }
}

TEST_CASE("min_eigenvalue_sym examples") {
  CHECK(min_eigenvalue_sym(mat({{2, 0}, {0, 4}})) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(min_eigenvalue_sym(mat({{2, 1}, {1, 2}})) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(min_eigenvalue_sym(mat({{0}})) == 0.0);
  CHECK_THROWS_AS(min_eigenvalue_sym(mat({{1, 2}, {0, 1}})), DomainError);
}

TEST_CASE("Jacobi eigenvalues match Eigen's self-adjoint solver") {
  for (std::uint64_t s = 0; s < 200; ++s) {
    auto rng = sample_rng(5, s);
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(s % 8);
    const LinearOperator sym = symmetrize(random_matrix(rng, n) * (1.0 + static_cast<double>(s % 5)));
    const Vector mine = eigenvalues_sym(sym);
    const Vector oracle = Eigen::SelfAdjointEigenSolver<LinearOperator>(sym, Eigen::EigenvaluesOnly).eigenvalues();
    REQUIRE(mine.size() == n);
    CHECK((mine - oracle).cwiseAbs().maxCoeff() <= 1e-11 * std::max(1.0, sym.norm()));
    for (Eigen::Index i = 1; i < n; ++i) CHECK(mine(i - 1) <= mine(i));
  }
}

TEST_CASE("is_positive examples") {
  CHECK(is_positive(LinearOperator::Identity(2, 2), 0.0));
  CHECK_FALSE(is_positive(mat({{1, 0}, {0, -1}}), 1e-12));
  CHECK(is_positive(mat({{2, 1}, {1, 2}}), 0.0));
}

TEST_CASE("inverse_norm examples") {
  CHECK(inverse_norm(mat({{2, 0}, {0, 4}})) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(inverse_norm(LinearOperator::Identity(3, 3)) == 1.0);
  CHECK(inverse_norm(mat({{2, 1}, {1, 2}})) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(inverse_norm(mat({{1, 0}, {0, 0}})), SingularOperator);
  CHECK_THROWS_AS(inverse_norm(mat({{1, 0}, {0, -1}})), SingularOperator);
}

TEST_CASE("operator_norm examples and SVD oracle") {
  CHECK(operator_norm(mat({{3, 0}, {0, -5}})) == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(operator_norm(LinearOperator::Identity(4, 4)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(operator_norm(mat({{0, 2}, {0, 0}})) == doctest::Approx(2.0).epsilon(1e-14));
  for (std::uint64_t s = 0; s < 100; ++s) {
    auto rng = sample_rng(17, s);
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(s % 8);
    const LinearOperator a = random_matrix(rng, n);
    const double oracle = Eigen::JacobiSVD<LinearOperator>(a).singularValues()(0);
    CHECK(operator_norm(a) == doctest::Approx(oracle).epsilon(1e-10));
  }
}

TEST_CASE("operator_norm(S^2) = operator_norm(S)^2 for positive S") {
  for (std::uint64_t s = 0; s < 100; ++s) {
    auto rng = sample_rng(23, s);
    const LinearOperator spd = random_spd(rng, 1 + static_cast<Eigen::Index>(s % 8), 0.01, 10.0);
    const double n1 = operator_norm(spd);
    CHECK(operator_norm(spd * spd) == doctest::Approx(n1 * n1).epsilon(1e-10));
  }
}

TEST_CASE("banach_inverse_bound examples") {
  CHECK(banach_inverse_bound(LinearOperator::Identity(2, 2)) == 1.0);
  CHECK(banach_inverse_bound(mat({{0.5, 0}, {0, 1}})) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK_THROWS_AS(banach_inverse_bound(mat({{2}})), NotContractive);
}

TEST_CASE("Banach and adjoint bounds hold on random operators") {
  for (Eigen::Index n : {1, 3, 6}) {
    CHECK(sweep_banach_bound(n, 500, 3).max_violation <= 1e-10);
    CHECK(sweep_adjoint_bound(n, 500, 3).max_violation <= 1e-10);
  }
}

TEST_CASE("dimension and finiteness checks are hard errors") {
  CHECK_THROWS_AS(inner(vec({1, 2}), vec({1, 2, 3})), DimensionMismatch);
  CHECK_THROWS_AS(require_finite(vec({1, std::numeric_limits<double>::quiet_NaN()}), "v"), NonFiniteValue);
  CHECK_THROWS_AS(operator_norm(mat({{1, std::numeric_limits<double>::infinity()}, {0, 1}})), NonFiniteValue);
  CHECK_THROWS_AS(require_apply_dim(LinearOperator::Identity(2, 2), vec({1, 2, 3}), "A"), DimensionMismatch);
  CHECK(norm(vec({3, 4})) == 5.0);
}

TEST_CASE("dense solves") {
  const LinearOperator a = mat({{4, 1}, {2, 3}});
  const Vector b = vec({1, 2});
  CHECK((a * solve_dense(a, b) - b).norm() <= 1e-14);
  CHECK((a * inverse_dense(a) - LinearOperator::Identity(2, 2)).norm() <= 1e-14);
  CHECK_THROWS_AS(solve_dense(mat({{1, 1}, {1, 1}}), b), SingularOperator);
}

}
