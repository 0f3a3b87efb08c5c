#include "helpers.hpp"

#include "gnewton/errors.hpp"
#include "gnewton/newton.hpp"

#include <doctest.h>

#include <cmath>

using namespace gnewton;
using testing::vec;

TEST_SUITE("newton_driver") {

TEST_CASE("solve examples") {
  const auto quad = testing::builtin("scalar-quadratic");
  auto rep = solve(quad, vec({1.2}));
  CHECK(rep.status == SolveStatus::Converged);
  REQUIRE(rep.iterates.size() >= 3);
  CHECK(rep.iterates[1](0) == doctest::Approx(1.0166667).epsilon(1e-7));
  CHECK(rep.iterates[2](0) == doctest::Approx(1.0001366).epsilon(1e-7));
  CHECK(std::abs(rep.final_iterate()(0) - 1.0) <= 1e-12);
  CHECK(rep.residuals.back() <= 1e-12);

  const auto affine = testing::builtin("affine-ncp-1d");
  rep = solve(affine, vec({0.5}));
  CHECK(rep.status == SolveStatus::Converged);
  CHECK(rep.iterations() == 1);
  CHECK(std::abs(rep.final_iterate()(0)) <= 1e-12);
  CHECK(rep.residuals.back() <= 1e-12);

  rep = solve(quad, vec({1.0}));
  CHECK(rep.status == SolveStatus::Converged);
  CHECK(rep.iterations() == 0);
}

TEST_CASE("solve diagnostics and failures") {
  const auto quad = testing::builtin("scalar-quadratic");
  SolveConfig cfg;
  cfg.majorant = MajorantFunction::lipschitz(1.0);
  auto rep = solve(quad, vec({1.5}), cfg);
  CHECK(rep.distances.size() == rep.iterates.size());
  CHECK(rep.residuals.size() == rep.iterates.size());
  CHECK(rep.majorant.size() == rep.iterates.size());
  CHECK(std::isnan(rep.ratio_majorant[0]));
  CHECK(rep.bound == doctest::Approx(1.0));
  REQUIRE(rep.radii.has_value());
  CHECK(rep.radii->r == 2.0 / 3.0);

  rep = solve(quad, vec({0.0}));
  CHECK(rep.status == SolveStatus::StepFailed);
  CHECK_FALSE(rep.message.empty());
  rep = solve(quad, vec({-0.5}));
  CHECK(rep.status == SolveStatus::StepFailed);

  SolveConfig one;
  one.max_outer = 1;
  rep = solve(quad, vec({1.5}), one);
  CHECK(rep.status == SolveStatus::MaxIter);
  CHECK(to_string(SolveStatus::Converged) == "Converged");
  CHECK_THROWS_AS(solve(quad, vec({1.0, 2.0})), DimensionMismatch);
}

TEST_CASE("verify_theorem examples") {
  const auto quad = testing::builtin("scalar-quadratic");
  const auto f = MajorantFunction::lipschitz(1.0);
  const auto rep = verify_theorem(quad, f, vec({1.5}));
  CHECK(rep.passed);
  for (const char* name : {"majorant_domination", "quadratic_step_bound", "ratio_cap", "strict_decrease",
                           "geometric_decay", "majorant_condition", "converged"}) {
    const auto* a = rep.find(name);
    REQUIRE(a != nullptr);
    CHECK(a->passed);
  }
  CHECK_THROWS_AS(verify_theorem(quad, f, vec({1.7})), PreconditionViolated);
  CHECK_THROWS_AS(verify_theorem(quad, f, vec({0.3})), PreconditionViolated);

  // Tight edge: from x0 = 0.5 the first step lands exactly on t1 = 0.25.
  const auto tight = verify_theorem(quad, f, vec({0.5}));
  CHECK(tight.passed);
  CHECK(ratio_bound(f, 0.5) == doctest::Approx(1.0));
  CHECK(tight.run.ratio_majorant[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(tight.run.ratio_empirical[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(tight.find("quadratic_step_bound")->worst_margin) <= 1e-12);

  // Starting at the solution passes vacuously.
  CHECK(verify_theorem(quad, f, vec({1.0})).passed);
}

TEST_CASE("verify_theorem catches a majorant that is too optimistic") {
  // K = 0.5 understates the Jacobian's Lipschitz constant.
  const auto quad = testing::builtin("scalar-quadratic");
  const auto rep = verify_theorem(quad, MajorantFunction::lipschitz(0.5), vec({0.2}));
  CHECK_FALSE(rep.passed);
  CHECK_FALSE(rep.find("majorant_condition")->passed);
}

TEST_CASE("check_uniqueness examples") {
  const auto quad = testing::builtin("scalar-quadratic");
  auto rep = check_uniqueness(quad, MajorantFunction::lipschitz(1.0));
  CHECK(rep.passed);
  CHECK(rep.radius == doctest::Approx(2.0 / 3.0 - 1e-6));
  CHECK(rep.samples == 10'000);
  CHECK(check_uniqueness(testing::builtin("affine-ncp-1d"), MajorantFunction::lipschitz(1.0)).passed);
  UniquenessOptions none;
  none.samples = 0;
  CHECK(check_uniqueness(quad, MajorantFunction::lipschitz(1.0), none).passed);
}

TEST_CASE("check_uniqueness finds the second root when the ball is too large") {
  // K = 0.2 claims uniqueness on B[1, 10/3], which contains the root -1.
  auto quad = testing::builtin("scalar-quadratic");
  UniquenessOptions opt;
  opt.samples = 200'000;
  opt.residual_tol = 1e-4;
  const auto rep = check_uniqueness(quad, MajorantFunction::lipschitz(0.2), opt);
  CHECK_FALSE(rep.passed);
  CHECK(rep.spurious > 0);
  CHECK(std::abs(rep.min_residual_point(0) + 1.0) < 1e-3);
}

TEST_CASE("serial and parallel experiments agree") {
  const auto p = testing::builtin("ncp-4d");
  const auto f = MajorantFunction::lipschitz(*builtin_problem("ncp-4d").majorant.K);
  UniquenessOptions u;
  u.samples = 2000;
  const auto a = check_uniqueness(p, f, u, Execution::Serial);
  const auto b = check_uniqueness(p, f, u, Execution::Parallel);
  CHECK(a.min_residual == b.min_residual);
  CHECK(a.min_residual_point == b.min_residual_point);
  BasinOptions opt;
  opt.directions = 4;
  opt.r_max = 3.0;
  const auto ba = empirical_radius(p, opt, Execution::Serial);
  const auto bb = empirical_radius(p, opt, Execution::Parallel);
  CHECK(ba.radii == bb.radii);
}

TEST_CASE("empirical_radius examples") {
  const auto quad = testing::builtin("scalar-quadratic");
  BasinOptions opt;
  opt.directions = 2;
  opt.r_max = 3.0;
  const auto rep = empirical_radius(quad, opt);
  REQUIRE(rep.radii.size() == 2);
  CHECK(rep.directions[0](0) == 1.0);
  CHECK(rep.directions[1](0) == -1.0);
  CHECK(rep.radii[0] == 3.0);
  // Towards 0, Newton converges from every x > 0: the boundary is at s = 1.
  CHECK(rep.radii[1] <= 1.0);
  CHECK(rep.radii[1] >= 1.0 - opt.bisect_tol);
  CHECK(rep.min_radius >= 2.0 / 3.0);

  BasinOptions aff;
  aff.r_max = 2.5;
  const auto affine = empirical_radius(testing::builtin("affine-ncp-1d"), aff);
  for (double r : affine.radii) CHECK(r == 2.5);
  CHECK(basin_radius_along(quad, vec({-1.0}), opt) == rep.radii[1]);
  CHECK(basin_directions(3, 5, 1).size() == 5);
  for (const auto& d : basin_directions(3, 5, 1)) CHECK(d.norm() == doctest::Approx(1.0));
}

TEST_CASE("linearization_error examples") {
  const auto quad = testing::builtin("scalar-quadratic");
  CHECK(linearization_error(quad.F, vec({1.5}), vec({1.0}))(0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(linearization_error(quad.F, vec({1.5}), vec({1.5}))(0) == 0.0);
  const auto affine = testing::builtin("affine-ncp-1d");
  CHECK(linearization_error(affine.F, vec({-3.0}), vec({7.0}))(0) == 0.0);
}

TEST_CASE("quadratic order") {
  const auto quad = testing::builtin("scalar-quadratic");
  const auto rep = solve(quad, vec({1.5}));
  const double order = empirical_order(rep.distances);
  CHECK(order >= 1.8);
  CHECK(order <= 2.2);
  CHECK(rep.iterations() <= 7);
  const auto smale = testing::builtin("smale-2d-poly");
  const auto s = solve(smale, *smale.known_solution + vec({0.3, -0.2}));
  const double so = empirical_order(s.distances);
  CHECK(so >= 1.8);
  CHECK(so <= 2.2);
  CHECK(std::isnan(empirical_order({1.0, 0.5})));
}

}
