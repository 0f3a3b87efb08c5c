#include "helpers.hpp"

#include "gnewton/errors.hpp"
#include "gnewton/problems.hpp"
#include "gnewton/subproblem.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace gnewton;
using nlohmann::json;
using testing::vec;

namespace {

bool same_spec(const ProblemSpec& a, const ProblemSpec& b) {
  return to_json(a) == to_json(b);
}

} // namespace

TEST_SUITE("problem_library") {

TEST_CASE("built-in catalogue") {
  const auto all = builtin_problems();
  REQUIRE(all.size() >= 4);
  for (const char* name : {"scalar-quadratic", "affine-ncp-1d", "ncp-4d", "smale-2d-poly"}) {
    CHECK(builtin_problem(name).name == name);
  }
  CHECK_THROWS_AS(builtin_problem("nope"), InvalidProblem);
}

TEST_CASE("problem (a): K and gamma") {
  const auto spec = builtin_problem("scalar-quadratic");
  CHECK(*spec.majorant.K == 1.0);
  CHECK(*spec.majorant.gamma == 0.5);
  const auto F = SmoothMap::from_polynomial(spec.F);
  CHECK(measure_lipschitz_constant(F, *spec.x_star, spec.kappa) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(gamma_estimate_1d(F, *spec.x_star, 4) == *spec.majorant.gamma);
}

TEST_CASE("problem (b): natural residual vanishes at x* = 0") {
  const auto p = testing::builtin("affine-ncp-1d");
  CHECK(natural_residual(p.F.eval(vec({0.0})), vec({0.0}), p.T) == 0.0);
}

TEST_CASE("every built-in satisfies its declarations") {
  for (const auto& spec : builtin_problems()) {
    CAPTURE(spec.name);
    REQUIRE(spec.x_star.has_value());
    const auto p = to_instance(spec);
    const Vector& xs = *spec.x_star;
    CHECK(natural_residual(p.F.eval(xs), xs, p.T) <= 1e-10);
    CHECK(check_jacobian(p.F, xs, spec.kappa, 100, 3).ok);
    CHECK(is_positive(symmetrize(p.F.jacobian(xs)), 0.0));
    CHECK(min_eigenvalue_sym(symmetrize(p.F.jacobian(xs))) > 0.0);
    const auto majorants = declared_majorants(spec);
    CHECK_FALSE(majorants.empty());
    for (const auto& f : majorants) {
      CAPTURE(f.name());
      CHECK(check_majorant_condition(p.F, xs, f, spec.kappa).max_violation <= 1e-8);
    }
    if (spec.majorant.K) {
      CHECK(measure_lipschitz_constant(p.F, xs, spec.kappa) <= *spec.majorant.K * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("make_ncp examples") {
  NcpOptions one;
  one.n = 1;
  one.x_star = vec({0.0});
  one.active_set = {0};
  auto s = make_ncp(one);
  auto p = to_instance(s);
  CHECK(p.F.eval(vec({0.0}))(0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(natural_residual(p.F.eval(vec({0.0})), vec({0.0}), p.T) <= 1e-14);

  NcpOptions two;
  two.n = 2;
  two.seed = 3;
  two.x_star = vec({1.0, 0.0});
  two.active_set = {1};
  s = make_ncp(two);
  p = to_instance(s);
  const Vector Fx = p.F.eval(two.x_star);
  CHECK(std::abs(Fx(0)) <= 1e-13);
  CHECK(Fx(1) > 0.0);
  CHECK(natural_residual(Fx, two.x_star, p.T) <= 1e-13);
  const double lmin = min_eigenvalue_sym(s.F.M);
  const double lmax = max_eigenvalue_sym(s.F.M);
  CHECK(lmin >= 1.0 - 1e-12);
  CHECK(lmax / lmin <= 10.0 + 1e-10);
  CHECK(*s.majorant.K >= measure_lipschitz_constant(p.F, two.x_star, s.kappa));

  NcpOptions affine = two;
  affine.alpha = 0.0;
  s = make_ncp(affine);
  p = to_instance(s);
  CHECK(*s.majorant.K == 1.0);
  for (std::uint64_t i = 0; i < 20; ++i) {
    auto rng = sample_rng(4, i);
    const auto rep = solve(p, random_in_ball(rng, two.x_star, 5.0));
    CHECK(rep.status == SolveStatus::Converged);
    CHECK(rep.iterations() <= 1);
  }
}

TEST_CASE("make_ncp is reproducible per seed") {
  NcpOptions o;
  o.n = 5;
  o.seed = 99;
  o.x_star = vec({0.0, 1.0, 2.0, 0.0, 0.5});
  o.active_set = {0, 3};
  const auto a = make_ncp(o);
  const auto b = make_ncp(o);
  CHECK(a.F.M == b.F.M);
  CHECK(a.F.q == b.F.q);
  CHECK(*a.majorant.K == *b.majorant.K);
  o.seed = 100;
  CHECK(make_ncp(o).F.M != a.F.M);
}

TEST_CASE("make_ncp rejects infeasible combinations") {
  NcpOptions o;
  o.n = 2;
  o.x_star = vec({1.0, 0.0});
  o.active_set = {0};
  CHECK_THROWS_AS(make_ncp(o), InvalidProblem);
  o.active_set = {};
  CHECK_THROWS_AS(make_ncp(o), InvalidProblem);
  o.active_set = {1, 1};
  CHECK_THROWS_AS(make_ncp(o), InvalidProblem);
  o.active_set = {2};
  CHECK_THROWS_AS(make_ncp(o), InvalidProblem);
  o.active_set = {1};
  o.x_star = vec({-1.0, 0.0});
  CHECK_THROWS_AS(make_ncp(o), InvalidProblem);
  o.x_star = vec({1.0});
  CHECK_THROWS_AS(make_ncp(o), InvalidProblem);
}

TEST_CASE("JSON round trip") {
  for (const auto& spec : builtin_problems()) {
    const json j = to_json(spec);
    const auto back = problem_from_json(json::parse(j.dump()));
    CHECK(same_spec(spec, back));
    CHECK(back.F.M == spec.F.M);
    CHECK(back.F.q == spec.F.q);
  }
  ProblemSpec boxed = builtin_problem("scalar-quadratic");
  boxed.T = MonotoneOperator::box(vec({-std::numeric_limits<double>::infinity()}), vec({2.0}));
  const json j = to_json(boxed);
  CHECK(j["T"]["lower"][0].is_null());
  const auto back = problem_from_json(j);
  CHECK(same_spec(boxed, back));
  boxed.T = MonotoneOperator::l1(1, 0.25);
  CHECK(same_spec(boxed, problem_from_json(to_json(boxed))));
}

TEST_CASE("strict JSON parsing") {
  json j = to_json(builtin_problem("ncp-4d"));
  json bad = j;
  bad["extra"] = 1;
  CHECK_THROWS_AS(problem_from_json(bad), InvalidProblem);
  bad = j;
  bad["F"]["extra"] = 1;
  CHECK_THROWS_AS(problem_from_json(bad), InvalidProblem);
  bad = j;
  bad.erase("F");
  CHECK_THROWS_AS(problem_from_json(bad), InvalidProblem);
  bad = j;
  bad["T"] = json{{"kind", "simplex"}};
  CHECK_THROWS_AS(problem_from_json(bad), InvalidProblem);
  bad = j;
  bad["x_star"] = json::array({1.0});
  CHECK_THROWS_AS(problem_from_json(bad), InvalidProblem);
  bad = j;
  bad["dimension"] = 3;
  CHECK_THROWS_AS(problem_from_json(bad), InvalidProblem);
  bad = j;
  bad["F"]["M"] = json::array({json::array({1.0})});
  CHECK_THROWS_AS(problem_from_json(bad), InvalidProblem);
  bad = j;
  bad["kappa"] = -1.0;
  CHECK_THROWS_AS(problem_from_json(bad), InvalidProblem);
  bad = j;
  bad["majorant"] = json{{"L", 1.0}};
  CHECK_THROWS_AS(problem_from_json(bad), InvalidProblem);
}

}
