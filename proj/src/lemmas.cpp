#include "gnewton/lemmas.hpp"

#include "gnewton/errors.hpp"
#include "gnewton/subproblem.hpp"

#include <algorithm>
#include <cmath>

namespace gnewton {

namespace {

double scaled_violation(double lhs, double rhs) { return (lhs - rhs) / (1.0 + std::abs(rhs)); }

LemmaSweep finish(const SweepResult& r, std::size_t samples) {
  LemmaSweep out;
  out.samples = samples;
  if (!r.empty) {
    out.max_violation = r.value;
    out.worst_index = r.index;
  }
  return out;
}

const Vector& solution_of(const ProblemInstance& p) {
  if (!p.known_solution) throw PreconditionViolated("lemma sweep: problem has no known solution");
  return *p.known_solution;
}

double reach(double a, double b) {
  const double r = std::min(a, b) * (1.0 - 1e-9);
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("lemma sweep: sampling radius must be finite and > 0");
  return r;
}

} // namespace

Vector newton_step(const ProblemInstance& p, const Vector& x, double inner_tol) {
  const LinearizedInclusion step{p.F.eval(x), p.F.jacobian(x), x, p.T};
  return solve_step(step, StepOptions{inner_tol, 10'000});
}

LemmaSweep sweep_banach_bound(Eigen::Index n, std::size_t samples, std::uint64_t seed, Execution exec) {
  const auto r = sweep_max(
      samples,
      [&](std::size_t i) {
        auto rng = sample_rng(seed, i);
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::uniform_real_distribution<double> unit(0.0, 0.95);
        LinearOperator e(n, n);
        for (Eigen::Index c = 0; c < n; ++c) {
          for (Eigen::Index k = 0; k < n; ++k) e(k, c) = gauss(rng);
        }
        e *= unit(rng) / operator_norm(e);
        const LinearOperator b = LinearOperator::Identity(n, n) + e;
        const double bound = banach_inverse_bound(b);
        return scaled_violation(operator_norm(inverse_dense(b)), bound);
      },
      exec);
  return finish(r, samples);
}

LemmaSweep sweep_adjoint_bound(Eigen::Index n, std::size_t samples, std::uint64_t seed, Execution exec) {
  const auto r = sweep_max(
      samples,
      [&](std::size_t i) {
        auto rng = sample_rng(seed, i);
        const LinearOperator s = random_spd(rng, n, 0.01, 10.0);
        const Vector x = random_unit_vector(rng, n) * std::exp(std::normal_distribution<double>(0.0, 1.0)(rng));
        return scaled_violation(x.squaredNorm() / inverse_norm(s), x.dot(s * x));
      },
      exec);
  return finish(r, samples);
}

LemmaSweep sweep_linearization_bound(const ProblemInstance& p, const MajorantFunction& f, std::size_t samples,
                                     std::uint64_t seed, Execution exec) {
  const Vector& xstar = solution_of(p);
  const double scale = inverse_norm(symmetrize(p.F.jacobian(xstar)));
  const double radius = reach(p.kappa, f.domain_end());
  const auto r = sweep_max(
      samples,
      [&](std::size_t i) {
        auto rng = sample_rng(seed, i);
        const Vector x = random_in_ball(rng, xstar, radius);
        const double t = (x - xstar).norm();
        const double lhs = scale * linearization_error(p.F, x, xstar).norm();
        return scaled_violation(lhs, majorant_linearization_error(f, t, 0.0));
      },
      exec);
  return finish(r, samples);
}

LemmaSweep sweep_inverse_norm_bound(const ProblemInstance& p, const MajorantFunction& f, std::size_t samples,
                                    std::uint64_t seed, Execution exec) {
  const Vector& xstar = solution_of(p);
  const double scale = inverse_norm(symmetrize(p.F.jacobian(xstar)));
  const double radius = reach(p.kappa, radii(f, p.kappa).nu);
  const auto r = sweep_max(
      samples,
      [&](std::size_t i) {
        auto rng = sample_rng(seed, i);
        const Vector x = random_in_ball(rng, xstar, radius);
        const double t = (x - xstar).norm();
        const LinearOperator sym = symmetrize(p.F.jacobian(x));
        if (!(min_eigenvalue_sym(sym) > kEigTol)) return std::numeric_limits<double>::infinity();
        return scaled_violation(inverse_norm(sym), scale / std::abs(f.derivative(t)));
      },
      exec);
  return finish(r, samples);
}

LemmaSweep sweep_newton_step_contraction(const ProblemInstance& p, const MajorantFunction& f, std::size_t samples,
                                         std::uint64_t seed, Execution exec) {
  const Vector& xstar = solution_of(p);
  const double radius = reach(p.kappa, radii(f, p.kappa).r);
  const auto r = sweep_max(
      samples,
      [&](std::size_t i) {
        auto rng = sample_rng(seed, i);
        const Vector x = random_in_ball(rng, xstar, radius);
        const double dist = (x - xstar).norm();
        const double t = std::uniform_real_distribution<double>(dist, radius)(rng);
        if (!(t > 0.0)) return -std::numeric_limits<double>::infinity();
        const Vector y = newton_step(p, x);
        const double rhs = std::abs(newton_map(f, t)) / (t * t) * dist * dist;
        return scaled_violation((y - xstar).norm(), rhs);
      },
      exec);
  return finish(r, samples);
}

} // namespace gnewton
