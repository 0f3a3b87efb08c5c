#include "gnewton/newton.hpp"

#include "gnewton/errors.hpp"
#include "gnewton/subproblem.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gnewton {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Tracks the worst (smallest) margin of one assertion across k.
class MarginTracker {
public:
  explicit MarginTracker(std::string name) { res_.name = std::move(name); }

  void check(std::size_t k, double margin, bool ok) {
    ++res_.checks;
    if (!ok) res_.passed = false;
    if (margin < res_.worst_margin || res_.checks == 1) {
      res_.worst_margin = margin;
      res_.worst_k = k;
    }
  }

  AssertionResult result() const { return res_; }

private:
  AssertionResult res_;
};

void check_problem_dims(const ProblemInstance& p, const Vector& x0) {
  if (x0.size() != p.F.dimension()) throw DimensionMismatch("solve: x0 has wrong dimension");
  if (p.T.dimension() != p.F.dimension()) throw DimensionMismatch("solve: F and T dimensions differ");
  if (p.known_solution && p.known_solution->size() != p.F.dimension()) {
    throw DimensionMismatch("solve: known solution has wrong dimension");
  }
  require_finite(x0, "solve x0");
}

const Vector& require_solution(const ProblemInstance& p, const char* what) {
  if (!p.known_solution) throw PreconditionViolated(std::string(what) + ": problem has no known solution");
  return *p.known_solution;
}

} // namespace

std::string to_string(SolveStatus s) {
  switch (s) {
  case SolveStatus::Converged:
    return "Converged";
  case SolveStatus::MaxIter:
    return "MaxIter";
  case SolveStatus::StepFailed:
    return "StepFailed";
  }
  return "Unknown";
}

SolveReport solve(const ProblemInstance& p, const Vector& x0, const SolveConfig& cfg) {
  check_problem_dims(p, x0);
  SolveReport rep;
  const Vector* xstar = p.known_solution ? &*p.known_solution : nullptr;

  std::optional<MajorantFunction> f;
  if (cfg.majorant && xstar != nullptr) {
    f = cfg.majorant;
    rep.radii = radii(*f, p.kappa);
    const double t0 = (x0 - *xstar).norm();
    if (t0 > 0.0 && t0 < rep.radii->rho) {
      rep.majorant.push_back(t0);
      rep.bound = ratio_bound(*f, t0);
    }
  }

  auto record = [&](const Vector& x) {
    const std::size_t k = rep.iterates.size();
    rep.iterates.push_back(x);
    rep.residuals.push_back(natural_residual(p.F.eval(x), x, p.T));
    if (xstar != nullptr) rep.distances.push_back((x - *xstar).norm());
    if (!rep.majorant.empty() && k > 0) rep.majorant.push_back(std::abs(newton_map(*f, rep.majorant.back())));
    if (k == 0) {
      rep.ratio_empirical.push_back(kNaN);
      rep.ratio_majorant.push_back(kNaN);
      return;
    }
    const double dprev = xstar != nullptr ? rep.distances[k - 1] : 0.0;
    rep.ratio_empirical.push_back(dprev > 0.0 ? rep.distances[k] / (dprev * dprev) : kNaN);
    const double tprev = rep.majorant.empty() ? 0.0 : rep.majorant[k - 1];
    rep.ratio_majorant.push_back(tprev > 0.0 ? rep.majorant[k] / (tprev * tprev) : kNaN);
  };

  Vector x = x0;
  try {
    for (std::size_t k = 0;; ++k) {
      record(x);
      if (rep.residuals.back() <= cfg.outer_tol) {
        rep.status = SolveStatus::Converged;
        return rep;
      }
      if (k == cfg.max_outer) {
        rep.status = SolveStatus::MaxIter;
        rep.message = "outer iteration cap reached";
        return rep;
      }
      const LinearizedInclusion step{p.F.eval(x), p.F.jacobian(x), x, p.T};
      x = solve_step(step, StepOptions{cfg.inner_tol, cfg.max_inner});
    }
  } catch (const DimensionMismatch&) {
    throw;
  } catch (const Error& e) {
    rep.status = SolveStatus::StepFailed;
    rep.message = e.what();
  }
  return rep;
}

const AssertionResult* TheoremReport::find(const std::string& name) const {
  for (const auto& a : assertions) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

TheoremReport verify_theorem(const ProblemInstance& p, const MajorantFunction& f, const Vector& x0,
                             const SolveConfig& cfg, const MajorantGrid& grid, Execution exec) {
  const Vector& xstar = require_solution(p, "verify_theorem");
  check_problem_dims(p, x0);
  TheoremReport rep;
  rep.radii = radii(f, p.kappa);
  rep.t0 = (x0 - xstar).norm();
  if (!(rep.t0 < rep.radii.r)) {
    std::ostringstream os;
    os.precision(17);
    os << "verify_theorem: t0 = " << rep.t0 << " is not inside B(x*, r) with r = " << rep.radii.r;
    throw PreconditionViolated(os.str());
  }

  const MajorantConditionReport mc = check_majorant_condition(p.F, xstar, f, p.kappa, grid, exec);
  MarginTracker condition("majorant_condition");
  condition.check(0, -mc.max_violation, mc.max_violation <= 1e-8);

  SolveConfig run_cfg = cfg;
  run_cfg.majorant = f;
  rep.run = solve(p, x0, run_cfg);
  MarginTracker converged("converged");
  converged.check(rep.run.iterations(), rep.run.status == SolveStatus::Converged ? 0.0 : -1.0,
                  rep.run.status == SolveStatus::Converged);

  MarginTracker dominated("majorant_domination");
  MarginTracker per_step("quadratic_step_bound");
  MarginTracker ratio_cap("ratio_cap");
  MarginTracker decrease("strict_decrease");
  MarginTracker geometric("geometric_decay");

  const auto& d = rep.run.distances;
  const auto& t = rep.run.majorant;
  if (rep.t0 > 0.0) {
    const double t0 = t[0];
    const double q = t.size() > 1 ? t[1] / t0 : 0.0;
    for (std::size_t k = 0; k < d.size(); ++k) {
      const double slack = comparison_slack(t[k]);
      dominated.check(k, t[k] - d[k], d[k] <= t[k] + slack);
      const double decay = t0 * std::pow(q, std::ldexp(1.0, static_cast<int>(std::min<std::size_t>(k, 1000))) - 1.0);
      geometric.check(k, decay - d[k], d[k] <= decay + slack);
      if (k + 1 >= d.size()) continue;
      decrease.check(k, d[k] - d[k + 1], d[k + 1] < d[k] || d[k + 1] <= slack);
      const double tk2 = t[k] * t[k];
      if (!(tk2 > 0.0) || !std::isnormal(tk2)) continue;
      const double ratio = t[k + 1] / tk2;
      const double step_bound = ratio * d[k] * d[k];
      per_step.check(k, step_bound - d[k + 1], d[k + 1] <= step_bound + slack);
      ratio_cap.check(k, rep.run.bound - ratio, ratio <= rep.run.bound + comparison_slack(rep.run.bound));
    }
  }

  rep.assertions = {condition.result(), converged.result(), dominated.result(), per_step.result(),
                    ratio_cap.result(), decrease.result(), geometric.result()};
  rep.passed = std::all_of(rep.assertions.begin(), rep.assertions.end(),
                           [](const AssertionResult& a) { return a.passed; });
  return rep;
}

UniquenessReport check_uniqueness(const ProblemInstance& p, const MajorantFunction& f,
                                  const UniquenessOptions& opt, Execution exec) {
  const Vector& xstar = require_solution(p, "check_uniqueness");
  const RadiusReport rad = radii(f, p.kappa);
  UniquenessReport rep;
  rep.radius = std::max(0.0, rad.sigma_bar - opt.shrink);
  rep.samples = opt.samples;
  rep.min_residual_point = xstar;
  if (opt.samples == 0) return rep;

  auto sample_point = [&](std::size_t i) {
    auto rng = sample_rng(opt.seed, i);
    return random_in_ball(rng, xstar, rep.radius);
  };
  auto residual_at = [&](std::size_t i) {
    const Vector x = sample_point(i);
    if ((x - xstar).norm() <= opt.exclusion) return std::numeric_limits<double>::infinity();
    return natural_residual(p.F.eval(x), x, p.T);
  };

  const SweepResult best = sweep_min(opt.samples, residual_at, exec);
  rep.min_residual = best.value;
  rep.min_residual_point = sample_point(best.index);
  if (!(best.value > opt.residual_tol)) {
    for (std::size_t i = 0; i < opt.samples; ++i) {
      if (!(residual_at(i) > opt.residual_tol)) ++rep.spurious;
    }
  }
  rep.passed = rep.spurious == 0;
  return rep;
}

std::vector<Vector> basin_directions(Eigen::Index n, std::size_t count, std::uint64_t seed) {
  std::vector<Vector> dirs;
  dirs.reserve(count);
  for (std::size_t j = 0; j < count; ++j) {
    if (n == 1) {
      dirs.push_back(Vector::Constant(1, j % 2 == 0 ? 1.0 : -1.0));
    } else {
      auto rng = sample_rng(seed, j);
      dirs.push_back(random_unit_vector(rng, n));
    }
  }
  return dirs;
}

bool converges_to_solution(const ProblemInstance& p, const Vector& x0, const SolveConfig& cfg) {
  const Vector& xstar = require_solution(p, "converges_to_solution");
  const SolveReport rep = solve(p, x0, cfg);
  return rep.status == SolveStatus::Converged &&
         (rep.final_iterate() - xstar).norm() <= 1e-8 * (1.0 + xstar.norm());
}

double basin_radius_along(const ProblemInstance& p, const Vector& direction, const BasinOptions& opt) {
  const Vector& xstar = require_solution(p, "basin_radius_along");
  if (direction.size() != xstar.size()) throw DimensionMismatch("basin_radius_along: direction dimension");
  if (!(opt.r_max > 0.0) || !(opt.bisect_tol > 0.0) || opt.scan_steps == 0) {
    throw DomainError("basin_radius_along: r_max, bisect_tol and scan_steps must be positive");
  }
  const Vector d = direction / direction.norm();
  auto ok = [&](double s) { return converges_to_solution(p, xstar + s * d, opt.solve); };
  double good = 0.0;
  for (std::size_t j = 1; j <= opt.scan_steps; ++j) {
    const double s = opt.r_max * static_cast<double>(j) / static_cast<double>(opt.scan_steps);
    if (ok(s)) {
      good = s;
      continue;
    }
    double bad = s;
    while (bad - good > opt.bisect_tol) {
      const double mid = 0.5 * (good + bad);
      if (ok(mid)) {
        good = mid;
      } else {
        bad = mid;
      }
    }
    return good;
  }
  return opt.r_max;
}

BasinReport empirical_radius(const ProblemInstance& p, const BasinOptions& opt, Execution exec) {
  require_solution(p, "empirical_radius");
  BasinReport rep;
  rep.directions = basin_directions(p.F.dimension(), opt.directions, opt.seed);
  rep.radii.assign(rep.directions.size(), 0.0);
  const SweepResult best = sweep_min(
      rep.directions.size(),
      [&](std::size_t j) {
        rep.radii[j] = basin_radius_along(p, rep.directions[j], opt);
        return rep.radii[j];
      },
      exec);
  rep.min_radius = best.empty ? opt.r_max : best.value;
  return rep;
}

Vector linearization_error(const SmoothMap& F, const Vector& x, const Vector& y) {
  require_same_dim(x, y, "linearization_error");
  return F.eval(y) - (F.eval(x) + F.jacobian(x) * (y - x));
}

double empirical_order(const std::vector<double>& errors, std::size_t pairs, double floor) {
  std::vector<std::pair<double, double>> usable;
  for (std::size_t k = 0; k + 1 < errors.size(); ++k) {
    if (errors[k] > floor && errors[k + 1] > floor) {
      usable.emplace_back(std::log(errors[k]), std::log(errors[k + 1]));
    }
  }
  if (pairs < 2 || usable.size() < pairs) return kNaN;
  const auto first = usable.end() - static_cast<std::ptrdiff_t>(pairs);
  double mx = 0.0;
  double my = 0.0;
  for (auto it = first; it != usable.end(); ++it) {
    mx += it->first;
    my += it->second;
  }
  mx /= static_cast<double>(pairs);
  my /= static_cast<double>(pairs);
  double sxy = 0.0;
  double sxx = 0.0;
  for (auto it = first; it != usable.end(); ++it) {
    sxy += (it->first - mx) * (it->second - my);
    sxx += (it->first - mx) * (it->first - mx);
  }
  return sxx > 0.0 ? sxy / sxx : kNaN;
}

} // namespace gnewton
