#pragma once

// Newton's method for the generalized equation F(x) + T(x) \ni 0,
//
//   0 in F(x_k) + F'(x_k)(x_{k+1} - x_k) + T(x_{k+1}),
//
// together with the diagnostics that compare an actual run against the
// majorant theory: domination by t_k, the per-step quadratic bound, the ratio
// cap, uniqueness and basin experiments.

#include "gnewton/hilbert.hpp"
#include "gnewton/majorant.hpp"
#include "gnewton/monotone.hpp"
#include "gnewton/smooth_map.hpp"
#include "gnewton/sweep.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace gnewton {

struct ProblemInstance {
  std::string name;
  SmoothMap F;
  MonotoneOperator T;
  double kappa = 0.0; ///< radius of the ball around x* on which F is defined
  std::optional<Vector> known_solution;
};

enum class SolveStatus { Converged, MaxIter, StepFailed };

std::string to_string(SolveStatus s);

struct SolveConfig {
  double outer_tol = 1e-12;
  double inner_tol = 1e-12;
  std::size_t max_outer = 100;
  std::size_t max_inner = 10'000;
  /// When set together with a known solution, the run also carries the
  /// majorant sequence t_k from t_0 = ||x0 - x*||.
  std::optional<MajorantFunction> majorant;
};

struct SolveReport {
  std::vector<Vector> iterates;
  std::vector<double> residuals;
  std::vector<double> distances;       ///< ||x_k - x*||, empty when x* unknown
  std::vector<double> majorant;        ///< t_k, empty without majorant or when t0 is not in (0, rho)
  std::vector<double> ratio_empirical; ///< ||x_k - x*|| / ||x_{k-1} - x*||^2, NaN at k = 0
  std::vector<double> ratio_majorant;  ///< t_k / t_{k-1}^2, NaN at k = 0
  double bound = std::numeric_limits<double>::quiet_NaN(); ///< f''(t0) / (2|f'(t0)|)
  std::optional<RadiusReport> radii;
  SolveStatus status = SolveStatus::MaxIter;
  std::string message;

  std::size_t iterations() const { return iterates.empty() ? 0 : iterates.size() - 1; }
  const Vector& final_iterate() const { return iterates.back(); }
};

SolveReport solve(const ProblemInstance& p, const Vector& x0, const SolveConfig& cfg = {});

/// Slack for distance comparisons: 1e-10 (1 + t).
inline double comparison_slack(double t) { return 1e-10 * (1.0 + t); }

struct AssertionResult {
  std::string name;
  bool passed = true;
  double worst_margin = std::numeric_limits<double>::infinity(); ///< rhs - lhs; negative means violated
  std::size_t worst_k = 0;
  std::size_t checks = 0;
};

struct TheoremReport {
  bool passed = false;
  double t0 = 0.0;
  RadiusReport radii;
  SolveReport run;
  std::vector<AssertionResult> assertions;

  const AssertionResult* find(const std::string& name) const;
};

/// Runs Newton from x0 with t0 = ||x0 - x*|| and checks, for every k:
/// domination ||x_k - x*|| <= t_k, the per-step bound
/// ||x* - x_{k+1}|| <= (t_{k+1}/t_k^2) ||x_k - x*||^2, the ratio cap
/// t_{k+1}/t_k^2 <= f''(t0)/(2|f'(t0)|), strict decrease of the distances and the
/// geometric decay ||x* - x_k|| <= t0 (t1/t0)^(2^k - 1). The majorant condition
/// itself is sampled first. Throws PreconditionViolated when x0 is not in B(x*, r).
TheoremReport verify_theorem(const ProblemInstance& p, const MajorantFunction& f, const Vector& x0,
                             const SolveConfig& cfg = {}, const MajorantGrid& grid = {},
                             Execution exec = Execution::Parallel);

struct UniquenessReport {
  bool passed = true;
  double radius = 0.0;
  std::size_t samples = 0;
  double min_residual = std::numeric_limits<double>::infinity();
  Vector min_residual_point;
  std::size_t spurious = 0; ///< samples away from x* whose natural residual is <= residual_tol
};

struct UniquenessOptions {
  std::size_t samples = 10'000;
  std::uint64_t seed = 0;
  double shrink = 1e-6;        ///< samples live in B[x*, sigma_bar - shrink]
  double residual_tol = 1e-10; ///< residuals at or below this count as solutions
  double exclusion = 1e-8;     ///< samples this close to x* are x* itself
};

/// Falsification test of uniqueness: samples B[x*, sigma_bar - shrink] and
/// reports any point other than x* where the natural residual vanishes.
UniquenessReport check_uniqueness(const ProblemInstance& p, const MajorantFunction& f,
                                  const UniquenessOptions& opt = {}, Execution exec = Execution::Parallel);

struct BasinOptions {
  std::size_t directions = 8;
  double r_max = 1.0;
  double bisect_tol = 1e-6;
  std::size_t scan_steps = 32;
  std::uint64_t seed = 0;
  SolveConfig solve;
};

struct BasinReport {
  std::vector<Vector> directions;
  std::vector<double> radii; ///< per direction
  double min_radius = 0.0;
};

/// Unit directions used by empirical_radius: alternating +-1 in one dimension,
/// seeded uniform directions otherwise.
std::vector<Vector> basin_directions(Eigen::Index n, std::size_t count, std::uint64_t seed);

/// True when Newton started at x0 converges to x*.
bool converges_to_solution(const ProblemInstance& p, const Vector& x0, const SolveConfig& cfg);

/// Largest s <= r_max along direction d such that Newton from x* + s d converges
/// back to x*: a coarse scan outward locates the first failure, bisection
/// refines it to bisect_tol.
double basin_radius_along(const ProblemInstance& p, const Vector& direction, const BasinOptions& opt);

/// Minimum of basin_radius_along over the sampled directions.
BasinReport empirical_radius(const ProblemInstance& p, const BasinOptions& opt,
                             Execution exec = Execution::Parallel);

/// E_F(x, y) = F(y) - [F(x) + F'(x)(y - x)].
Vector linearization_error(const SmoothMap& F, const Vector& x, const Vector& y);

/// Empirical convergence order: least-squares slope of log e_{k+1} against
/// log e_k over the last `pairs` consecutive pairs with both errors above `floor`.
/// Returns NaN when fewer than `pairs` usable pairs exist.
double empirical_order(const std::vector<double>& errors, std::size_t pairs = 3, double floor = 1e-13);

} // namespace gnewton
