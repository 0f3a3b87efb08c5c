#pragma once

#include "gnewton/majorant.hpp"
#include "gnewton/monotone.hpp"
#include "gnewton/newton.hpp"
#include "gnewton/smooth_map.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gnewton {

struct MajorantParameters {
  std::optional<double> K;
  std::optional<double> gamma;
};

/// Serializable problem description: F is a separable polynomial system, T one
/// of the resolvent-backed operators.
struct ProblemSpec {
  std::string name;
  SeparablePolynomialSystem F;
  MonotoneOperator T = MonotoneOperator::zero(1);
  std::optional<Vector> x_star;
  MajorantParameters majorant;
  double kappa = 1.0;

  Eigen::Index dimension() const { return F.dimension(); }
};

ProblemInstance to_instance(const ProblemSpec& spec);

/// The Lipschitz majorant when K is declared, otherwise the Smale one.
MajorantFunction declared_majorant(const ProblemSpec& spec);

/// Every declared majorant (Lipschitz first).
std::vector<MajorantFunction> declared_majorants(const ProblemSpec& spec);

/// scalar-quadratic, affine-ncp-1d, ncp-4d, smale-2d-poly.
std::vector<ProblemSpec> builtin_problems();

/// Throws InvalidProblem for unknown names.
ProblemSpec builtin_problem(const std::string& name);

struct NcpOptions {
  Eigen::Index n = 2;
  std::uint64_t seed = 0;
  Vector x_star;
  std::vector<Eigen::Index> active_set; ///< zero-based indices with x*_i = 0 and F_i(x*) > 0
  double alpha = 0.5;                   ///< phi_i(x) = alpha x_i^2 / 2; 0 gives an affine problem
  double kappa = 1.0;
  std::string name = "ncp";
};

/// F(x) = M x + q + phi(x) with M = Q D Q^T, D uniform in [1, 10], and q chosen so
/// F_i(x*) = 0 off the active set and F_i(x*) = 1 on it; T = N_{R^n_+}. The
/// declared K is the grid-measured Lipschitz constant rounded up by 5%.
ProblemSpec make_ncp(const NcpOptions& opt);

/// sup of ||sym F'(x*)^{-1}|| ||F'(x) - F'(x* + tau (x - x*))|| / ((1 - tau) ||x - x*||)
/// over rays (+-axes and `random_directions` seeded directions) in B(x*, kappa).
double measure_lipschitz_constant(const SmoothMap& F, const Vector& xstar, double kappa,
                                  std::size_t random_directions = 16, std::uint64_t seed = 0);

nlohmann::json to_json(const ProblemSpec& spec);

/// Strict parse: unknown keys and shape errors throw InvalidProblem.
ProblemSpec problem_from_json(const nlohmann::json& j);

} // namespace gnewton
