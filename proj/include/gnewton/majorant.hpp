#pragma once

// Majorant functions f for the local analysis of Newton's method on
// F(x) + T(x) \ni 0: the scalar Newton map n_f, the convergence and uniqueness
// radii, the scalar error sequence t_k and the rate bounds it induces. The
// Lipschitz and Smale majorants have closed forms; any other admissible f goes
// through the generic root-finding path.

#include "gnewton/hilbert.hpp"
#include "gnewton/smooth_map.hpp"
#include "gnewton/sweep.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace gnewton {

/// f(t) = K t^2 / 2 - t on [0, inf).
struct LipschitzMajorant {
  double K = 1.0;
};

/// f(t) = t / (1 - gamma t) - 2 t on [0, 1/gamma).
struct SmaleMajorant {
  double gamma = 1.0;
};

/// User-supplied f with its first two derivatives on [0, R).
struct CustomMajorant {
  std::string name;
  std::function<double(double)> f;
  std::function<double(double)> df;
  std::function<double(double)> d2f;
  double R = 0.0;
  std::optional<std::vector<double>> coefficients; ///< set when f is a polynomial
};

class MajorantFunction {
public:
  using Kind = std::variant<LipschitzMajorant, SmaleMajorant, CustomMajorant>;

  static MajorantFunction lipschitz(double K);
  static MajorantFunction smale(double gamma);
  /// Validates f(0) = 0, f'(0) = -1 and that f' is strictly increasing and
  /// convex on a 1024-point grid of [0, R). Throws InvalidMajorant.
  static MajorantFunction custom(CustomMajorant c);
  /// Polynomial f(t) = sum c_k t^k on [0, R).
  static MajorantFunction polynomial(std::vector<double> coeffs, double R);

  const Kind& kind() const { return kind_; }
  bool is_closed_form() const { return !std::holds_alternative<CustomMajorant>(kind_); }
  std::string name() const;

  double domain_end() const;
  double value(double t) const;
  double derivative(double t) const;
  double second_derivative(double t) const;

  /// Same scalar function routed through the generic (Custom) machinery.
  /// Requires a finite domain end, so the Lipschitz case is truncated at R.
  MajorantFunction as_custom(double R) const;

private:
  explicit MajorantFunction(Kind k) : kind_(std::move(k)) {}

  Kind kind_;
};

struct RadiusReport {
  double nu = 0.0;
  double rho = 0.0;
  double sigma = 0.0;
  double kappa = 0.0;
  double r = 0.0;
  double sigma_bar = 0.0;
  /// Sign changes of phi - 1 seen on the (0, nu) grid. More than one means the
  /// single-crossing assumption behind the rho bisection failed.
  int rho_crossings = 0;
};

/// phi(t) = f(t) / (t f'(t)) - 1, with phi(t) = f''(0) t / 2 below t = 1e-8.
double radius_ratio(const MajorantFunction& f, double t);

/// n_f(t) = t - f(t)/f'(t) <= 0. Throws DomainError when f'(t) >= 0 or t outside [0, R).
double newton_map(const MajorantFunction& f, double t);

RadiusReport radii(const MajorantFunction& f, double kappa);

/// Root-finding path for any admissible f; closed forms are never consulted.
RadiusReport radii_generic(const MajorantFunction& f, double kappa);

/// t_0, ..., t_n with t_{k+1} = |n_f(t_k)|. Throws DomainError unless 0 < t0 < rho.
/// A term that underflows to zero stays zero.
std::vector<double> majorant_sequence(const MajorantFunction& f, double t0, std::size_t n);

/// f''(t0) / (2 |f'(t0)|) for 0 < t0 < nu.
double ratio_bound(const MajorantFunction& f, double t0);

/// e_f(t, u) = f(u) - [f(t) + f'(t)(u - t)].
double majorant_linearization_error(const MajorantFunction& f, double t, double u);

struct MajorantGrid {
  std::size_t radial = 20;
  std::size_t tau = 20;
  std::size_t random_directions = 8; ///< on top of the +-coordinate axes
  std::uint64_t seed = 0;
};

struct MajorantConditionReport {
  double max_violation = -std::numeric_limits<double>::infinity();
  Vector worst_x;
  double worst_tau = 0.0;
  double worst_lhs = 0.0;
  double worst_rhs = 0.0;
  std::size_t samples = 0;
};

/// Evaluates ||sym(F'(x*))^-1|| ||F'(x) - F'(x* + tau (x - x*))|| against
/// f'(||x - x*||) - f'(tau ||x - x*||) over x on rays from x* inside
/// B(x*, min(kappa, R)) and tau on a uniform grid of [0, 1].
MajorantConditionReport check_majorant_condition(const SmoothMap& F, const Vector& xstar,
                                                 const MajorantFunction& f, double kappa,
                                                 const MajorantGrid& grid = {},
                                                 Execution exec = Execution::Parallel);

/// Smale constant ||sym(F'(x*))^-1|| max_{2<=n<=nmax} (|F^(n)(x*)| / n!)^(1/(n-1)) for a
/// scalar polynomial map. Throws Unsupported for anything else.
double gamma_estimate_1d(const SmoothMap& F, const Vector& xstar, int nmax);

} // namespace gnewton
