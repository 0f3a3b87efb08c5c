#include "gnewton/majorant.hpp"

#include "gnewton/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gnewton {

namespace {

constexpr std::size_t kGridPoints = 1024;
constexpr double kBisectTol = 1e-13;
constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void validate_custom(const CustomMajorant& c) {
  if (!c.f || !c.df || !c.d2f) throw InvalidMajorant("custom majorant: f, f' and f'' are required");
  if (!(c.R > 0.0) || !std::isfinite(c.R)) {
    throw InvalidMajorant("custom majorant: R must be finite and > 0");
  }
  if (std::abs(c.f(0.0)) > 1e-12) throw InvalidMajorant("custom majorant: f(0) = " + fmt(c.f(0.0)) + " != 0");
  if (std::abs(c.df(0.0) + 1.0) > 1e-12) {
    throw InvalidMajorant("custom majorant: f'(0) = " + fmt(c.df(0.0)) + " != -1");
  }
  std::vector<double> d(kGridPoints);
  for (std::size_t i = 0; i < kGridPoints; ++i) {
    const double t = c.R * static_cast<double>(i) / static_cast<double>(kGridPoints);
    d[i] = c.df(t);
    if (!std::isfinite(d[i]) || !std::isfinite(c.f(t)) || !std::isfinite(c.d2f(t))) {
      throw InvalidMajorant("custom majorant: non-finite value at t = " + fmt(t));
    }
    if (i > 0 && !(d[i] > d[i - 1])) {
      throw InvalidMajorant("custom majorant: f' not strictly increasing near t = " + fmt(t));
    }
  }
  for (std::size_t i = 1; i + 1 < kGridPoints; ++i) {
    const double chord = 0.5 * (d[i - 1] + d[i + 1]);
    if (d[i] > chord + 1e-12 * (1.0 + std::abs(chord))) {
      const double t = c.R * static_cast<double>(i) / static_cast<double>(kGridPoints);
      throw InvalidMajorant("custom majorant: f' not convex near t = " + fmt(t));
    }
  }
}

void require_in_domain(const MajorantFunction& f, double t, const char* what) {
  if (!(t >= 0.0) || !(t < f.domain_end())) {
    throw DomainError(std::string(what) + ": t = " + fmt(t) + " outside [0, " + fmt(f.domain_end()) + ")");
  }
}

// Largest point b of [lo, hi] such that pred holds on [lo, b): pred(lo) true, pred(hi) false.
template <class Pred>
double bisect_boundary(double lo, double hi, Pred pred) {
  for (int it = 0; it < 400 && hi - lo > kBisectTol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (pred(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Scans a uniform grid of [lo, cap) for the first point where pred fails and bisects
// the bracket; returns cap when pred holds on the whole grid and just below cap.
template <class Pred>
double sup_where(double lo, double cap, Pred pred, int* sign_changes = nullptr) {
  double prev = lo;
  bool prev_ok = true;
  double first_fail = -1.0;
  double first_ok_before = lo;
  int changes = 0;
  for (std::size_t i = 1; i <= kGridPoints; ++i) {
    const double t = i == kGridPoints ? cap * (1.0 - 1e-12) + lo * 1e-12
                                      : lo + (cap - lo) * static_cast<double>(i) / static_cast<double>(kGridPoints);
    const bool ok = pred(t);
    if (ok != prev_ok) ++changes;
    if (!ok && first_fail < 0.0) {
      first_fail = t;
      first_ok_before = prev;
    }
    prev = t;
    prev_ok = ok;
  }
  if (sign_changes != nullptr) *sign_changes = changes;
  if (first_fail < 0.0) return cap;
  return bisect_boundary(first_ok_before, first_fail, pred);
}

} // namespace

MajorantFunction MajorantFunction::lipschitz(double K) {
  if (!(K > 0.0) || !std::isfinite(K)) throw InvalidMajorant("Lipschitz majorant: K must be finite and > 0");
  return MajorantFunction(LipschitzMajorant{K});
}

MajorantFunction MajorantFunction::smale(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw InvalidMajorant("Smale majorant: gamma must be finite and > 0");
  }
  return MajorantFunction(SmaleMajorant{gamma});
}

MajorantFunction MajorantFunction::custom(CustomMajorant c) {
  validate_custom(c);
  return MajorantFunction(std::move(c));
}

MajorantFunction MajorantFunction::polynomial(std::vector<double> coeffs, double R) {
  CustomMajorant c;
  c.name = "polynomial";
  c.f = [coeffs](double t) { return polynomial_value(coeffs, t, 0); };
  c.df = [coeffs](double t) { return polynomial_value(coeffs, t, 1); };
  c.d2f = [coeffs](double t) { return polynomial_value(coeffs, t, 2); };
  c.R = R;
  c.coefficients = std::move(coeffs);
  return custom(std::move(c));
}

std::string MajorantFunction::name() const {
  return std::visit(Overloaded{[](const LipschitzMajorant& m) { return "lipschitz(K=" + fmt(m.K) + ")"; },
                               [](const SmaleMajorant& m) { return "smale(gamma=" + fmt(m.gamma) + ")"; },
                               [](const CustomMajorant& m) { return "custom(" + m.name + ")"; }},
                    kind_);
}

double MajorantFunction::domain_end() const {
  return std::visit(Overloaded{[](const LipschitzMajorant&) { return kInf; },
                               [](const SmaleMajorant& m) { return 1.0 / m.gamma; },
                               [](const CustomMajorant& m) { return m.R; }},
                    kind_);
}

double MajorantFunction::value(double t) const {
  require_in_domain(*this, t, "majorant value");
  return std::visit(Overloaded{[t](const LipschitzMajorant& m) { return m.K * t * t / 2.0 - t; },
                               [t](const SmaleMajorant& m) { return t / (1.0 - m.gamma * t) - 2.0 * t; },
                               [t](const CustomMajorant& m) { return m.f(t); }},
                    kind_);
}

double MajorantFunction::derivative(double t) const {
  require_in_domain(*this, t, "majorant derivative");
  return std::visit(Overloaded{[t](const LipschitzMajorant& m) { return m.K * t - 1.0; },
                               [t](const SmaleMajorant& m) {
                                 const double s = 1.0 - m.gamma * t;
                                 return 1.0 / (s * s) - 2.0;
                               },
                               [t](const CustomMajorant& m) { return m.df(t); }},
                    kind_);
}

double MajorantFunction::second_derivative(double t) const {
  require_in_domain(*this, t, "majorant second derivative");
  return std::visit(Overloaded{[](const LipschitzMajorant& m) { return m.K; },
                               [t](const SmaleMajorant& m) {
                                 const double s = 1.0 - m.gamma * t;
                                 return 2.0 * m.gamma / (s * s * s);
                               },
                               [t](const CustomMajorant& m) { return m.d2f(t); }},
                    kind_);
}

MajorantFunction MajorantFunction::as_custom(double R) const {
  if (const auto* c = std::get_if<CustomMajorant>(&kind_)) return MajorantFunction(*c);
  const double end = std::min(R, domain_end());
  CustomMajorant c;
  c.name = "wrapped " + name();
  // Copy of the closed form; calls go through value()/derivative() of the copy.
  const MajorantFunction closed = *this;
  c.f = [closed](double t) { return closed.value(t); };
  c.df = [closed](double t) { return closed.derivative(t); };
  c.d2f = [closed](double t) { return closed.second_derivative(t); };
  c.R = end;
  return custom(std::move(c));
}

double radius_ratio(const MajorantFunction& f, double t) {
  if (t < 1e-8) return f.second_derivative(0.0) * t / 2.0;
  return f.value(t) / (t * f.derivative(t)) - 1.0;
}

double newton_map(const MajorantFunction& f, double t) {
  require_in_domain(f, t, "newton_map");
  const double d = f.derivative(t);
  if (!(d < 0.0)) throw DomainError("newton_map: f'(" + fmt(t) + ") = " + fmt(d) + " is not negative");
  if (const auto* l = std::get_if<LipschitzMajorant>(&f.kind())) {
    return -(l->K / 2.0) * t * t / (1.0 - l->K * t);
  }
  if (const auto* s = std::get_if<SmaleMajorant>(&f.kind())) {
    const double u = 1.0 - s->gamma * t;
    return -s->gamma * t * t / (2.0 * u * u - 1.0);
  }
  return t - f.value(t) / d;
}

RadiusReport radii_generic(const MajorantFunction& f, double kappa) {
  if (!(kappa > 0.0)) throw DomainError("radii: kappa must be > 0");
  const double R = f.domain_end();
  if (!std::isfinite(R)) throw DomainError("radii_generic: needs a finite domain end R");
  RadiusReport rep;
  rep.kappa = kappa;
  rep.nu = sup_where(0.0, R, [&](double t) { return f.derivative(t) < 0.0; });
  rep.rho = sup_where(0.0, rep.nu, [&](double t) { return radius_ratio(f, t) < 1.0; }, &rep.rho_crossings);
  const double cap = std::min(kappa, R);
  if (cap <= rep.nu) {
    rep.sigma = cap;
  } else {
    rep.sigma = sup_where(rep.nu, cap, [&](double t) { return f.value(t) < 0.0; });
  }
  rep.r = std::min(kappa, rep.rho);
  rep.sigma_bar = std::min(rep.r, rep.sigma);
  return rep;
}

RadiusReport radii(const MajorantFunction& f, double kappa) {
  if (!(kappa > 0.0)) throw DomainError("radii: kappa must be > 0");
  RadiusReport rep;
  rep.kappa = kappa;
  if (const auto* l = std::get_if<LipschitzMajorant>(&f.kind())) {
    rep.nu = 1.0 / l->K;
    rep.rho = 2.0 / (3.0 * l->K);
    rep.sigma = std::min(kappa, 2.0 / l->K);
  } else if (const auto* s = std::get_if<SmaleMajorant>(&f.kind())) {
    rep.nu = (std::sqrt(2.0) - 1.0) / (std::sqrt(2.0) * s->gamma);
    rep.rho = (5.0 - std::sqrt(17.0)) / (4.0 * s->gamma);
    rep.sigma = std::min(kappa, 1.0 / (2.0 * s->gamma));
  } else {
    return radii_generic(f, kappa);
  }
  rep.r = std::min(kappa, rep.rho);
  rep.sigma_bar = std::min(rep.r, rep.sigma);
  rep.rho_crossings = 1;
  return rep;
}

std::vector<double> majorant_sequence(const MajorantFunction& f, double t0, std::size_t n) {
  const double rho = radii(f, kInf).rho;
  if (!(t0 > 0.0) || !(t0 < rho)) {
    throw DomainError("majorant_sequence: t0 = " + fmt(t0) + " outside (0, rho = " + fmt(rho) + ")");
  }
  std::vector<double> t;
  t.reserve(n + 1);
  t.push_back(t0);
  for (std::size_t k = 0; k < n; ++k) t.push_back(std::abs(newton_map(f, t.back())));
  return t;
}

double ratio_bound(const MajorantFunction& f, double t0) {
  const double nu = radii(f, kInf).nu;
  if (!(t0 > 0.0) || !(t0 < nu)) {
    throw DomainError("ratio_bound: t0 = " + fmt(t0) + " outside (0, nu = " + fmt(nu) + ")");
  }
  return f.second_derivative(t0) / (2.0 * std::abs(f.derivative(t0)));
}

double majorant_linearization_error(const MajorantFunction& f, double t, double u) {
  return f.value(u) - (f.value(t) + f.derivative(t) * (u - t));
}

MajorantConditionReport check_majorant_condition(const SmoothMap& F, const Vector& xstar,
                                                 const MajorantFunction& f, double kappa,
                                                 const MajorantGrid& grid, Execution exec) {
  const Eigen::Index n = F.dimension();
  if (xstar.size() != n) throw DimensionMismatch("check_majorant_condition: x* has wrong dimension");
  if (grid.radial == 0 || grid.tau < 2) throw DomainError("check_majorant_condition: grid too small");
  const double reach = std::min(kappa, f.domain_end());
  if (!(reach > 0.0) || !std::isfinite(reach)) {
    throw DomainError("check_majorant_condition: sampling radius min(kappa, R) must be finite");
  }
  const double scale = inverse_norm(symmetrize(F.jacobian(xstar)));

  std::vector<Vector> dirs;
  for (Eigen::Index i = 0; i < n; ++i) {
    dirs.push_back(Vector::Unit(n, i));
    dirs.push_back(-Vector::Unit(n, i));
  }
  for (std::size_t j = 0; j < grid.random_directions && n > 1; ++j) {
    auto rng = sample_rng(grid.seed, j);
    dirs.push_back(random_unit_vector(rng, n));
  }

  const double outer = reach * (1.0 - 1e-9);
  auto point = [&](std::size_t idx) {
    const std::size_t d = idx / grid.radial;
    const std::size_t k = idx % grid.radial;
    const double t = outer * static_cast<double>(k + 1) / static_cast<double>(grid.radial);
    return std::pair<Vector, double>(xstar + t * dirs[d], t);
  };
  auto tau_at = [&](std::size_t j) { return static_cast<double>(j) / static_cast<double>(grid.tau - 1); };
  auto sides = [&](const Vector& x, double t, const LinearOperator& jx, double tau) {
    const LinearOperator jt = F.jacobian(xstar + tau * (x - xstar));
    const double lhs = scale * operator_norm(jx - jt);
    const double rhs = f.derivative(t) - f.derivative(tau * t);
    return std::pair<double, double>(lhs, rhs);
  };

  const std::size_t count = dirs.size() * grid.radial;
  const SweepResult worst = sweep_max(
      count,
      [&](std::size_t idx) {
        const auto [x, t] = point(idx);
        const LinearOperator jx = F.jacobian(x);
        double v = -kInf;
        for (std::size_t j = 0; j < grid.tau; ++j) {
          const auto [lhs, rhs] = sides(x, t, jx, tau_at(j));
          v = std::max(v, lhs - rhs);
        }
        return v;
      },
      exec);

  MajorantConditionReport rep;
  rep.samples = count * grid.tau;
  const auto [x, t] = point(worst.index);
  const LinearOperator jx = F.jacobian(x);
  for (std::size_t j = 0; j < grid.tau; ++j) {
    const auto [lhs, rhs] = sides(x, t, jx, tau_at(j));
    if (lhs - rhs > rep.max_violation) {
      rep.max_violation = lhs - rhs;
      rep.worst_tau = tau_at(j);
      rep.worst_lhs = lhs;
      rep.worst_rhs = rhs;
    }
  }
  rep.worst_x = x;
  return rep;
}

double gamma_estimate_1d(const SmoothMap& F, const Vector& xstar, int nmax) {
  const auto& poly = F.polynomial();
  if (F.dimension() != 1 || !poly) {
    throw Unsupported("gamma_estimate_1d: needs a scalar polynomial map; supply gamma directly");
  }
  if (xstar.size() != 1) throw DimensionMismatch("gamma_estimate_1d: x* must be scalar");
  const std::vector<double> terms = poly->terms.empty() ? std::vector<double>{} : poly->terms[0];
  int degree = 1;
  for (std::size_t k = terms.size(); k-- > 2;) {
    if (terms[k] != 0.0) {
      degree = static_cast<int>(k);
      break;
    }
  }
  if (nmax < degree) {
    throw DomainError("gamma_estimate_1d: nmax = " + std::to_string(nmax) + " below degree " +
                      std::to_string(degree));
  }
  const double scale = inverse_norm(symmetrize(F.jacobian(xstar)));
  const double x = xstar(0);
  double best = 0.0;
  double factorial = 1.0;
  for (int k = 2; k <= nmax; ++k) {
    factorial *= k;
    const double coef = std::abs(polynomial_value(terms, x, k)) / factorial;
    if (coef > 0.0) best = std::max(best, std::pow(coef, 1.0 / static_cast<double>(k - 1)));
  }
  return scale * best;
}

} // namespace gnewton
