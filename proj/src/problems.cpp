#include "gnewton/problems.hpp"

#include "gnewton/errors.hpp"
#include "gnewton/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace gnewton {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Coefficients of a (u - c)^2 + b (u - c)^3 in powers of u.
std::vector<double> shifted_quadratic_cubic(double a, double b, double c) {
  return {a * c * c - b * c * c * c, -2.0 * a * c + 3.0 * b * c * c, a - 3.0 * b * c, b};
}

ProblemSpec scalar_quadratic() {
  ProblemSpec s;
  s.name = "scalar-quadratic";
  s.F.M = LinearOperator::Zero(1, 1);
  s.F.q = Vector::Constant(1, -1.0);
  s.F.terms = {{0.0, 0.0, 1.0}};
  s.T = MonotoneOperator::zero(1);
  s.x_star = Vector::Constant(1, 1.0);
  // ||F'(1)^-1|| = 1/2 and F'' = 2.
  s.majorant.K = 1.0;
  s.majorant.gamma = 0.5;
  s.kappa = 10.0;
  return s;
}

ProblemSpec affine_ncp_1d() {
  ProblemSpec s;
  s.name = "affine-ncp-1d";
  s.F.M = LinearOperator::Constant(1, 1, 1.0);
  s.F.q = Vector::Constant(1, 1.0);
  s.T = MonotoneOperator::nonnegative_orthant(1);
  s.x_star = Vector::Zero(1);
  // F' is constant, so any K > 0 satisfies the Lipschitz condition.
  s.majorant.K = 1.0;
  s.kappa = 10.0;
  return s;
}

ProblemSpec smale_2d_poly() {
  ProblemSpec s;
  s.name = "smale-2d-poly";
  Vector xs(2);
  xs << 1.0, -0.5;
  LinearOperator a(2, 2);
  a << 1.0, 0.5, -0.5, 1.5;
  s.F.M = a;
  s.F.q = -a * xs;
  s.F.terms = {shifted_quadratic_cubic(0.5, 0.2, xs(0)), shifted_quadratic_cubic(0.25, 0.1, xs(1))};
  s.T = MonotoneOperator::zero(2);
  s.x_star = xs;
  // sym F'(x*) = diag(1, 1.5), so ||sym F'(x*)^-1|| = 1; the multilinear terms are
  // diagonal with norms max|a_i| = 0.5 and max|b_i| = 0.2, giving
  // gamma = max(0.5, sqrt(0.2)) = 0.5.
  s.majorant.gamma = 0.5;
  s.kappa = 1.5;
  return s;
}

std::vector<double> vec_from_json(const json& j, const char* what) {
  if (!j.is_array()) throw InvalidProblem(std::string(what) + " must be an array");
  std::vector<double> v;
  for (const auto& e : j) {
    if (!e.is_number()) throw InvalidProblem(std::string(what) + " must contain numbers");
    v.push_back(e.get<double>());
  }
  return v;
}

Vector vector_from_json(const json& j, const char* what) {
  const auto v = vec_from_json(j, what);
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// Box bounds: null encodes an infinite side.
Vector bound_from_json(const json& j, double infinite, const char* what) {
  if (!j.is_array()) throw InvalidProblem(std::string(what) + " must be an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (j[i].is_null()) {
      v(static_cast<Eigen::Index>(i)) = infinite;
    } else if (j[i].is_number()) {
      v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    } else {
      throw InvalidProblem(std::string(what) + " entries must be numbers or null");
    }
  }
  return v;
}

json bound_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::isinf(v(i))) {
      out.push_back(nullptr);
    } else {
      out.push_back(v(i));
    }
  }
  return out;
}

json vector_to_json(const Vector& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const char* what) {
  if (!j.is_object()) throw InvalidProblem(std::string(what) + " must be an object");
  for (const auto& [key, value] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw InvalidProblem(std::string(what) + ": unknown key '" + key + "'");
    }
  }
}

const json& required(const json& j, const char* key, const char* what) {
  if (!j.contains(key)) throw InvalidProblem(std::string(what) + ": missing key '" + key + "'");
  return j.at(key);
}

} // namespace

ProblemInstance to_instance(const ProblemSpec& spec) {
  if (spec.T.dimension() != spec.dimension()) throw InvalidProblem(spec.name + ": F and T dimensions differ");
  if (!(spec.kappa > 0.0)) throw InvalidProblem(spec.name + ": kappa must be > 0");
  return ProblemInstance{spec.name, SmoothMap::from_polynomial(spec.F), spec.T, spec.kappa, spec.x_star};
}

MajorantFunction declared_majorant(const ProblemSpec& spec) {
  if (spec.majorant.K) return MajorantFunction::lipschitz(*spec.majorant.K);
  if (spec.majorant.gamma) return MajorantFunction::smale(*spec.majorant.gamma);
  throw InvalidProblem(spec.name + ": no majorant parameters declared");
}

std::vector<MajorantFunction> declared_majorants(const ProblemSpec& spec) {
  std::vector<MajorantFunction> out;
  if (spec.majorant.K) out.push_back(MajorantFunction::lipschitz(*spec.majorant.K));
  if (spec.majorant.gamma) out.push_back(MajorantFunction::smale(*spec.majorant.gamma));
  return out;
}

std::vector<ProblemSpec> builtin_problems() {
  NcpOptions ncp;
  ncp.n = 4;
  ncp.seed = 7;
  ncp.x_star = Vector(4);
  ncp.x_star << 1.0, 0.0, 0.5, 0.0;
  ncp.active_set = {1, 3};
  ncp.alpha = 0.5;
  ncp.kappa = 3.0;
  ncp.name = "ncp-4d";
  return {scalar_quadratic(), affine_ncp_1d(), make_ncp(ncp), smale_2d_poly()};
}

ProblemSpec builtin_problem(const std::string& name) {
  for (auto& p : builtin_problems()) {
    if (p.name == name) return p;
  }
  throw InvalidProblem("unknown built-in problem '" + name + "'");
}

double measure_lipschitz_constant(const SmoothMap& F, const Vector& xstar, double kappa,
                                  std::size_t random_directions, std::uint64_t seed) {
  const Eigen::Index n = F.dimension();
  const double scale = inverse_norm(symmetrize(F.jacobian(xstar)));
  std::vector<Vector> dirs;
  for (Eigen::Index i = 0; i < n; ++i) {
    dirs.push_back(Vector::Unit(n, i));
    dirs.push_back(-Vector::Unit(n, i));
  }
  for (std::size_t j = 0; j < random_directions && n > 1; ++j) {
    auto rng = sample_rng(seed, j);
    dirs.push_back(random_unit_vector(rng, n));
  }
  constexpr std::size_t kRadial = 20;
  constexpr std::size_t kTau = 20;
  double best = 0.0;
  for (const auto& d : dirs) {
    for (std::size_t k = 1; k <= kRadial; ++k) {
      const double t = kappa * (1.0 - 1e-9) * static_cast<double>(k) / static_cast<double>(kRadial);
      const Vector x = xstar + t * d;
      const LinearOperator jx = F.jacobian(x);
      for (std::size_t m = 0; m + 1 < kTau; ++m) {
        const double tau = static_cast<double>(m) / static_cast<double>(kTau - 1);
        const LinearOperator jt = F.jacobian(xstar + tau * (x - xstar));
        best = std::max(best, scale * operator_norm(jx - jt) / ((1.0 - tau) * t));
      }
    }
  }
  return best;
}

ProblemSpec make_ncp(const NcpOptions& opt) {
  const Eigen::Index n = opt.n;
  if (n < 1) throw InvalidProblem("make_ncp: dimension must be >= 1");
  if (opt.x_star.size() != n) throw InvalidProblem("make_ncp: x* must have dimension n");
  if (!(opt.alpha >= 0.0) || !(opt.kappa > 0.0)) throw InvalidProblem("make_ncp: need alpha >= 0 and kappa > 0");
  std::set<Eigen::Index> active;
  for (auto i : opt.active_set) {
    if (i < 0 || i >= n) throw InvalidProblem("make_ncp: active index out of range");
    if (!active.insert(i).second) throw InvalidProblem("make_ncp: duplicate active index");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const bool is_active = active.count(i) > 0;
    if (is_active && opt.x_star(i) != 0.0) {
      throw InvalidProblem("make_ncp: active component " + std::to_string(i) + " must have x*_i = 0");
    }
    if (!is_active && !(opt.x_star(i) > 0.0)) {
      throw InvalidProblem("make_ncp: inactive component " + std::to_string(i) + " must have x*_i > 0");
    }
  }

  std::mt19937_64 rng(opt.seed);
  ProblemSpec s;
  s.name = opt.name;
  s.F.M = random_spd(rng, n, 1.0, 10.0);
  s.F.terms.assign(static_cast<std::size_t>(n), std::vector<double>{0.0, 0.0, opt.alpha / 2.0});
  Vector target = Vector::Zero(n);
  for (auto i : active) target(i) = 1.0;
  Vector phi(n);
  for (Eigen::Index i = 0; i < n; ++i) phi(i) = polynomial_value(s.F.terms[static_cast<std::size_t>(i)], opt.x_star(i));
  s.F.q = target - s.F.M * opt.x_star - phi;
  s.T = MonotoneOperator::nonnegative_orthant(n);
  s.x_star = opt.x_star;
  s.kappa = opt.kappa;

  const SmoothMap F = SmoothMap::from_polynomial(s.F);
  const double measured = measure_lipschitz_constant(F, opt.x_star, opt.kappa, 16, opt.seed);
  // F' constant: every K > 0 is admissible, 1 keeps the radii finite and readable.
  s.majorant.K = measured > 0.0 ? 1.05 * measured : 1.0;
  return s;
}

json to_json(const ProblemSpec& spec) {
  json j;
  j["name"] = spec.name;
  j["dimension"] = spec.dimension();
  json f;
  json rows = json::array();
  for (Eigen::Index i = 0; i < spec.F.M.rows(); ++i) rows.push_back(vector_to_json(spec.F.M.row(i).transpose()));
  f["M"] = rows;
  f["q"] = vector_to_json(spec.F.q);
  f["terms"] = spec.F.terms;
  j["F"] = f;

  json t;
  const auto& kind = spec.T.kind();
  if (std::holds_alternative<ZeroOperator>(kind)) {
    t["kind"] = "zero";
  } else if (const auto* box = std::get_if<NormalConeBox>(&kind)) {
    t["kind"] = "box";
    t["lower"] = bound_to_json(box->lower);
    t["upper"] = bound_to_json(box->upper);
  } else if (const auto* l1 = std::get_if<L1Subdifferential>(&kind)) {
    t["kind"] = "l1";
    t["weight"] = l1->weight;
  } else {
    throw InvalidProblem(spec.name + ": custom resolvents cannot be serialized");
  }
  j["T"] = t;
  if (spec.x_star) j["x_star"] = vector_to_json(*spec.x_star);
  json m = json::object();
  if (spec.majorant.K) m["K"] = *spec.majorant.K;
  if (spec.majorant.gamma) m["gamma"] = *spec.majorant.gamma;
  j["majorant"] = m;
  j["kappa"] = spec.kappa;
  return j;
}

ProblemSpec problem_from_json(const json& j) {
  reject_unknown(j, {"name", "dimension", "F", "T", "x_star", "majorant", "kappa"}, "problem");
  ProblemSpec s;
  s.name = j.value("name", std::string("inline"));
  const json& f = required(j, "F", "problem");
  reject_unknown(f, {"M", "q", "terms"}, "problem.F");
  const Vector q = vector_from_json(required(f, "q", "problem.F"), "problem.F.q");
  const Eigen::Index n = q.size();
  if (n < 1) throw InvalidProblem("problem.F.q must be non-empty");
  if (j.contains("dimension") && j.at("dimension") != n) throw InvalidProblem("problem.dimension disagrees with F.q");
  const json& rows = required(f, "M", "problem.F");
  if (!rows.is_array() || rows.size() != static_cast<std::size_t>(n)) {
    throw InvalidProblem("problem.F.M must have one row per component");
  }
  s.F.M = LinearOperator(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vector row = vector_from_json(rows[static_cast<std::size_t>(i)], "problem.F.M row");
    if (row.size() != n) throw InvalidProblem("problem.F.M must be square");
    s.F.M.row(i) = row.transpose();
  }
  s.F.q = q;
  if (f.contains("terms")) {
    const json& terms = f.at("terms");
    if (!terms.is_array()) throw InvalidProblem("problem.F.terms must be an array");
    for (const auto& t : terms) s.F.terms.push_back(vec_from_json(t, "problem.F.terms entry"));
  }
  try {
    s.F.validate();
  } catch (const Error& e) {
    throw InvalidProblem(std::string("problem.F: ") + e.what());
  }

  const json& t = required(j, "T", "problem");
  const std::string kind = required(t, "kind", "problem.T").get<std::string>();
  if (kind == "zero") {
    reject_unknown(t, {"kind"}, "problem.T");
    s.T = MonotoneOperator::zero(n);
  } else if (kind == "box") {
    reject_unknown(t, {"kind", "lower", "upper"}, "problem.T");
    s.T = MonotoneOperator::box(bound_from_json(required(t, "lower", "problem.T"), -kInf, "problem.T.lower"),
                                bound_from_json(required(t, "upper", "problem.T"), kInf, "problem.T.upper"));
  } else if (kind == "l1") {
    reject_unknown(t, {"kind", "weight"}, "problem.T");
    s.T = MonotoneOperator::l1(n, required(t, "weight", "problem.T").get<double>());
  } else {
    throw InvalidProblem("problem.T.kind must be zero, box or l1");
  }
  if (s.T.dimension() != n) throw InvalidProblem("problem.T dimension disagrees with F");

  if (j.contains("x_star")) {
    s.x_star = vector_from_json(j.at("x_star"), "problem.x_star");
    if (s.x_star->size() != n) throw InvalidProblem("problem.x_star has wrong dimension");
  }
  if (j.contains("majorant")) {
    const json& m = j.at("majorant");
    reject_unknown(m, {"K", "gamma"}, "problem.majorant");
    if (m.contains("K")) s.majorant.K = m.at("K").get<double>();
    if (m.contains("gamma")) s.majorant.gamma = m.at("gamma").get<double>();
  }
  s.kappa = required(j, "kappa", "problem").get<double>();
  if (!(s.kappa > 0.0)) throw InvalidProblem("problem.kappa must be > 0");
  return s;
}

} // namespace gnewton
