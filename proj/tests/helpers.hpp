#pragma once

#include "gnewton/newton.hpp"
#include "gnewton/problems.hpp"

#include <filesystem>
#include <initializer_list>
#include <string>

namespace testing {

inline gnewton::Vector vec(std::initializer_list<double> v) {
  gnewton::Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

inline gnewton::LinearOperator mat(std::initializer_list<std::initializer_list<double>> rows) {
  gnewton::LinearOperator out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (double x : r) out(i, j++) = x;
    ++i;
  }
  return out;
}

inline gnewton::ProblemInstance builtin(const std::string& name) {
  return gnewton::to_instance(gnewton::builtin_problem(name));
}

/// F(x) = x^3 - 1 style scalar maps: coefficients in powers of x, T = 0.
inline gnewton::ProblemInstance scalar_polynomial(std::vector<double> coeffs, double xstar, double kappa) {
  gnewton::SeparablePolynomialSystem sys;
  sys.M = gnewton::LinearOperator::Zero(1, 1);
  sys.q = gnewton::Vector::Zero(1);
  sys.terms = {std::move(coeffs)};
  return {"scalar", gnewton::SmoothMap::from_polynomial(sys), gnewton::MonotoneOperator::zero(1), kappa,
          gnewton::Vector::Constant(1, xstar)};
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() / ("gnewton-test-" + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

} // namespace testing
