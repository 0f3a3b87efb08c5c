#include "gnewton/sweep.hpp"

#include <cmath>
#include <exception>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gnewton {

namespace {

enum class Direction { Max, Min };

// True if (a, ia) should replace (b, ib) as the running extreme.
bool better(Direction dir, double a, std::size_t ia, double b, std::size_t ib) {
  const bool a_nan = std::isnan(a);
  const bool b_nan = std::isnan(b);
  if (a_nan || b_nan) {
    if (a_nan && b_nan) return ia < ib;
    return a_nan;
  }
  if (a == b) return ia < ib;
  return dir == Direction::Max ? a > b : a < b;
}

SweepResult serial_sweep(Direction dir, std::size_t count, const SampleFn& fn) {
  SweepResult best;
  for (std::size_t i = 0; i < count; ++i) {
    const double v = fn(i);
    if (best.empty || better(dir, v, i, best.value, best.index)) {
      best.value = v;
      best.index = i;
      best.empty = false;
    }
  }
  return best;
}

SweepResult parallel_sweep(Direction dir, std::size_t count, const SampleFn& fn) {
  SweepResult best;
  std::exception_ptr failure;
  std::size_t failure_index = std::numeric_limits<std::size_t>::max();
  const auto n = static_cast<long long>(count);

#pragma omp parallel
  {
    SweepResult local;
    std::exception_ptr local_failure;
    std::size_t local_failure_index = std::numeric_limits<std::size_t>::max();

#pragma omp for schedule(dynamic, 16) nowait
    for (long long k = 0; k < n; ++k) {
      const auto i = static_cast<std::size_t>(k);
      if (i > local_failure_index) continue;
      try {
        const double v = fn(i);
        if (local.empty || better(dir, v, i, local.value, local.index)) {
          local.value = v;
          local.index = i;
          local.empty = false;
        }
      } catch (...) {
        local_failure = std::current_exception();
        local_failure_index = i;
      }
    }

#pragma omp critical(gnewton_sweep_merge)
    {
      if (local_failure && local_failure_index < failure_index) {
        failure = local_failure;
        failure_index = local_failure_index;
      }
      if (!local.empty && (best.empty || better(dir, local.value, local.index, best.value, best.index))) {
        best = local;
      }
    }
  }

  if (failure) std::rethrow_exception(failure);
  return best;
}

} // namespace

std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

Vector random_unit_vector(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(n);
  do {
    for (Eigen::Index i = 0; i < n; ++i) v(i) = gauss(rng);
  } while (v.norm() < 1e-12);
  return v / v.norm();
}

Vector random_in_ball(std::mt19937_64& rng, const Vector& center, double radius) {
  const Eigen::Index n = center.size();
  const Vector dir = random_unit_vector(rng, n);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double s = radius * std::pow(unit(rng), 1.0 / static_cast<double>(n));
  return center + s * dir;
}

LinearOperator random_orthogonal(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  LinearOperator g(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) g(i, j) = gauss(rng);
  }
  Eigen::HouseholderQR<LinearOperator> qr(g);
  LinearOperator q = qr.householderQ();
  // Sign convention R_ii > 0 makes Q Haar distributed.
  const LinearOperator r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (r(i, i) < 0.0) q.col(i) = -q.col(i);
  }
  return q;
}

LinearOperator random_spd(std::mt19937_64& rng, Eigen::Index n, double lo, double hi) {
  std::uniform_real_distribution<double> spectrum(lo, hi);
  const LinearOperator q = random_orthogonal(rng, n);
  Vector d(n);
  for (Eigen::Index i = 0; i < n; ++i) d(i) = spectrum(rng);
  return symmetrize(q * d.asDiagonal() * q.transpose());
}

namespace serial {
SweepResult sweep_max(std::size_t count, const SampleFn& fn) { return serial_sweep(Direction::Max, count, fn); }
SweepResult sweep_min(std::size_t count, const SampleFn& fn) { return serial_sweep(Direction::Min, count, fn); }
} // namespace serial

namespace parallel {
SweepResult sweep_max(std::size_t count, const SampleFn& fn) { return parallel_sweep(Direction::Max, count, fn); }
SweepResult sweep_min(std::size_t count, const SampleFn& fn) { return parallel_sweep(Direction::Min, count, fn); }
} // namespace parallel

SweepResult sweep_max(std::size_t count, const SampleFn& fn, Execution exec) {
  return exec == Execution::Parallel ? parallel::sweep_max(count, fn) : serial::sweep_max(count, fn);
}

SweepResult sweep_min(std::size_t count, const SampleFn& fn, Execution exec) {
  return exec == Execution::Parallel ? parallel::sweep_min(count, fn) : serial::sweep_min(count, fn);
}

int sweep_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

} // namespace gnewton
