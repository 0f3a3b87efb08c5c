#pragma once

// Sample sweeps: evaluate an index-addressed sample function over [0, count)
// and reduce to the extreme value. The parallel kernel runs the loop under
// OpenMP; the serial kernel is the reference it is tested against. Both return
// bit-identical results because every sample derives its randomness from
// (seed, index) and ties break toward the lowest index.

#include "gnewton/hilbert.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

namespace gnewton {

enum class Execution { Serial, Parallel };

using SampleFn = std::function<double(std::size_t index)>;

struct SweepResult {
  double value = 0.0;     ///< extreme value; NaN samples win so they are never hidden
  std::size_t index = 0;  ///< lowest index attaining it
  bool empty = true;      ///< count was zero
};

/// Independent generator for sample `index` of a sweep seeded with `seed`.
std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t index);

/// Uniform on the unit sphere of R^n.
Vector random_unit_vector(std::mt19937_64& rng, Eigen::Index n);

/// Uniform in the closed ball B[center, radius].
Vector random_in_ball(std::mt19937_64& rng, const Vector& center, double radius);

/// Haar-distributed orthogonal matrix.
LinearOperator random_orthogonal(std::mt19937_64& rng, Eigen::Index n);

/// Q diag(d) Q^T with d uniform in [lo, hi] and Q = random_orthogonal.
LinearOperator random_spd(std::mt19937_64& rng, Eigen::Index n, double lo, double hi);

namespace serial {
SweepResult sweep_max(std::size_t count, const SampleFn& fn);
SweepResult sweep_min(std::size_t count, const SampleFn& fn);
} // namespace serial

namespace parallel {
SweepResult sweep_max(std::size_t count, const SampleFn& fn);
SweepResult sweep_min(std::size_t count, const SampleFn& fn);
} // namespace parallel

SweepResult sweep_max(std::size_t count, const SampleFn& fn, Execution exec);
SweepResult sweep_min(std::size_t count, const SampleFn& fn, Execution exec);

/// Number of OpenMP threads the parallel kernels will use.
int sweep_threads();

} // namespace gnewton
