// Serial reference vs OpenMP kernels on the sample-sweep workloads.
//
//   bench_sweeps [repeats]

#include "gnewton/lemmas.hpp"
#include "gnewton/majorant.hpp"
#include "gnewton/newton.hpp"
#include "gnewton/problems.hpp"
#include "gnewton/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

using namespace gnewton;

namespace {

struct Workload {
  std::string name;
  std::function<double(Execution)> run; ///< returns a checksum that must not depend on execution
};

double best_of(int repeats, const std::function<double(Execution)>& fn, Execution exec, double* checksum) {
  double best = 1e300;
  for (int i = 0; i < repeats; ++i) {
    const auto start = std::chrono::steady_clock::now();
    *checksum = fn(exec);
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  }
  return best;
}

} // namespace

int main(int argc, char** argv) {
  const int repeats = argc > 1 ? std::max(1, std::atoi(argv[1])) : 3;

  const ProblemSpec ncp = builtin_problem("ncp-4d");
  const ProblemInstance ncp_p = to_instance(ncp);
  const MajorantFunction ncp_f = declared_majorant(ncp);
  const ProblemSpec smale = builtin_problem("smale-2d-poly");
  const ProblemInstance smale_p = to_instance(smale);
  const MajorantFunction smale_f = declared_majorant(smale);

  const std::vector<Workload> workloads{
      {"uniqueness ncp-4d (1e5 samples)",
       [&](Execution e) {
         UniquenessOptions o;
         o.samples = 100'000;
         return check_uniqueness(ncp_p, ncp_f, o, e).min_residual;
       }},
      {"majorant condition smale-2d (64 dirs, 80x80)",
       [&](Execution e) {
         MajorantGrid g;
         g.radial = 80;
         g.tau = 80;
         g.random_directions = 60;
         return check_majorant_condition(smale_p.F, *smale_p.known_solution, smale_f, smale_p.kappa, g, e)
             .max_violation;
       }},
      {"basin ncp-4d (64 directions)",
       [&](Execution e) {
         BasinOptions o;
         o.directions = 64;
         o.r_max = ncp.kappa;
         return empirical_radius(ncp_p, o, e).min_radius;
       }},
      {"newton-step contraction ncp-4d (2e4 samples)",
       [&](Execution e) { return sweep_newton_step_contraction(ncp_p, ncp_f, 20'000, 1, e).max_violation; }},
  };

  std::printf("threads: %d, best of %d\n", sweep_threads(), repeats);
  std::printf("%-46s %12s %12s %8s %s\n", "workload", "serial [s]", "parallel [s]", "speedup", "match");
  bool all_match = true;
  for (const auto& w : workloads) {
    double serial_sum = 0.0;
    double parallel_sum = 0.0;
    const double ts = best_of(repeats, w.run, Execution::Serial, &serial_sum);
    const double tp = best_of(repeats, w.run, Execution::Parallel, &parallel_sum);
    const bool match = serial_sum == parallel_sum;
    all_match = all_match && match;
    std::printf("%-46s %12.4f %12.4f %8.2f %s\n", w.name.c_str(), ts, tp, ts / tp, match ? "yes" : "NO");
  }
  return all_match ? 0 : 1;
}
