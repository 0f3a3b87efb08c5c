#pragma once

// Command-line front end: solve, radius, verify and basin runs driven by a JSON
// config, writing report.json and trace.csv into an output directory.

#include "gnewton/majorant.hpp"
#include "gnewton/newton.hpp"
#include "gnewton/problems.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace gnewton::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSolve = 3;
inline constexpr int kExitAssertion = 4;

inline constexpr int kSchemaVersion = 1;

struct RunConfig {
  std::optional<ProblemSpec> problem; ///< built-in name or inline spec; radius runs may omit it
  std::optional<Vector> x0;
  std::optional<double> t0;           ///< start at x* + t0 direction / ||direction||
  std::optional<Vector> direction;    ///< defaults to the first coordinate axis
  std::optional<MajorantFunction> majorant;
  std::optional<double> kappa;        ///< overrides the problem's kappa
  double outer_tol = 1e-12;
  double inner_tol = 1e-12;
  std::size_t max_outer = 100;
  std::size_t max_inner = 10'000;
  std::uint64_t seed = 0;
  std::size_t uniqueness_samples = 10'000;
  std::size_t basin_directions = 8;
  std::optional<double> basin_r_max;  ///< defaults to min(kappa, 4 r)
  double basin_bisect_tol = 1e-6;
};

/// Strict parse of a config object. Throws ConfigError (or InvalidProblem /
/// InvalidMajorant for the nested parts).
RunConfig parse_config(const nlohmann::json& j);

/// Reads and parses a config file; JSON syntax errors become ConfigError.
RunConfig load_config(const std::filesystem::path& path);

/// Lipschitz / Smale / custom polynomial majorant from its JSON object.
MajorantFunction majorant_from_json(const nlohmann::json& j);

/// Problem spec with the kappa override applied. Throws ConfigError when absent.
ProblemSpec resolved_problem(const RunConfig& cfg);

/// Starting point from x0 or t0 and direction.
Vector start_point(const RunConfig& cfg, const ProblemSpec& spec);

SolveConfig solve_config(const RunConfig& cfg);

/// %.17g, empty for NaN.
std::string csv_number(double v);

/// Header k,residual,dist_to_xstar,t_k,ratio_emp,ratio_majorant,bound and one
/// row per iterate; unavailable entries are left empty.
std::string trace_csv(const SolveReport& run);

nlohmann::json radius_json(const RadiusReport& r);

// Each command writes its outputs into `out_dir` (created if needed), prints a
// short summary to `log` and returns an exit code. Errors never escape.
int cmd_solve(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log, std::ostream& err);
int cmd_radius(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log, std::ostream& err);
int cmd_verify(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log, std::ostream& err);
int cmd_basin(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log, std::ostream& err);

/// gnewton {solve|radius|verify|basin} --config PATH [--out DIR] [--seed N]
int run_cli(int argc, const char* const* argv, std::ostream& log, std::ostream& err);

} // namespace gnewton::cli
