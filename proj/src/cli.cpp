#include "gnewton/cli.hpp"

#include "gnewton/errors.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <initializer_list>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace gnewton::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const std::string& what) {
  if (!j.is_object()) throw ConfigError(what + " must be an object");
  for (const auto& [key, value] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw ConfigError(what + ": unknown key '" + key + "'");
    }
  }
}

double number(const json& j, const std::string& what) {
  if (!j.is_number()) throw ConfigError(what + " must be a number");
  return j.get<double>();
}

double positive(const json& j, const std::string& what) {
  const double v = number(j, what);
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(what + " must be finite and > 0");
  return v;
}

std::size_t count(const json& j, const std::string& what) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw ConfigError(what + " must be a non-negative integer");
  return j.get<std::size_t>();
}

Vector vector(const json& j, const std::string& what) {
  if (j.is_number()) return Vector::Constant(1, j.get<double>());
  if (!j.is_array() || j.empty()) throw ConfigError(what + " must be a number or a non-empty array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(j[i], what);
  return v;
}

json vector_json(const Vector& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

// NaN and infinities are not valid JSON numbers.
json scalar_json(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

MajorantFunction chosen_majorant(const RunConfig& cfg, const ProblemSpec* spec) {
  if (cfg.majorant) return *cfg.majorant;
  if (spec && (spec->majorant.K || spec->majorant.gamma)) return declared_majorant(*spec);
  throw ConfigError("no majorant: set \"majorant\" in the config or declare K / gamma on the problem");
}

const Vector& known_solution(const ProblemSpec& spec) {
  if (!spec.x_star) throw ConfigError("problem '" + spec.name + "' has no known solution x*");
  return *spec.x_star;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
  if (!out) throw ConfigError("failed writing " + path.string());
}

void write_report(const fs::path& out_dir, const json& report) {
  fs::create_directories(out_dir);
  write_file(out_dir / "report.json", report.dump(2) + "\n");
}

void write_trace(const fs::path& out_dir, const std::string& csv) {
  fs::create_directories(out_dir);
  write_file(out_dir / "trace.csv", csv);
}

json run_json(const SolveReport& run) {
  json j;
  j["status"] = to_string(run.status);
  j["message"] = run.message;
  j["iterations"] = run.iterations();
  j["final_iterate"] = vector_json(run.final_iterate());
  j["final_residual"] = scalar_json(run.residuals.back());
  if (!run.distances.empty()) j["final_distance"] = scalar_json(run.distances.back());
  if (!run.majorant.empty()) {
    j["t0"] = run.majorant.front();
    j["bound"] = scalar_json(run.bound);
  }
  if (run.radii) j["radii"] = radius_json(*run.radii);
  return j;
}

int guarded(const std::function<int()>& body, std::ostream& err) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InvalidProblem& e) {
    err << "invalid problem: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InvalidMajorant& e) {
    err << "invalid majorant: " << e.what() << "\n";
    return kExitConfig;
  } catch (const PreconditionViolated& e) {
    err << "precondition violated: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const nlohmann::json::exception& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitSolve;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInternal;
  }
}

} // namespace

MajorantFunction majorant_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    throw ConfigError("majorant needs a string \"kind\": lipschitz, smale or custom");
  }
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "lipschitz") {
    reject_unknown(j, {"kind", "K"}, "majorant");
    if (!j.contains("K")) throw ConfigError("majorant: lipschitz needs K");
    return MajorantFunction::lipschitz(number(j.at("K"), "majorant.K"));
  }
  if (kind == "smale") {
    reject_unknown(j, {"kind", "gamma"}, "majorant");
    if (!j.contains("gamma")) throw ConfigError("majorant: smale needs gamma");
    return MajorantFunction::smale(number(j.at("gamma"), "majorant.gamma"));
  }
  if (kind == "custom") {
    reject_unknown(j, {"kind", "coefficients", "R"}, "majorant");
    if (!j.contains("coefficients") || !j.contains("R")) throw ConfigError("majorant: custom needs coefficients and R");
    const Vector c = vector(j.at("coefficients"), "majorant.coefficients");
    return MajorantFunction::polynomial(std::vector<double>(c.data(), c.data() + c.size()),
                                       number(j.at("R"), "majorant.R"));
  }
  throw ConfigError("majorant.kind must be lipschitz, smale or custom");
}

RunConfig parse_config(const json& j) {
  reject_unknown(j,
                 {"schema_version", "problem", "x0", "t0", "direction", "majorant", "kappa", "tolerances", "max_outer",
                  "max_inner", "seed", "uniqueness_samples", "basin"},
                 "config");
  if (!j.contains("schema_version")) throw ConfigError("config: missing schema_version");
  if (!j.at("schema_version").is_number_integer() || j.at("schema_version").get<int>() != kSchemaVersion) {
    throw ConfigError("config: unsupported schema_version (expected " + std::to_string(kSchemaVersion) + ")");
  }

  RunConfig cfg;
  if (j.contains("problem")) {
    const json& p = j.at("problem");
    cfg.problem = p.is_string() ? builtin_problem(p.get<std::string>()) : problem_from_json(p);
  }
  if (j.contains("x0") && j.contains("t0")) throw ConfigError("config: give either x0 or t0, not both");
  if (j.contains("x0")) cfg.x0 = vector(j.at("x0"), "x0");
  if (j.contains("t0")) {
    cfg.t0 = number(j.at("t0"), "t0");
    if (!(*cfg.t0 >= 0.0)) throw ConfigError("t0 must be >= 0");
  }
  if (j.contains("direction")) {
    if (!cfg.t0) throw ConfigError("config: direction only applies together with t0");
    cfg.direction = vector(j.at("direction"), "direction");
    if (!(cfg.direction->norm() > 0.0)) throw ConfigError("direction must be non-zero");
  }
  if (j.contains("majorant")) cfg.majorant = majorant_from_json(j.at("majorant"));
  if (j.contains("kappa")) cfg.kappa = positive(j.at("kappa"), "kappa");
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    reject_unknown(t, {"outer", "inner"}, "tolerances");
    if (t.contains("outer")) cfg.outer_tol = positive(t.at("outer"), "tolerances.outer");
    if (t.contains("inner")) cfg.inner_tol = positive(t.at("inner"), "tolerances.inner");
  }
  if (j.contains("max_outer")) cfg.max_outer = count(j.at("max_outer"), "max_outer");
  if (j.contains("max_inner")) cfg.max_inner = count(j.at("max_inner"), "max_inner");
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw ConfigError("seed must be a non-negative integer");
    cfg.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("uniqueness_samples")) cfg.uniqueness_samples = count(j.at("uniqueness_samples"), "uniqueness_samples");
  if (j.contains("basin")) {
    const json& b = j.at("basin");
    reject_unknown(b, {"directions", "r_max", "bisect_tol"}, "basin");
    if (b.contains("directions")) cfg.basin_directions = count(b.at("directions"), "basin.directions");
    if (b.contains("r_max")) cfg.basin_r_max = positive(b.at("r_max"), "basin.r_max");
    if (b.contains("bisect_tol")) cfg.basin_bisect_tol = positive(b.at("bisect_tol"), "basin.bisect_tol");
  }
  return cfg;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(j);
}

ProblemSpec resolved_problem(const RunConfig& cfg) {
  if (!cfg.problem) throw ConfigError("config: missing problem");
  ProblemSpec spec = *cfg.problem;
  if (cfg.kappa) spec.kappa = *cfg.kappa;
  return spec;
}

Vector start_point(const RunConfig& cfg, const ProblemSpec& spec) {
  const Eigen::Index n = spec.dimension();
  if (cfg.x0) {
    if (cfg.x0->size() != n) throw ConfigError("x0 has dimension " + std::to_string(cfg.x0->size()) +
                                               ", problem has " + std::to_string(n));
    return *cfg.x0;
  }
  if (cfg.t0) {
    const Vector& xs = known_solution(spec);
    Vector d = cfg.direction ? *cfg.direction : Vector::Unit(n, 0);
    if (d.size() != n) throw ConfigError("direction has wrong dimension");
    return xs + *cfg.t0 * (d / d.norm());
  }
  throw ConfigError("config: need x0 or t0");
}

SolveConfig solve_config(const RunConfig& cfg) {
  SolveConfig s;
  s.outer_tol = cfg.outer_tol;
  s.inner_tol = cfg.inner_tol;
  s.max_outer = cfg.max_outer;
  s.max_inner = cfg.max_inner;
  s.majorant = cfg.majorant;
  return s;
}

std::string csv_number(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trace_csv(const SolveReport& run) {
  std::ostringstream out;
  out << "k,residual,dist_to_xstar,t_k,ratio_emp,ratio_majorant,bound\n";
  const auto at = [](const std::vector<double>& v, std::size_t k) {
    return k < v.size() ? v[k] : std::numeric_limits<double>::quiet_NaN();
  };
  const bool has_majorant = !run.majorant.empty();
  for (std::size_t k = 0; k < run.iterates.size(); ++k) {
    out << k << ',' << csv_number(at(run.residuals, k)) << ',' << csv_number(at(run.distances, k)) << ','
        << csv_number(at(run.majorant, k)) << ',' << csv_number(at(run.ratio_empirical, k)) << ','
        << csv_number(at(run.ratio_majorant, k)) << ','
        << csv_number(has_majorant ? run.bound : std::numeric_limits<double>::quiet_NaN()) << '\n';
  }
  return out.str();
}

json radius_json(const RadiusReport& r) {
  return json{{"nu", scalar_json(r.nu)},       {"rho", scalar_json(r.rho)}, {"sigma", scalar_json(r.sigma)},
              {"kappa", scalar_json(r.kappa)}, {"r", scalar_json(r.r)},     {"sigma_bar", scalar_json(r.sigma_bar)}};
}

int cmd_solve(const RunConfig& cfg, const fs::path& out_dir, std::ostream& log, std::ostream& err) {
  return guarded(
      [&] {
        const ProblemSpec spec = resolved_problem(cfg);
        const Vector x0 = start_point(cfg, spec);
        const SolveReport run = solve(to_instance(spec), x0, solve_config(cfg));

        json report;
        report["command"] = "solve";
        report["problem"] = spec.name;
        report["x0"] = vector_json(x0);
        if (cfg.majorant) report["majorant"] = cfg.majorant->name();
        report["run"] = run_json(run);
        write_report(out_dir, report);
        write_trace(out_dir, trace_csv(run));

        log << spec.name << ": " << to_string(run.status) << " after " << run.iterations()
            << " iterations, residual " << csv_number(run.residuals.back()) << "\n";
        if (run.status != SolveStatus::Converged) {
          err << "solve did not converge: " << run.message << "\n";
          return kExitSolve;
        }
        return kExitOk;
      },
      err);
}

int cmd_radius(const RunConfig& cfg, const fs::path& out_dir, std::ostream& log, std::ostream& err) {
  return guarded(
      [&] {
        std::optional<ProblemSpec> spec;
        if (cfg.problem) spec = resolved_problem(cfg);
        const MajorantFunction f = chosen_majorant(cfg, spec ? &*spec : nullptr);
        double kappa = 0.0;
        if (cfg.kappa) {
          kappa = *cfg.kappa;
        } else if (spec) {
          kappa = spec->kappa;
        } else {
          throw ConfigError("config: radius needs kappa or a problem");
        }
        const RadiusReport r = radii(f, kappa);

        json report = radius_json(r);
        report["command"] = "radius";
        report["majorant"] = f.name();
        if (spec) report["problem"] = spec->name;
        write_report(out_dir, report);

        log << f.name() << ": nu=" << csv_number(r.nu) << " rho=" << csv_number(r.rho)
            << " sigma=" << csv_number(r.sigma) << " kappa=" << csv_number(r.kappa) << " r=" << csv_number(r.r)
            << " sigma_bar=" << csv_number(r.sigma_bar) << "\n";
        return kExitOk;
      },
      err);
}

int cmd_verify(const RunConfig& cfg, const fs::path& out_dir, std::ostream& log, std::ostream& err) {
  return guarded(
      [&] {
        const ProblemSpec spec = resolved_problem(cfg);
        known_solution(spec);
        const MajorantFunction f = chosen_majorant(cfg, &spec);
        const ProblemInstance p = to_instance(spec);
        const Vector x0 = start_point(cfg, spec);
        SolveConfig scfg = solve_config(cfg);
        scfg.majorant = f;
        MajorantGrid grid;
        grid.seed = cfg.seed;

        const TheoremReport thm = verify_theorem(p, f, x0, scfg, grid);
        UniquenessOptions uopt;
        uopt.samples = cfg.uniqueness_samples;
        uopt.seed = cfg.seed;
        const UniquenessReport uniq = check_uniqueness(p, f, uopt);
        const bool passed = thm.passed && uniq.passed;

        json assertions = json::array();
        for (const auto& a : thm.assertions) {
          assertions.push_back(json{{"name", a.name},
                                    {"passed", a.passed},
                                    {"worst_margin", scalar_json(a.worst_margin)},
                                    {"worst_k", a.worst_k},
                                    {"checks", a.checks}});
        }
        json report;
        report["command"] = "verify";
        report["problem"] = spec.name;
        report["majorant"] = f.name();
        report["seed"] = cfg.seed;
        report["x0"] = vector_json(x0);
        report["t0"] = thm.t0;
        report["radii"] = radius_json(thm.radii);
        report["passed"] = passed;
        report["assertions"] = assertions;
        report["uniqueness"] = json{{"passed", uniq.passed},
                                    {"radius", scalar_json(uniq.radius)},
                                    {"samples", uniq.samples},
                                    {"min_residual", scalar_json(uniq.min_residual)},
                                    {"spurious", uniq.spurious}};
        report["run"] = run_json(thm.run);
        write_report(out_dir, report);
        write_trace(out_dir, trace_csv(thm.run));

        log << spec.name << " with " << f.name() << ", t0=" << csv_number(thm.t0) << ", r=" << csv_number(thm.radii.r)
            << "\n";
        for (const auto& a : thm.assertions) {
          log << "  " << std::left << std::setw(22) << a.name << (a.passed ? "PASS" : "FAIL")
              << "  worst_margin=" << csv_number(a.worst_margin) << " at k=" << a.worst_k << "\n";
        }
        log << "  " << std::left << std::setw(22) << "uniqueness" << (uniq.passed ? "PASS" : "FAIL")
            << "  min_residual=" << csv_number(uniq.min_residual) << " over " << uniq.samples << " samples\n";
        log << (passed ? "verify: PASS" : "verify: FAIL") << "\n";
        return passed ? kExitOk : kExitAssertion;
      },
      err);
}

int cmd_basin(const RunConfig& cfg, const fs::path& out_dir, std::ostream& log, std::ostream& err) {
  return guarded(
      [&] {
        if (cfg.basin_directions == 0) throw ConfigError("basin.directions must be >= 1");
        const ProblemSpec spec = resolved_problem(cfg);
        known_solution(spec);
        const MajorantFunction f = chosen_majorant(cfg, &spec);
        const ProblemInstance p = to_instance(spec);
        const RadiusReport rr = radii(f, spec.kappa);

        BasinOptions opt;
        opt.directions = cfg.basin_directions;
        opt.r_max = cfg.basin_r_max ? *cfg.basin_r_max : std::min(spec.kappa, 4.0 * rr.r);
        opt.bisect_tol = cfg.basin_bisect_tol;
        opt.seed = cfg.seed;
        opt.solve = solve_config(cfg);
        opt.solve.majorant.reset();
        const BasinReport basin = empirical_radius(p, opt);

        const double floor = rr.r - opt.bisect_tol;
        std::ostringstream csv;
        csv << "direction_index,empirical_radius\n";
        bool passed = true;
        json per = json::array();
        for (std::size_t i = 0; i < basin.radii.size(); ++i) {
          csv << i << ',' << csv_number(basin.radii[i]) << '\n';
          passed = passed && basin.radii[i] >= floor;
          per.push_back(json{{"direction", vector_json(basin.directions[i])}, {"empirical_radius", basin.radii[i]}});
        }
        json report;
        report["command"] = "basin";
        report["problem"] = spec.name;
        report["majorant"] = f.name();
        report["seed"] = cfg.seed;
        report["theoretical_r"] = rr.r;
        report["r_max"] = opt.r_max;
        report["bisect_tol"] = opt.bisect_tol;
        report["min_empirical_radius"] = basin.min_radius;
        report["passed"] = passed;
        report["directions"] = per;
        write_report(out_dir, report);
        write_trace(out_dir, csv.str());

        log << spec.name << ": theoretical r=" << csv_number(rr.r) << ", min empirical radius "
            << csv_number(basin.min_radius) << " over " << basin.radii.size() << " directions\n";
        log << (passed ? "basin: PASS" : "basin: FAIL") << "\n";
        return passed ? kExitOk : kExitAssertion;
      },
      err);
}

int run_cli(int argc, const char* const* argv, std::ostream& log, std::ostream& err) {
  CLI::App app{"Newton's method for generalized equations F(x) + T(x) \\ni 0", "gnewton"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;

  using Command = int (*)(const RunConfig&, const fs::path&, std::ostream&, std::ostream&);
  const std::pair<const char*, Command> commands[] = {
      {"solve", cmd_solve}, {"radius", cmd_radius}, {"verify", cmd_verify}, {"basin", cmd_basin}};
  const std::pair<const char*, const char*> descriptions[] = {
      {"solve", "run Newton's method and write the convergence trace"},
      {"radius", "report the convergence and uniqueness radii of a majorant"},
      {"verify", "check the convergence theorem's inequalities along a run"},
      {"basin", "measure the empirical basin of attraction along sampled directions"}};
  for (std::size_t i = 0; i < 4; ++i) {
    auto* sub = app.add_subcommand(descriptions[i].first, descriptions[i].second);
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "overrides the config seed");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream out;
    std::ostringstream errs;
    const int code = app.exit(e, out, errs);
    log << out.str();
    err << errs.str();
    return code == 0 ? kExitOk : kExitConfig;
  }

  RunConfig cfg;
  const int loaded = guarded(
      [&] {
        cfg = load_config(config_path);
        return kExitOk;
      },
      err);
  if (loaded != kExitOk) return loaded;
  if (seed) cfg.seed = *seed;

  for (const auto& [name, fn] : commands) {
    if (app.got_subcommand(name)) return fn(cfg, out_dir, log, err);
  }
  return kExitInternal;
}

} // namespace gnewton::cli
