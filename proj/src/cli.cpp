#include "sweep/cli.hpp"

#include <filesystem>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "sweep/audit.hpp"
#include "sweep/config.hpp"
#include "sweep/harness.hpp"
#include "sweep/io.hpp"

namespace sweep::cli {

namespace {

struct Options {
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  bool permissive = false;
};

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

Vec to_vec(const std::vector<double>& v) { return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size())); }

io::Json lipschitz_json(const LipschitzCheck& c, std::uint64_t seed) {
  return {{"seed", seed}, {"declared", c.declared}, {"estimate", c.estimate}, {"passed", c.passed()}};
}

int cmd_project(const RunConfig& cfg, std::ostream& out) {
  SetDescription set = cfg.set ? build_set(*cfg.set) : build_problem(cfg).moving_set().at(0.0);
  if (static_cast<int>(cfg.x.size()) != set.dim()) throw ConfigError("x: point dimension must match the set");
  const OracleKind kind = cfg.oracle.value_or(OracleKind::automatic);
  const ProjectionResult r = approx_project(set, to_vec(cfg.x), cfg.projector, kind);
  out << io::dump_json(io::projection_json(r));
  return r.converged ? ok : budget_exhausted;
}

void write_trajectory(const Trajectory& traj, const SweepingProblem& problem, const std::string& dir) {
  io::write_file(join(dir, "trajectory.csv"), io::to_csv(io::trajectory_table(traj)));
  io::write_file(join(dir, "trajectory.json"), io::dump_json(io::trajectory_json(traj, problem)));
}

io::Json audit_document(const Trajectory& traj, const SweepingProblem& problem, std::uint64_t seed, bool& passed) {
  const AuditReport report = theorem1_audit(traj, problem);
  const LipschitzCheck lip = validate_lipschitz(problem.moving_set(), problem.horizon(), 16, 64, seed);
  io::Json j = io::audit_json(report);
  j["lipschitz_check"] = lipschitz_json(lip, seed);
  passed = report.passed() && lip.passed();
  j["passed"] = passed;
  return j;
}

int cmd_solve(const RunConfig& cfg, const Options& opt, bool write_outputs, std::ostream& out, std::ostream& err) {
  const SweepingProblem problem = build_problem(cfg);
  StepperConfig sc = stepper_config(cfg);
  sc.permissive = opt.permissive;
  const std::uint64_t seed = opt.seed.value_or(cfg.seed);
  Trajectory traj;
  try {
    traj = solve(problem, cfg.n, build_schedule(cfg), sc);
  } catch (const ProjectionFailed& e) {
    err << "projection failed: " << e.what() << "\n";
    if (write_outputs) write_trajectory(e.partial(), problem, opt.out);
    return projection_failed;
  }
  bool passed = false;
  const io::Json audit = audit_document(traj, problem, seed, passed);
  if (write_outputs) {
    write_trajectory(traj, problem, opt.out);
    io::write_file(join(opt.out, "audit.json"), io::dump_json(audit));
  } else {
    out << io::dump_json(audit);
  }
  if (!traj.failed_cells().empty()) {
    err << fmt::format("{} cell(s) failed their projection certificate\n", traj.failed_cells().size());
    return projection_failed;
  }
  if (!passed) err << "audit: at least one bound failed\n";
  return passed ? ok : check_failed;
}

int cmd_rate(const RunConfig& cfg, const Options& opt, std::ostream& err) {
  if (cfg.ladder.empty()) throw ConfigError("ladder: required for rate");
  const SweepingProblem problem = build_problem(cfg);
  RateOptions ro;
  ro.reference = cfg.reference;
  ro.n_ref = cfg.reference_n;
  ro.stepper = stepper_config(cfg);
  ro.stepper.permissive = opt.permissive;
  Reference closed_form;
  if (cfg.problem) {
    const ProblemId id = parse_problem_id(*cfg.problem);
    closed_form = [id](double t) { return reference_solution(id, t); };
  }
  RateStudy study;
  try {
    study = rate_study(problem, cfg.ladder, build_schedule(cfg), ro, closed_form);
  } catch (const ProjectionFailed& e) {
    err << "projection failed: " << e.what() << "\n";
    return projection_failed;
  }
  study.problem = cfg.problem.value_or("inline");
  io::write_file(join(opt.out, "rate.csv"), io::to_csv(io::rate_table(study)));
  io::write_file(join(opt.out, "rate.json"), io::dump_json(io::rate_json(study)));
  if (!study.passed()) err << "rate: monotonicity, slope floor, or self-consistency gate failed\n";
  return study.passed() ? ok : check_failed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Catching-up solver for sweeping processes"};
  app.require_subcommand(1);
  Options opt;
  std::uint64_t seed = 0;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config, "run configuration file")->required();
    sub->add_option("--out", opt.out, "output directory");
    sub->add_option("--seed", seed, "seed for randomized checks (overrides the config)");
    sub->add_flag("--permissive", opt.permissive, "record failed projections instead of aborting");
  };
  auto* project = app.add_subcommand("project", "one approximate projection, printed as JSON");
  auto* solve_cmd = app.add_subcommand("solve", "solve, then write trajectory.csv, trajectory.json and audit.json");
  auto* rate = app.add_subcommand("rate", "convergence-rate study, writes rate.csv and rate.json");
  auto* audit = app.add_subcommand("audit", "solve and print the bound audit as JSON");
  for (auto* sub : {project, solve_cmd, rate, audit}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? ok : config_error;
  }

  try {
    for (auto* sub : {project, solve_cmd, rate, audit})
      if (sub->count("--seed")) opt.seed = seed;
    const RunConfig cfg = load_config(opt.config);
    if (*solve_cmd || *rate) std::filesystem::create_directories(opt.out);
    if (*project) return cmd_project(cfg, out);
    if (*solve_cmd) return cmd_solve(cfg, opt, true, out, err);
    if (*rate) return cmd_rate(cfg, opt, err);
    return cmd_solve(cfg, opt, false, out, err);
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return config_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return config_error;
  }
}

}  // namespace sweep::cli
