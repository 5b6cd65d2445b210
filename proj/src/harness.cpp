#include "sweep/harness.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <random>

#include <fmt/format.h>

namespace sweep {

namespace {

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

}  // namespace

std::string to_string(ProblemId id) {
  switch (id) {
    case ProblemId::dragging_interval: return "dragging_interval";
    case ProblemId::translating_halfspace: return "translating_halfspace";
    case ProblemId::interior_ode: return "interior_ode";
    case ProblemId::translating_disk: return "translating_disk";
  }
  return "dragging_interval";
}

ProblemId parse_problem_id(const std::string& name) {
  for (ProblemId id : catalog())
    if (to_string(id) == name) return id;
  throw UnknownProblem(fmt::format("unknown problem '{}'", name));
}

const std::vector<ProblemId>& catalog() {
  static const std::vector<ProblemId> ids = {ProblemId::dragging_interval, ProblemId::translating_halfspace,
                                             ProblemId::interior_ode, ProblemId::translating_disk};
  return ids;
}

SweepingProblem catalog_problem(ProblemId id, double horizon) {
  switch (id) {
    case ProblemId::dragging_interval: {
      auto base = SetDescription::box(Vec::Zero(1), Vec::Ones(1));
      return SweepingProblem(MovingSet::translating(base, Vec::Ones(1)), perturbations::zero(1), Vec::Zero(1),
                             horizon);
    }
    case ProblemId::translating_halfspace: {
      auto base = SetDescription::halfspace(vec2(1.0, 0.0), 0.0);
      return SweepingProblem(MovingSet::translating(base, vec2(1.0, 0.0)), perturbations::zero(2), vec2(0.0, 0.0),
                             horizon);
    }
    case ProblemId::interior_ode: {
      auto ball = SetDescription::ball(Vec::Zero(2), 10.0);
      return SweepingProblem(MovingSet::fixed(ball), perturbations::linear_decay(2), vec2(1.0, 0.0), horizon,
                             SolveMode::fixed_set);
    }
    case ProblemId::translating_disk: {
      auto base = SetDescription::ball(Vec::Zero(2), 1.0);
      return SweepingProblem(MovingSet::translating(base, vec2(1.0, 0.0)), perturbations::zero(2), vec2(-1.0, 0.0),
                             horizon);
    }
  }
  throw UnknownProblem("unknown problem id");
}

OracleKind default_oracle(ProblemId id) {
  return id == ProblemId::translating_disk ? OracleKind::frank_wolfe : OracleKind::automatic;
}

Vec reference_solution(ProblemId id, double t) {
  switch (id) {
    case ProblemId::dragging_interval: return Vec::Constant(1, t);
    case ProblemId::translating_halfspace: return vec2(t, 0.0);
    case ProblemId::interior_ode: return vec2(std::exp(-t), 0.0);
    case ProblemId::translating_disk: return vec2(t - 1.0, 0.0);
  }
  throw UnknownProblem("unknown problem id");
}

std::vector<double> evaluation_times(double horizon, int count) {
  if (count < 2) throw std::invalid_argument("evaluation_times: count must be >= 2");
  std::vector<double> ts(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j) ts[static_cast<std::size_t>(j)] = j == count - 1 ? horizon : j * horizon / (count - 1);
  return ts;
}

double sup_error(const Trajectory& traj, const Reference& ref, int count) {
  double worst = 0.0;
  for (double t : evaluation_times(traj.grid.horizon(), count))
    worst = std::max(worst, (interpolate(traj, t) - ref(t)).norm());
  return worst;
}

double node_error(const Trajectory& traj, const Reference& ref) {
  double worst = 0.0;
  for (std::size_t k = 0; k < traj.nodes.size(); ++k)
    worst = std::max(worst, (traj.nodes[k] - ref(traj.grid.node(static_cast<int>(k)))).norm());
  return worst;
}

std::string to_string(ReferenceKind kind) { return kind == ReferenceKind::closed_form ? "closed_form" : "fine_grid"; }

std::optional<ReferenceKind> parse_reference_kind(const std::string& name) {
  if (name == "closed_form") return ReferenceKind::closed_form;
  if (name == "fine_grid") return ReferenceKind::fine_grid;
  return std::nullopt;
}

bool RateStudy::passed() const {
  if (self_consistency && !self_consistency->passed()) return false;
  return exact || (strictly_decreasing && slope_floor_met);
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_loglog_slope: need >= 2 paired points");
  const auto m = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += std::log(x[i]);
    sy += std::log(y[i]);
  }
  const double mx = sx / m, my = sy / m;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_loglog_slope: x values must differ");
  return sxy / sxx;
}

SelfConsistency self_consistency_gate(const SweepingProblem& problem, const Trajectory& fine, const Reference& exact,
                                      int evaluation_points) {
  SelfConsistency gate;
  gate.n_ref = fine.grid.size();
  gate.error = sup_error(fine, exact, evaluation_points);
  const auto k = audit_constants(problem, fine.schedule, fine.selection.gamma);
  gate.bound = 2.0 * (k.k4 * fine.grid.step() + 2.0 * std::sqrt(fine.eps_n));
  return gate;
}

RateStudy rate_study(const SweepingProblem& problem, const std::vector<int>& ladder, const EpsSchedule& schedule,
                     const RateOptions& options, const Reference& closed_form) {
  if (ladder.empty()) throw std::invalid_argument("rate_study: empty ladder");
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    if (ladder[i] < 1) throw std::invalid_argument("rate_study: ladder entries must be >= 1");
    if (i > 0 && ladder[i] <= ladder[i - 1]) throw std::invalid_argument("rate_study: ladder must be strictly increasing");
  }
  if (options.reference == ReferenceKind::closed_form && !closed_form)
    throw std::invalid_argument("rate_study: closed-form reference requested but none available");

  RateStudy study;
  study.ladder = ladder;
  study.schedule = schedule;
  study.reference = options.reference;
  study.slope_floor = options.slope_floor;

  // Fine grid: needed for the fine-grid reference and for the self-consistency gate.
  std::optional<Trajectory> fine;
  if (options.reference == ReferenceKind::fine_grid || closed_form) {
    study.n_ref = options.n_ref > 0 ? options.n_ref : 4 * ladder.back();
    if (study.n_ref < 4 * ladder.back()) throw std::invalid_argument("rate_study: n_ref must be >= 4 * max ladder n");
    StepperConfig cfg = options.stepper;
    EpsSchedule fine_schedule = schedule;
    const SetDescription c0 = problem.moving_set().at(0.0);
    if (c0.has_closed_form()) {
      cfg.oracle = OracleKind::exact;
    } else {
      const double mu_ref = problem.horizon() / study.n_ref;
      fine_schedule = EpsSchedule(1e-14 / std::pow(mu_ref, schedule.p()), schedule.p());
    }
    fine = solve(problem, study.n_ref, fine_schedule, cfg);
    if (closed_form) study.self_consistency = self_consistency_gate(problem, *fine, closed_form, options.evaluation_points);
  }

  Reference ref = closed_form;
  if (options.reference == ReferenceKind::fine_grid) {
    const Trajectory* f = &*fine;
    ref = [f](double t) { return interpolate(*f, t); };
  }

  std::vector<std::future<Trajectory>> runs;
  runs.reserve(ladder.size());
  for (int n : ladder)
    runs.push_back(std::async(std::launch::async, [&problem, n, &schedule, &options] {
      return solve(problem, n, schedule, options.stepper);
    }));

  std::vector<double> mus, errs;
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    const Trajectory traj = runs[i].get();
    RateEntry e;
    e.n = ladder[i];
    e.mu = traj.grid.step();
    e.eps = traj.eps_n;
    e.error = sup_error(traj, ref, options.evaluation_points);
    study.entries.push_back(e);
    mus.push_back(e.mu);
    errs.push_back(e.error);
  }

  study.exact = std::all_of(errs.begin(), errs.end(), [](double e) { return e < kExactErrorFloor; });
  study.strictly_decreasing = true;
  for (std::size_t i = 1; i < errs.size(); ++i) {
    study.ratios.push_back(errs[i - 1] > 0.0 ? errs[i] / errs[i - 1] : std::numeric_limits<double>::quiet_NaN());
    if (!(errs[i] < errs[i - 1])) study.strictly_decreasing = false;
  }
  const bool positive = std::all_of(errs.begin(), errs.end(), [](double e) { return e >= kExactErrorFloor; });
  if (!study.exact && positive && errs.size() >= 2) {
    study.slope = fit_loglog_slope(mus, errs);
    study.slope_floor_met = *study.slope >= options.slope_floor;
  }
  return study;
}

RateStudy rate_study(ProblemId id, const std::vector<int>& ladder, const EpsSchedule& schedule, RateOptions options) {
  if (options.stepper.oracle == OracleKind::automatic) options.stepper.oracle = default_oracle(id);
  const SweepingProblem problem = catalog_problem(id);
  RateStudy study = rate_study(problem, ladder, schedule, options, [id](double t) { return reference_solution(id, t); });
  study.problem = to_string(id);
  return study;
}

bool StabilityReport::monotone_within_band() const {
  for (std::size_t i = 1; i < error.size(); ++i)
    if (error[i] > 2.0 * error[i - 1] + tolerance) return false;
  return true;
}

StabilityReport stability_study(const SetDescription& set, const Vec& x, const Vec& u, const std::vector<int>& ns,
                                double eps_power, OracleKind oracle, double tolerance) {
  if (x.size() != set.dim() || u.size() != set.dim()) throw std::invalid_argument("stability_study: dimension mismatch");
  StabilityReport report;
  report.tolerance = tolerance;
  const Vec target = exact_project(set, x);
  for (int n : ns) {
    if (n < 1) throw std::invalid_argument("stability_study: n must be >= 1");
    ProjectorConfig cfg;
    cfg.eps = std::pow(static_cast<double>(n), -eps_power);
    cfg.feas_tol = default_feas_tol(set);
    const Vec xn = x + u / static_cast<double>(n);
    const ProjectionResult z = approx_project(set, xn, cfg, oracle);
    report.n.push_back(n);
    report.eps.push_back(cfg.eps);
    report.error.push_back((z.point - target).norm());
  }
  return report;
}

LipschitzCheck validate_lipschitz(const MovingSet& set, double horizon, int pairs, int samples, std::uint64_t seed) {
  LipschitzCheck check;
  check.declared = set.lipschitz;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, horizon);
  for (int i = 0; i < pairs; ++i) {
    const double t = unif(rng);
    const double s = unif(rng);
    if (t == s) continue;
    const double d = hausdorff_estimate(set.at(t), set.at(s), samples, seed + static_cast<std::uint64_t>(i));
    check.estimate = std::max(check.estimate, d / std::abs(t - s));
  }
  return check;
}

}  // namespace sweep
