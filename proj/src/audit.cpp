#include "sweep/audit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sweep {

namespace {

constexpr double kRelativeSlack = 1e-12;

class CheckAccumulator {
 public:
  CheckAccumulator(std::string name, std::string bound) {
    check_.name = std::move(name);
    check_.bound = std::move(bound);
    check_.worst_excess = -std::numeric_limits<double>::infinity();
  }

  void add(double lhs, double rhs) {
    ++check_.samples;
    check_.worst_excess = std::max(check_.worst_excess, lhs - rhs);
    if (rhs > 0.0) check_.worst_ratio = std::max(check_.worst_ratio, lhs / rhs);
    if (lhs > rhs + kRelativeSlack * (std::abs(rhs) + 1.0)) ++check_.violations;
  }

  AuditCheck finish() {
    if (check_.samples == 0) check_.worst_excess = 0.0;
    return check_;
  }

 private:
  AuditCheck check_;
};

}  // namespace

bool AuditReport::passed() const {
  return failed_cells.empty() && std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed(); });
}

AuditConstants audit_constants(const SweepingProblem& problem, const EpsSchedule& schedule, double gamma) {
  AuditConstants c;
  const double T = problem.horizon();
  c.lipschitz = problem.lipschitz();
  c.growth_at_x0 = problem.perturbation().growth(problem.x0());
  c.growth_lipschitz = problem.perturbation().growth_lipschitz;
  c.sqrt_gamma = std::sqrt(gamma);
  c.sqrt_eps_over_mu = schedule.sqrt_eps_over_mu_bound(T);

  const double lc = c.lipschitz;
  const double sg = c.sqrt_gamma;
  const double cc = c.sqrt_eps_over_mu;
  c.k1 = T * (lc + 2.0 * c.growth_at_x0 + 2.0 * sg + cc) * std::exp(2.0 * c.growth_lipschitz * T);
  const double h_max = c.growth_at_x0 + c.growth_lipschitz * c.k1;
  c.k2 = c.k1 + problem.x0().norm() + T * (lc + 2.0 * (h_max + sg) + cc);
  c.k3 = lc + 2.0 * (h_max + sg);
  c.k4 = c.k3 + lc + 2.0 * (h_max + sg);
  c.k5 = c.k4 + lc;
  c.k6 = cc + lc + 2.0 * (h_max + sg);
  return c;
}

AuditReport theorem1_audit(const Trajectory& traj, const SweepingProblem& problem, int samples_per_cell) {
  if (samples_per_cell < 2) throw std::invalid_argument("theorem1_audit: samples_per_cell must be >= 2");
  AuditReport report;
  report.constants = audit_constants(problem, traj.schedule, traj.selection.gamma);
  report.failed_cells = traj.failed_cells();
  const auto& k = report.constants;
  const Grid& grid = traj.grid;
  const double mu = grid.step();
  const double root_eps = std::sqrt(traj.eps_n);
  const double lc = k.lipschitz;
  const auto& h = problem.perturbation().growth;

  if (problem.mode() == SolveMode::prox_regular && std::isfinite(problem.rho()))
    report.rate_regime = grid.size() > 2.0 * lc * problem.horizon() / problem.rho();

  CheckAccumulator predictor("(a)(i) predictor distance", "d_{C(t_{k+1})}(x_k + I_k) <= (L_C + h(x_k) + sqrt(gamma)) mu");
  CheckAccumulator drift("(a)(ii) node drift", "|x_k - x_0| <= K1");
  CheckAccumulator sup_norm("(a)(iii) sup norm", "|x_n(t)| <= K2");
  CheckAccumulator increment("(a)(iv) node increment", "|x_{k+1} - x_k| <= K3 mu + sqrt(eps_n)");
  CheckAccumulator lag("(a)(v) interpolant lag", "|x_n(t) - x_n(theta_n(t))| <= K4 mu + 2 sqrt(eps_n)");
  CheckAccumulator feasibility("(b) distance to C(theta_n(t))",
                               "d_{C(theta_n(t))}(x_n(t)) <= K5 mu + L_C mu + 2 sqrt(eps_n)");
  CheckAccumulator speed("(c) velocity", "|x_n'(t)| <= K6");
  CheckAccumulator budget("eps budget", "certified_eps_k <= eps_n");

  const int computed = static_cast<int>(traj.steps.size());
  for (int c = 0; c < computed; ++c) {
    const auto kk = static_cast<std::size_t>(c);
    const auto& diag = traj.steps[kk];
    const Vec& xk = traj.nodes[kk];
    const Vec& xk1 = traj.nodes[kk + 1];
    if (diag.failed) continue;

    predictor.add(diag.predictor_distance, (lc + h(xk) + k.sqrt_gamma) * mu);
    drift.add((xk1 - problem.x0()).norm(), k.k1);
    increment.add((xk1 - xk).norm(), k.k3 * mu + root_eps);
    budget.add(diag.certified_eps, traj.eps_n);

    const double t0 = grid.node(c);
    const double t1 = grid.node(c + 1);
    for (int j = 0; j < samples_per_cell; ++j) {
      const double t = j == 0 ? t0 : t0 + (t1 - t0) * j / samples_per_cell;
      const Vec xt = interpolate(traj, t);
      sup_norm.add(xt.norm(), k.k2);
      const double theta = grid.theta(t);
      const int theta_node = grid.cell(t) + 1;
      if (theta_node > computed) continue;
      lag.add((xt - traj.nodes[static_cast<std::size_t>(theta_node)]).norm(), k.k4 * mu + 2.0 * root_eps);
      const SetDescription ahead = problem.moving_set().at(theta);
      feasibility.add(distance(ahead, xt).value, k.k5 * mu + lc * mu + 2.0 * root_eps);
      if (j > 0) speed.add(velocity(traj, t).norm(), k.k6);
    }
  }
  if (computed == grid.size()) sup_norm.add(traj.nodes.back().norm(), k.k2);

  report.checks = {predictor.finish(), drift.finish(),       sup_norm.finish(), increment.finish(),
                   lag.finish(),       feasibility.finish(), speed.finish(),    budget.finish()};
  return report;
}

}  // namespace sweep
