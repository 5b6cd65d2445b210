#include "sweep/solver.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace sweep {

Grid::Grid(double horizon, int n) : horizon_(horizon), n_(n) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw std::invalid_argument("Grid: horizon must be > 0");
  if (n < 1) throw std::invalid_argument("Grid: n must be >= 1");
}

int Grid::cell(double t) const {
  if (!(t >= 0.0 && t <= horizon_)) throw OutOfRange(fmt::format("time {} outside [0, {}]", t, horizon_));
  if (t == horizon_) return n_ - 1;
  int k = static_cast<int>(std::floor(t * n_ / horizon_));
  k = std::clamp(k, 0, n_ - 1);
  while (k > 0 && node(k) > t) --k;
  while (k < n_ - 1 && node(k + 1) <= t) ++k;
  return k;
}

EpsSchedule::EpsSchedule(double c, double p) : c_(c), p_(p) {
  if (!(c > 0.0)) throw std::invalid_argument("EpsSchedule: c must be > 0");
  if (!(p > 2.0)) throw std::invalid_argument("EpsSchedule: p must be > 2 so that eps_n / mu_n^2 -> 0");
}

double EpsSchedule::eps(double mu) const { return c_ * std::pow(mu, p_); }

double EpsSchedule::sqrt_eps_over_mu_bound(double horizon) const {
  // sqrt(c) mu^(p/2 - 1) is increasing in mu; the largest step is mu_1 = T.
  return std::sqrt(c_) * std::pow(horizon, 0.5 * p_ - 1.0);
}

std::string to_string(SolveMode mode) {
  switch (mode) {
    case SolveMode::prox_regular: return "prox_regular";
    case SolveMode::subsmooth: return "subsmooth";
    case SolveMode::fixed_set: return "fixed_set";
  }
  return "prox_regular";
}

std::optional<SolveMode> parse_solve_mode(const std::string& name) {
  if (name == "prox_regular") return SolveMode::prox_regular;
  if (name == "subsmooth") return SolveMode::subsmooth;
  if (name == "fixed_set") return SolveMode::fixed_set;
  return std::nullopt;
}

SweepingProblem::SweepingProblem(MovingSet moving_set, Perturbation perturbation, Vec x0, double horizon,
                                 SolveMode mode, double rho)
    : moving_set_(std::move(moving_set)),
      perturbation_(std::move(perturbation)),
      x0_(std::move(x0)),
      horizon_(horizon),
      mode_(mode),
      rho_(rho) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw std::invalid_argument("problem horizon must be > 0");
  if (!all_finite(x0_) || x0_.size() < 1) throw std::invalid_argument("x0 must be a finite vector");
  if (!(moving_set_.lipschitz >= 0.0)) throw std::invalid_argument("L_C must be >= 0");
  if (!(rho > 0.0)) throw std::invalid_argument("rho must be > 0");
  const SetDescription c0 = moving_set_.at(0.0);
  if (c0.dim() != x0_.size()) throw std::invalid_argument("x0 dimension differs from C(0)");
  if (residual(c0, x0_) > default_feas_tol(c0)) throw std::invalid_argument("x0 must lie in C(0)");
  if (mode == SolveMode::fixed_set && c0.has_closed_form()) {
    for (int i = 1; i <= 8; ++i) {
      if (!moving_set_.at(horizon * i / 8.0).same_parameters(c0))
        throw std::invalid_argument("fixed-set mode requires C(t) constant in t");
    }
  }
}

std::vector<int> Trajectory::failed_cells() const {
  std::vector<int> out;
  for (std::size_t k = 0; k < steps.size(); ++k)
    if (steps[k].failed) out.push_back(static_cast<int>(k));
  return out;
}

StepOutcome step(const SweepingProblem& problem, const Grid& grid, const Selection& selection, int k,
                 const Vec& x_k, double eps_n, const StepperConfig& cfg) {
  if (k < 0 || k >= grid.size()) throw OutOfRange(fmt::format("step index {} outside [0, {})", k, grid.size()));
  if (!(eps_n > 0.0)) throw std::invalid_argument("step: eps_n must be > 0");
  const double t0 = grid.node(k);
  const double t1 = grid.node(k + 1);

  StepOutcome out;
  out.integral = cell_integral(selection, x_k, t0, t1);
  const Vec predictor = x_k + out.integral;
  const SetDescription target = problem.moving_set().at(t1);

  const Distance dist = distance(target, predictor);
  ProjectorConfig pc;
  pc.eps = eps_n;
  pc.max_iter = cfg.max_iter;
  pc.feas_tol = default_feas_tol(target);
  const ProjectionResult proj = approx_project(target, predictor, pc, cfg.oracle);

  auto& diag = out.diagnostics;
  diag.predictor_distance = dist.value;
  diag.distance_is_upper_bound = dist.upper_bound;
  diag.certified_eps = proj.certified_eps;
  diag.iterations = proj.iterations;
  diag.budget = 4.0 * std::sqrt(eps_n) +
                (problem.lipschitz() + problem.perturbation().growth(x_k) + std::sqrt(selection.gamma)) * grid.step();
  diag.failed = !proj.converged || proj.certified_eps > eps_n || residual(target, proj.point) > pc.feas_tol;
  out.next = proj.point;

  if (diag.failed && !cfg.permissive) {
    throw ProjectionFailed(fmt::format("projection at step {} (t = {}) certified {} > eps_n = {}", k, t1,
                                       proj.certified_eps, eps_n),
                           Trajectory());
  }
  return out;
}

Trajectory solve(const SweepingProblem& problem, int n, const EpsSchedule& schedule, const StepperConfig& cfg) {
  if (!(cfg.gamma > 0.0)) throw std::invalid_argument("solve: gamma must be > 0");
  Trajectory traj;
  traj.grid = Grid(problem.horizon(), n);
  traj.schedule = schedule;
  traj.eps_n = schedule.eps(traj.grid.step());
  traj.selection = make_selection(problem.perturbation(), cfg.gamma);
  traj.selection.quadrature_nodes = cfg.quadrature_nodes;
  traj.nodes.reserve(static_cast<std::size_t>(n) + 1);
  traj.nodes.push_back(problem.x0());

  for (int k = 0; k < n; ++k) {
    StepOutcome out;
    try {
      out = step(problem, traj.grid, traj.selection, k, traj.nodes.back(), traj.eps_n, cfg);
    } catch (const ProjectionFailed& e) {
      throw ProjectionFailed(e.what(), std::move(traj));
    }
    traj.nodes.push_back(std::move(out.next));
    traj.integrals.push_back(std::move(out.integral));
    traj.steps.push_back(out.diagnostics);
  }
  return traj;
}

namespace {

void require_computed(const Trajectory& traj, int cell) {
  if (cell >= static_cast<int>(traj.steps.size()))
    throw OutOfRange(fmt::format("cell {} was not computed (trajectory has {} steps)", cell, traj.steps.size()));
}

}  // namespace

Vec interpolate(const Trajectory& traj, double t) {
  const Grid& g = traj.grid;
  const int c = g.cell(t);
  if (t == g.node(c)) {
    require_computed(traj, c - 1);
    return traj.nodes[static_cast<std::size_t>(c)];
  }
  if (t == g.node(c + 1)) {
    require_computed(traj, c);
    return traj.nodes[static_cast<std::size_t>(c) + 1];
  }
  require_computed(traj, c);
  const auto k = static_cast<std::size_t>(c);
  const Vec& xk = traj.nodes[k];
  const double t0 = g.node(c);
  const double frac = (t - t0) / g.step();
  return xk + frac * (traj.nodes[k + 1] - xk - traj.integrals[k]) + cell_integral(traj.selection, xk, t0, t);
}

Vec velocity(const Trajectory& traj, double t, Side side) {
  const Grid& g = traj.grid;
  int c = g.cell(t);
  const bool at_node = t == g.node(c) || t == g.node(c + 1);
  if (at_node) {
    const int node = t == g.node(c) ? c : c + 1;
    switch (side) {
      case Side::interior:
        throw OutOfRange(fmt::format("velocity undefined at grid node t = {}; pass a side", t));
      case Side::left:
        if (node == 0) throw OutOfRange("no cell to the left of t = 0");
        c = node - 1;
        break;
      case Side::right:
        if (node == g.size()) throw OutOfRange("no cell to the right of t = T");
        c = node;
        break;
    }
  }
  require_computed(traj, c);
  const auto k = static_cast<std::size_t>(c);
  const Vec& xk = traj.nodes[k];
  return (traj.nodes[k + 1] - xk - traj.integrals[k]) / g.step() + traj.selection.f(t, xk);
}

}  // namespace sweep
