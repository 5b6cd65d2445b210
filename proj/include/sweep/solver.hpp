#ifndef SWEEP_SOLVER_HPP
#define SWEEP_SOLVER_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sweep/geometry.hpp"
#include "sweep/oracles.hpp"
#include "sweep/perturbation.hpp"

namespace sweep {

class OutOfRange : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Uniform partition t_k = k T / n of [0, T].
class Grid {
 public:
  Grid(double horizon, int n);

  double horizon() const { return horizon_; }
  int size() const { return n_; }
  double step() const { return horizon_ / n_; }
  /// t_k, computed as k T / n (never accumulated).
  double node(int k) const { return k == n_ ? horizon_ : k * horizon_ / n_; }
  /// k with t in [t_k, t_{k+1}); n - 1 for t = T.
  int cell(double t) const;
  /// delta_n(t) = t_k on [t_k, t_{k+1}), t_{n-1} at T.
  double delta(double t) const { return node(cell(t)); }
  /// theta_n(t) = t_{k+1} on [t_k, t_{k+1}), T at T.
  double theta(double t) const { return node(cell(t) + 1); }

 private:
  double horizon_;
  int n_;
};

/// eps_n = c mu_n^p with p > 2, so eps_n / mu_n^2 -> 0.
class EpsSchedule {
 public:
  explicit EpsSchedule(double c = 1.0, double p = 3.0);

  double c() const { return c_; }
  double p() const { return p_; }
  double eps(double mu) const;
  /// sup_n sqrt(eps_n) / mu_n over mu_n = T / n, attained at n = 1.
  double sqrt_eps_over_mu_bound(double horizon) const;

 private:
  double c_;
  double p_;
};

enum class SolveMode { prox_regular, subsmooth, fixed_set };

std::string to_string(SolveMode mode);
std::optional<SolveMode> parse_solve_mode(const std::string& name);

/// x' in -N(C(t); x) + F(t, x), x(0) = x0, on [0, T].
class SweepingProblem {
 public:
  /// Throws std::invalid_argument if x0 is not in C(0), T <= 0, or a
  /// fixed-set problem's set moves.
  SweepingProblem(MovingSet moving_set, Perturbation perturbation, Vec x0, double horizon,
                  SolveMode mode = SolveMode::prox_regular, double rho = std::numeric_limits<double>::infinity());

  const MovingSet& moving_set() const { return moving_set_; }
  const Perturbation& perturbation() const { return perturbation_; }
  const Vec& x0() const { return x0_; }
  double horizon() const { return horizon_; }
  SolveMode mode() const { return mode_; }
  double rho() const { return rho_; }
  int dim() const { return static_cast<int>(x0_.size()); }
  /// L_C as used by the audit; zero in fixed-set mode.
  double lipschitz() const { return mode_ == SolveMode::fixed_set ? 0.0 : moving_set_.lipschitz; }

 private:
  MovingSet moving_set_;
  Perturbation perturbation_;
  Vec x0_;
  double horizon_;
  SolveMode mode_;
  double rho_;
};

struct StepperConfig {
  double gamma = 1e-8;
  OracleKind oracle = OracleKind::automatic;
  int max_iter = 1000000;
  int quadrature_nodes = 4;
  bool permissive = false;  // ProjectionFailed becomes a marked cell instead of an abort
};

struct StepDiagnostics {
  double predictor_distance = 0.0;  // d_{C(t_{k+1})}(predictor)
  bool distance_is_upper_bound = false;
  double certified_eps = 0.0;
  double budget = 0.0;  // lambda_n = 4 sqrt(eps_n) + (L_C + h(x_k) + sqrt(gamma)) mu_n
  int iterations = 0;
  bool failed = false;
};

struct StepOutcome {
  Vec next;
  Vec integral;
  StepDiagnostics diagnostics;
};

/// Catching-up iterate: x_{k+1} in proj^{eps_n}_{C(t_{k+1})}(x_k + int f(s, x_k) ds).
StepOutcome step(const SweepingProblem& problem, const Grid& grid, const Selection& selection, int k,
                 const Vec& x_k, double eps_n, const StepperConfig& cfg);

struct Trajectory {
  Grid grid{1.0, 1};
  EpsSchedule schedule;
  double eps_n = 0.0;
  Selection selection;
  std::vector<Vec> nodes;      // x_0 ... x_m, m <= n
  std::vector<Vec> integrals;  // I_k = int_{t_k}^{t_{k+1}} f(s, x_k) ds
  std::vector<StepDiagnostics> steps;

  bool complete() const { return static_cast<int>(steps.size()) == grid.size(); }
  std::vector<int> failed_cells() const;
};

class ProjectionFailed : public std::runtime_error {
 public:
  ProjectionFailed(const std::string& what, Trajectory partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const Trajectory& partial() const { return partial_; }

 private:
  Trajectory partial_;
};

Trajectory solve(const SweepingProblem& problem, int n, const EpsSchedule& schedule,
                 const StepperConfig& cfg = {});

/// Piecewise interpolant x_n(t); nodes are reproduced at grid points.
Vec interpolate(const Trajectory& traj, double t);

enum class Side { interior, left, right };

/// x_n'(t) = (x_{k+1} - x_k - I_k) / mu + f(t, x_k). At a grid node the side
/// flag selects the adjacent cell; Side::interior throws there.
Vec velocity(const Trajectory& traj, double t, Side side = Side::interior);

}  // namespace sweep

#endif  // SWEEP_SOLVER_HPP
