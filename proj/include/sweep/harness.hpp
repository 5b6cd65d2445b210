#ifndef SWEEP_HARNESS_HPP
#define SWEEP_HARNESS_HPP

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sweep/audit.hpp"
#include "sweep/solver.hpp"

namespace sweep {

class UnknownProblem : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class ProblemId { dragging_interval, translating_halfspace, interior_ode, translating_disk };

std::string to_string(ProblemId id);
/// Throws UnknownProblem.
ProblemId parse_problem_id(const std::string& name);
const std::vector<ProblemId>& catalog();

/// dragging_interval:     C(t) = [t, t + 1],           F = 0,    x0 = 0
/// translating_halfspace: C(t) = {x_1 >= t} in R^2,    F = 0,    x0 = (0, 0)
/// interior_ode:          C = ball(0, 10) fixed,       F = {-x}, x0 = (1, 0)
/// translating_disk:      C(t) = ball((t, 0), 1),      F = 0,    x0 = (-1, 0)
SweepingProblem catalog_problem(ProblemId id, double horizon = 1.0);
/// Frank-Wolfe for the translating disk, automatic elsewhere.
OracleKind default_oracle(ProblemId id);
/// Closed-form solution.
Vec reference_solution(ProblemId id, double t);

using Reference = std::function<Vec(double)>;

/// t_j = j T / (count - 1), j = 0 .. count - 1.
std::vector<double> evaluation_times(double horizon, int count = 1000);
/// max_j |x_n(t_j) - ref(t_j)|
double sup_error(const Trajectory& traj, const Reference& ref, int count = 1000);
/// max_k |x_k - ref(t_k)|
double node_error(const Trajectory& traj, const Reference& ref);

enum class ReferenceKind { closed_form, fine_grid };
std::string to_string(ReferenceKind kind);
std::optional<ReferenceKind> parse_reference_kind(const std::string& name);

/// Errors below this are treated as exact (floating-point noise).
inline constexpr double kExactErrorFloor = 1e-13;

struct RateOptions {
  ReferenceKind reference = ReferenceKind::fine_grid;
  int n_ref = 0;  // 0: 4 * max(ladder)
  StepperConfig stepper;
  double slope_floor = 0.25;
  int evaluation_points = 1000;
};

struct RateEntry {
  int n = 0;
  double mu = 0.0;
  double eps = 0.0;
  double error = 0.0;
};

struct SelfConsistency {
  int n_ref = 0;
  double error = 0.0;  // sup |x_ref - closed form| on the evaluation grid
  double bound = 0.0;  // 2 (K4 mu + 2 sqrt(eps)) at n_ref
  bool passed() const { return error <= bound; }
};

struct RateStudy {
  std::string problem;
  std::vector<int> ladder;
  EpsSchedule schedule;
  ReferenceKind reference = ReferenceKind::fine_grid;
  int n_ref = 0;
  std::vector<RateEntry> entries;
  std::optional<double> slope;  // least squares of log E_n on log mu_n; empty when all E_n are exact
  std::vector<double> ratios;   // E_{n_{i+1}} / E_{n_i}
  std::optional<SelfConsistency> self_consistency;
  bool exact = false;  // every E_n below kExactErrorFloor
  bool strictly_decreasing = false;
  bool slope_floor_met = false;
  double slope_floor = 0.25;
  bool passed() const;
};

/// Least-squares slope of log y on log x.
double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Solves every ladder entry concurrently and measures E_n against the chosen
/// reference. The fine-grid reference uses exact projections when the set
/// has a closed form and eps = 1e-14 certificates otherwise.
RateStudy rate_study(const SweepingProblem& problem, const std::vector<int>& ladder, const EpsSchedule& schedule,
                     const RateOptions& options, const Reference& closed_form = {});
RateStudy rate_study(ProblemId id, const std::vector<int>& ladder, const EpsSchedule& schedule,
                     RateOptions options);

/// Fine-grid reference agrees with the closed form to within twice the
/// interpolant-lag bound K4 mu + 2 sqrt(eps) at n_ref.
SelfConsistency self_consistency_gate(const SweepingProblem& problem, const Trajectory& fine, const Reference& exact,
                                      int evaluation_points = 1000);

struct StabilityReport {
  std::vector<int> n;
  std::vector<double> eps;
  std::vector<double> error;  // |z_n - proj(x)|
  double tolerance = 1e-4;
  double final_error() const { return error.empty() ? 0.0 : error.back(); }
  bool converged() const { return final_error() <= tolerance; }
  /// error_{i+1} <= 2 error_i + tolerance for all i.
  bool monotone_within_band() const;
};

/// z_n = proj^{eps_n}(x + u / n) with eps_n = n^{-eps_power}, compared to the
/// exact projection of x.
StabilityReport stability_study(const SetDescription& set, const Vec& x, const Vec& u, const std::vector<int>& ns,
                                double eps_power = 2.0, OracleKind oracle = OracleKind::automatic,
                                double tolerance = 1e-4);

struct LipschitzCheck {
  double estimate = 0.0;  // max sampled d_H(C(t), C(s)) / |t - s|
  double declared = 0.0;
  bool passed() const { return estimate <= declared * (1.0 + 1e-9) + 1e-12; }
};

LipschitzCheck validate_lipschitz(const MovingSet& set, double horizon, int pairs = 16, int samples = 64,
                                  std::uint64_t seed = 0x1ab5);

}  // namespace sweep

#endif  // SWEEP_HARNESS_HPP
