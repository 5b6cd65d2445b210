#ifndef SWEEP_CONFIG_HPP
#define SWEEP_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sweep/harness.hpp"
#include "sweep/oracles.hpp"
#include "sweep/solver.hpp"

namespace sweep {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Inline set. kind: ball | box | halfspace | norm_sublevel | max_affine.
/// max_affine is {y : <a_i, y> <= b_i}, with the rows a_i flattened into
/// `normals`.
struct SetSpec {
  std::string kind;
  std::vector<double> center, lo, hi, normal, normals, offsets, slater, velocity;
  double radius = 1.0;
  double offset = 0.0;
};

/// kind: zero | linear_decay | interval | ball.
struct PerturbationSpec {
  std::string kind = "zero";
  double lo = 0.0, hi = 0.0;
  std::vector<double> center;
  double radius = 0.0;
};

struct RunConfig {
  std::optional<std::string> problem;  // catalog id
  double horizon = 1.0;
  int n = 64;
  std::vector<int> ladder;
  double gamma = 1e-8;
  std::uint64_t seed = 0;
  SolveMode mode = SolveMode::prox_regular;
  std::vector<double> x;   // query point for `project`
  std::vector<double> x0;  // initial condition for inline problems
  double schedule_c = 1.0;
  double schedule_p = 3.0;
  std::optional<OracleKind> oracle;  // unset: catalog default
  ProjectorConfig projector;
  ReferenceKind reference = ReferenceKind::fine_grid;
  int reference_n = 0;
  std::optional<SetSpec> set;
  PerturbationSpec perturbation;
};

/// Parses the dotted-section key/value format. Throws ConfigError on syntax
/// errors, unknown keys, and violated invariants (p > 2, gamma > 0, n >= 1, T > 0).
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

SetDescription build_set(const SetSpec& spec);
Perturbation build_perturbation(const PerturbationSpec& spec, int dim);
SweepingProblem build_problem(const RunConfig& cfg);
EpsSchedule build_schedule(const RunConfig& cfg);
StepperConfig stepper_config(const RunConfig& cfg);

}  // namespace sweep

#endif  // SWEEP_CONFIG_HPP
