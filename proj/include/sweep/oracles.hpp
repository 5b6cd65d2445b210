#ifndef SWEEP_ORACLES_HPP
#define SWEEP_ORACLES_HPP

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sweep/geometry.hpp"

namespace sweep {

class ZeroSubgradient : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ProjectorConfig {
  double eps = 1e-10;  // requested certificate
  int max_iter = 1000000;
  double feas_tol = 1e-12;
};

/// z in C with |x - z|^2 <= d_C(x)^2 + certified_eps.
struct ProjectionResult {
  Vec point;
  double certified_eps = 0.0;
  int iterations = 0;
  bool converged = true;  // false: budget exhausted, certificate is what was achieved
};

enum class OracleKind { automatic, exact, frank_wolfe, cutting_plane };

std::string to_string(OracleKind kind);
std::optional<OracleKind> parse_oracle_kind(const std::string& name);

/// s(w) = argmin_{y in C} <w, y>
using LinearMinimizer = std::function<Vec(const Vec&)>;

/// Exact LMO for ball and box; UnsupportedKind otherwise.
LinearMinimizer linear_minimizer(const SetDescription& set);

/// Vertex used to start Frank-Wolfe: s(1, ..., 1).
Vec frank_wolfe_start(const SetDescription& set);

/// Frank-Wolfe on |x - z|^2 with exact line search. Stops once the duality gap
/// 2 <z - x, z - s> (plus a floating-point allowance) is <= cfg.eps. The start
/// must be feasible; iterates stay feasible by convexity.
ProjectionResult frank_wolfe_project(const LinearMinimizer& lmo, const Vec& x, const Vec& start,
                                     const ProjectorConfig& cfg);

struct Member {};

/// Every member y satisfies <normal, y> <= offset.
struct Hyperplane {
  Vec normal;
  double offset = 0.0;
};

using Separation = std::variant<Member, Hyperplane>;

Separation separation_oracle(const Sublevel& set, const Vec& x);

/// Euclidean projection of x onto {y : <a_i, y> <= b_i for all cuts}, by a
/// primal active-set method started from a feasible point.
Vec project_onto_polyhedron(const std::vector<Hyperplane>& cuts, const Vec& x,
                            const Vec& feasible_start);

/// Optional per-iteration observer: (outer lower bound |x - w|^2, w).
using CutObserver = std::function<void(double, const Vec&)>;

/// Outer-approximation projection with Slater-segment feasibility restoration.
ProjectionResult cutting_plane_project(const Sublevel& set, const Vec& x, const ProjectorConfig& cfg,
                                       const CutObserver& observer = {});

/// Sublevel representation of a closed-form set (ball: |x-c|^2 - r^2,
/// box and halfspace: max of affine pieces).
Sublevel as_sublevel(const SetDescription& set);

/// Certified eps-projection. automatic: interior short-circuit, then exact
/// projection when a closed form exists, else cutting planes.
ProjectionResult approx_project(const SetDescription& set, const Vec& x, const ProjectorConfig& cfg,
                                OracleKind kind = OracleKind::automatic);

/// Feasibility tolerance applied to points returned for this set.
double default_feas_tol(const SetDescription& set);

}  // namespace sweep

#endif  // SWEEP_ORACLES_HPP
