#ifndef SWEEP_GEOMETRY_HPP
#define SWEEP_GEOMETRY_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace sweep {

/// State/velocity vector in R^d.
using Vec = Eigen::VectorXd;

class UnsupportedKind : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoRoot : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Continuous convex function g with one subgradient selection.
struct ConvexFn {
  std::function<double(const Vec&)> eval;
  std::function<Vec(const Vec&)> subgrad;
};

/// {x : <normal, x> >= offset}
struct Halfspace {
  Vec normal;
  double offset = 0.0;
};

struct Ball {
  Vec center;
  double radius = 1.0;
};

struct Box {
  Vec lo;
  Vec hi;
};

/// {x : g(x) <= level}, with a strictly feasible anchor g(slater) < level.
struct Sublevel {
  ConvexFn g;
  double level = 0.0;
  Vec slater;
};

enum class Regularity { convex, prox_regular, subsmooth, closed };

struct RegularityTag {
  Regularity kind = Regularity::convex;
  double rho = std::numeric_limits<double>::infinity();
};

/// Immutable description of a closed set in R^d.
class SetDescription {
 public:
  using Kind = std::variant<Halfspace, Ball, Box, Sublevel>;

  static SetDescription halfspace(Vec normal, double offset);
  static SetDescription ball(Vec center, double radius);
  static SetDescription box(Vec lo, Vec hi);
  static SetDescription sublevel(ConvexFn g, double level, Vec slater);
  /// Finite intersection {max_i g_i <= 0}; the subgradient is taken from the
  /// lowest-index active piece.
  static SetDescription intersection(std::vector<ConvexFn> pieces, Vec slater);

  const Kind& kind() const { return kind_; }
  int dim() const { return dim_; }
  bool has_closed_form() const { return !std::holds_alternative<Sublevel>(kind_); }
  const RegularityTag& regularity() const { return regularity_; }
  /// Convex sets accept any prox-regular tag; rho must be positive.
  SetDescription with_regularity(RegularityTag tag) const;
  std::string kind_name() const;

  /// Parameter equality; sublevel sets compare unequal unless both are the
  /// same object.
  bool same_parameters(const SetDescription& other) const;

 private:
  explicit SetDescription(Kind kind, int dim) : kind_(std::move(kind)), dim_(dim) {}

  Kind kind_;
  int dim_ = 0;
  RegularityTag regularity_;
};

/// Translate a set by offset: returns {y + offset : y in set}.
SetDescription translate(const SetDescription& set, const Vec& offset);

/// t -> C(t) with Hausdorff-Lipschitz constant L_C.
struct MovingSet {
  std::function<SetDescription(double)> at;
  double lipschitz = 0.0;

  static MovingSet fixed(SetDescription set);
  /// C(t) = base + t * velocity, L_C = |velocity|.
  static MovingSet translating(SetDescription base, Vec velocity);
};

bool all_finite(const Vec& v);

Vec exact_project(const SetDescription& set, const Vec& x);

struct Distance {
  double value = 0.0;
  bool upper_bound = false;  // true when only a certified upper bound is known
};

/// Exact for closed-form kinds; for sublevel kinds the distance to a certified
/// feasible point whose squared gap to the optimum is at most oracle_eps.
Distance distance(const SetDescription& set, const Vec& x, double oracle_eps = 1e-12);

/// <= 0 iff x is in the set.
double residual(const SetDescription& set, const Vec& x);

/// Root eps0 > 0 of gamma + 4 sqrt(eps0) (1 + gamma + (1 + 4 sqrt(eps0)) / rho) = 1.
double prox_eps0(double gamma, double rho);

/// Lower-bound estimate of the Hausdorff distance from sampled boundary points.
double hausdorff_estimate(const SetDescription& a, const SetDescription& b, int samples,
                          std::uint64_t seed = 0x5eed);

}  // namespace sweep

#endif  // SWEEP_GEOMETRY_HPP
