#ifndef SWEEP_PERTURBATION_HPP
#define SWEEP_PERTURBATION_HPP

#include <functional>
#include <optional>

#include "sweep/geometry.hpp"
#include "sweep/oracles.hpp"

namespace sweep {

/// Set-valued perturbation F(t, x) with closed convex values.
///
/// Upper semicontinuity of F(t, .) is a contract on the caller; it cannot be
/// checked numerically.
struct Perturbation {
  std::function<SetDescription(double, const Vec&)> values;
  std::function<double(const Vec&)> growth;  // h(x) >= d(0, F(t, x))
  double growth_lipschitz = 0.0;             // L_h
  /// k(t) with <y - y', x - x'> <= k(t) |x - x'|^2 for y in F(t,x), y' in F(t,x').
  std::optional<std::function<double(double)>> monotonicity;
  bool time_independent = false;
};

/// gamma-approximate minimal-norm element of F(t, x): feasible, with
/// |f|^2 < d(0, F(t,x))^2 + gamma.
Vec min_norm_selection(const Perturbation& p, double t, const Vec& x, double gamma,
                       OracleKind oracle = OracleKind::automatic);

/// Deterministic selection f(t, x) together with its integration rule.
struct Selection {
  std::function<Vec(double, const Vec&)> f;
  double gamma = 1e-8;
  bool time_independent = false;
  int quadrature_nodes = 4;
};

Selection make_selection(const Perturbation& p, double gamma, OracleKind oracle = OracleKind::automatic);

/// Integral of s -> f(s, x) over [a, b] with x frozen: composite midpoint rule
/// on quadrature_nodes sub-cells, or f(a, x)(b - a) when time-independent.
Vec cell_integral(const Selection& sel, const Vec& x, double a, double b);

namespace perturbations {

/// F = {0}
Perturbation zero(int dim);
/// F(t, x) = {-x}; h(x) = |x|, L_h = 1, monotone with k = 0.
Perturbation linear_decay(int dim);
/// Constant interval [lo, hi] in R^1.
Perturbation interval(double lo, double hi);
/// Constant ball.
Perturbation ball(Vec center, double radius);

}  // namespace perturbations

}  // namespace sweep

#endif  // SWEEP_PERTURBATION_HPP
