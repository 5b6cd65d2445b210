#include "sweep/perturbation.hpp"

#include <cmath>

namespace sweep {

Vec min_norm_selection(const Perturbation& p, double t, const Vec& x, double gamma, OracleKind oracle) {
  if (!(gamma > 0.0)) throw std::invalid_argument("min_norm_selection: gamma must be > 0");
  const SetDescription value = p.values(t, x);
  ProjectorConfig cfg;
  cfg.eps = 0.5 * gamma;  // strict inequality against gamma
  cfg.feas_tol = default_feas_tol(value);
  return approx_project(value, Vec::Zero(value.dim()), cfg, oracle).point;
}

Selection make_selection(const Perturbation& p, double gamma, OracleKind oracle) {
  if (!(gamma > 0.0)) throw std::invalid_argument("make_selection: gamma must be > 0");
  Selection sel;
  sel.gamma = gamma;
  sel.time_independent = p.time_independent;
  sel.f = [p, gamma, oracle](double t, const Vec& x) { return min_norm_selection(p, t, x, gamma, oracle); };
  return sel;
}

Vec cell_integral(const Selection& sel, const Vec& x, double a, double b) {
  if (!(a <= b)) throw std::invalid_argument("cell_integral: requires a <= b");
  const double len = b - a;
  if (sel.time_independent) return sel.f(a, x) * len;
  const int q = sel.quadrature_nodes;
  if (q < 1) throw std::invalid_argument("cell_integral: quadrature_nodes must be >= 1");
  const double h = len / q;
  Vec acc = Vec::Zero(x.size());
  for (int i = 0; i < q; ++i) acc += sel.f(a + (i + 0.5) * h, x);
  return acc * h;
}

namespace perturbations {

Perturbation zero(int dim) {
  Perturbation p;
  p.values = [dim](double, const Vec&) { return SetDescription::box(Vec::Zero(dim), Vec::Zero(dim)); };
  p.growth = [](const Vec&) { return 0.0; };
  p.growth_lipschitz = 0.0;
  p.monotonicity = [](double) { return 0.0; };
  p.time_independent = true;
  return p;
}

Perturbation linear_decay(int dim) {
  Perturbation p;
  p.values = [dim](double, const Vec& x) {
    if (x.size() != dim) throw std::invalid_argument("linear_decay: dimension mismatch");
    return SetDescription::box(-x, -x);
  };
  p.growth = [](const Vec& x) { return x.norm(); };
  p.growth_lipschitz = 1.0;
  p.monotonicity = [](double) { return 0.0; };
  p.time_independent = true;
  return p;
}

Perturbation interval(double lo, double hi) {
  Perturbation p;
  const auto value = SetDescription::box(Vec::Constant(1, lo), Vec::Constant(1, hi));
  p.values = [value](double, const Vec&) { return value; };
  const double h = lo > 0.0 ? lo : (hi < 0.0 ? -hi : 0.0);
  p.growth = [h](const Vec&) { return h; };
  p.growth_lipschitz = 0.0;
  p.time_independent = true;
  return p;
}

Perturbation ball(Vec center, double radius) {
  Perturbation p;
  const auto value = SetDescription::ball(center, radius);
  p.values = [value](double, const Vec&) { return value; };
  const double h = std::max(0.0, center.norm() - radius);
  p.growth = [h](const Vec&) { return h; };
  p.growth_lipschitz = 0.0;
  p.time_independent = true;
  return p;
}

}  // namespace perturbations

}  // namespace sweep
