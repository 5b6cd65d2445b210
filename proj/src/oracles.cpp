#include "sweep/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sweep {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Absolute floating-point error budget for comparing squared distances of
// points of magnitude up to `span`. Added to every non-exact certificate.
double roundoff_allowance(double span) {
  constexpr double kUnit = std::numeric_limits<double>::epsilon();
  return 64.0 * kUnit * (1.0 + span * span);
}

ProjectionResult interior(const Vec& x) { return {x, 0.0, 0, true}; }

Vec restore_on_segment(const Sublevel& set, const Vec& infeasible) {
  // g(slater) < level < g(infeasible); keep the feasible end.
  const Vec dir = infeasible - set.slater;
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (set.g.eval(set.slater + mid * dir) <= set.level ? lo : hi) = mid;
  }
  return set.slater + lo * dir;
}

}  // namespace

std::string to_string(OracleKind kind) {
  switch (kind) {
    case OracleKind::automatic: return "automatic";
    case OracleKind::exact: return "exact";
    case OracleKind::frank_wolfe: return "frank_wolfe";
    case OracleKind::cutting_plane: return "cutting_plane";
  }
  return "automatic";
}

std::optional<OracleKind> parse_oracle_kind(const std::string& name) {
  if (name == "automatic" || name == "auto") return OracleKind::automatic;
  if (name == "exact") return OracleKind::exact;
  if (name == "frank_wolfe" || name == "fw") return OracleKind::frank_wolfe;
  if (name == "cutting_plane" || name == "cp") return OracleKind::cutting_plane;
  return std::nullopt;
}

LinearMinimizer linear_minimizer(const SetDescription& set) {
  return std::visit(
      overloaded{[](const Ball& b) -> LinearMinimizer {
                   return [b](const Vec& w) -> Vec {
                     const double n = w.norm();
                     if (n == 0.0) return b.center;
                     return b.center - (b.radius / n) * w;
                   };
                 },
                 [](const Box& b) -> LinearMinimizer {
                   return [b](const Vec& w) -> Vec {
                     Vec s(w.size());
                     for (Eigen::Index i = 0; i < w.size(); ++i) s[i] = w[i] > 0.0 ? b.lo[i] : b.hi[i];
                     return s;
                   };
                 },
                 [](const Halfspace&) -> LinearMinimizer {
                   throw UnsupportedKind("halfspace is unbounded: no linear-minimization oracle");
                 },
                 [](const Sublevel&) -> LinearMinimizer {
                   throw UnsupportedKind("sublevel sets expose a separation oracle, not an LMO");
                 }},
      set.kind());
}

Vec frank_wolfe_start(const SetDescription& set) {
  return linear_minimizer(set)(Vec::Ones(set.dim()));
}

ProjectionResult frank_wolfe_project(const LinearMinimizer& lmo, const Vec& x, const Vec& start,
                                     const ProjectorConfig& cfg) {
  if (!(cfg.eps > 0.0)) throw std::invalid_argument("frank_wolfe_project: eps must be > 0");
  if (cfg.max_iter < 1) throw std::invalid_argument("frank_wolfe_project: max_iter must be >= 1");
  Vec z = start;
  double cert = std::numeric_limits<double>::infinity();
  for (int it = 0; it < cfg.max_iter; ++it) {
    const Vec half_grad = z - x;
    const Vec s = lmo(half_grad);
    const Vec dir = s - z;
    const double gap = -2.0 * half_grad.dot(dir);
    const double span = x.norm() + z.norm() + s.norm();
    cert = std::max(gap, 0.0) + (gap == 0.0 && half_grad.squaredNorm() == 0.0 ? 0.0 : roundoff_allowance(span));
    if (cert <= cfg.eps) return {z, cert, it, true};
    const double denom = dir.squaredNorm();
    if (denom == 0.0) return {z, cert, it, cert <= cfg.eps};
    const double tau = std::clamp(-half_grad.dot(dir) / denom, 0.0, 1.0);
    z += tau * dir;
  }
  // Certificate of the final iterate.
  const Vec half_grad = z - x;
  const Vec s = lmo(half_grad);
  const double gap = 2.0 * half_grad.dot(z - s);
  cert = std::max(gap, 0.0) + roundoff_allowance(x.norm() + z.norm() + s.norm());
  return {z, cert, cfg.max_iter, cert <= cfg.eps};
}

Separation separation_oracle(const Sublevel& set, const Vec& x) {
  const double gx = set.g.eval(x);
  if (gx <= set.level) return Member{};
  Vec normal = set.g.subgrad(x);
  if (normal.norm() == 0.0) throw ZeroSubgradient("zero subgradient at an infeasible point: g is not convex");
  const double offset = normal.dot(x) - (gx - set.level);
  return Hyperplane{std::move(normal), offset};
}

ProjectionResult cutting_plane_project(const Sublevel& set, const Vec& x, const ProjectorConfig& cfg,
                                       const CutObserver& observer) {
  if (!(cfg.eps > 0.0)) throw std::invalid_argument("cutting_plane_project: eps must be > 0");
  if (cfg.max_iter < 1) throw std::invalid_argument("cutting_plane_project: max_iter must be >= 1");
  if (set.g.eval(x) <= set.level) return interior(x);

  std::vector<Hyperplane> cuts;
  Vec w = x;
  Vec best = set.slater;
  double best_upper = (x - set.slater).squaredNorm();
  double lower = 0.0;  // |x - w|^2 <= d_C(x)^2 because the cuts contain C
  const double allowance = roundoff_allowance(2.0 * x.norm() + set.slater.norm() + 1.0);

  for (int it = 1; it <= cfg.max_iter; ++it) {
    const auto sep = separation_oracle(set, w);
    if (std::holds_alternative<Member>(sep)) {
      // w is the projection onto an outer set and lies in C: optimal.
      return {w, allowance, it - 1, allowance <= cfg.eps};
    }
    cuts.push_back(std::get<Hyperplane>(sep));
    w = project_onto_polyhedron(cuts, x, set.slater);
    lower = std::max(lower, (x - w).squaredNorm());
    if (observer) observer(lower, w);

    Vec candidate = set.g.eval(w) <= set.level ? w : restore_on_segment(set, w);
    const double upper = (x - candidate).squaredNorm();
    if (upper < best_upper) {
      best_upper = upper;
      best = std::move(candidate);
    }
    const double cert = std::max(best_upper - lower, 0.0) + allowance;
    if (cert <= cfg.eps) return {best, cert, it, true};
  }
  return {best, std::max(best_upper - lower, 0.0) + allowance, cfg.max_iter, false};
}

Sublevel as_sublevel(const SetDescription& set) {
  const SetDescription sub = std::visit(
      overloaded{[&](const Ball& b) {
                   ConvexFn g;
                   g.eval = [c = b.center, r2 = b.radius * b.radius](const Vec& y) {
                     return (y - c).squaredNorm() - r2;
                   };
                   g.subgrad = [c = b.center](const Vec& y) { return Vec(2.0 * (y - c)); };
                   return SetDescription::sublevel(std::move(g), 0.0, b.center);
                 },
                 [&](const Box& b) {
                   if ((b.hi.array() <= b.lo.array()).any())
                     throw UnsupportedKind("degenerate box has no Slater point");
                   std::vector<ConvexFn> pieces;
                   const auto d = b.lo.size();
                   for (Eigen::Index i = 0; i < d; ++i) {
                     Vec e = Vec::Zero(d);
                     e[i] = 1.0;
                     pieces.push_back({[i, hi = b.hi[i]](const Vec& y) { return y[i] - hi; },
                                       [e](const Vec&) { return e; }});
                     pieces.push_back({[i, lo = b.lo[i]](const Vec& y) { return lo - y[i]; },
                                       [e](const Vec&) { return Vec(-e); }});
                   }
                   return SetDescription::intersection(std::move(pieces), 0.5 * (b.lo + b.hi));
                 },
                 [&](const Halfspace& h) {
                   const double n = h.normal.norm();
                   const Vec unit = h.normal / n;
                   const Vec foot = (h.offset / h.normal.squaredNorm()) * h.normal;
                   ConvexFn g;
                   g.eval = [unit, c = h.offset / n](const Vec& y) { return c - unit.dot(y); };
                   g.subgrad = [unit](const Vec&) { return Vec(-unit); };
                   return SetDescription::sublevel(std::move(g), 0.0, foot + unit);
                 },
                 [&](const Sublevel&) { return set; }},
      set.kind());
  return std::get<Sublevel>(sub.kind());
}

double default_feas_tol(const SetDescription& set) { return set.has_closed_form() ? 1e-12 : 1e-10; }

ProjectionResult approx_project(const SetDescription& set, const Vec& x, const ProjectorConfig& cfg,
                                OracleKind kind) {
  if (x.size() != set.dim()) throw std::invalid_argument("approx_project: dimension mismatch");
  if (!(cfg.eps > 0.0)) throw std::invalid_argument("approx_project: eps must be > 0");
  if (residual(set, x) <= 0.0) return interior(x);

  if (kind == OracleKind::automatic) kind = set.has_closed_form() ? OracleKind::exact : OracleKind::cutting_plane;
  switch (kind) {
    case OracleKind::exact:
      return {exact_project(set, x), 0.0, 1, true};
    case OracleKind::frank_wolfe:
      return frank_wolfe_project(linear_minimizer(set), x, frank_wolfe_start(set), cfg);
    case OracleKind::cutting_plane: {
      const Sublevel sub = std::holds_alternative<Sublevel>(set.kind()) ? std::get<Sublevel>(set.kind())
                                                                        : as_sublevel(set);
      return cutting_plane_project(sub, x, cfg);
    }
    case OracleKind::automatic:
      break;
  }
  throw UnsupportedKind("unreachable oracle dispatch");
}

}  // namespace sweep
