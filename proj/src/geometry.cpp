#include "sweep/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "sweep/oracles.hpp"

namespace sweep {

namespace {

void require_finite(const Vec& v, const char* what) {
  if (v.size() < 1) throw std::invalid_argument(fmt::format("{}: dimension must be >= 1", what));
  if (!all_finite(v)) throw std::invalid_argument(fmt::format("{}: non-finite coordinate", what));
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

bool all_finite(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](double c) { return std::isfinite(c); });
}

SetDescription SetDescription::halfspace(Vec normal, double offset) {
  require_finite(normal, "halfspace normal");
  if (!(normal.norm() > 0.0)) throw std::invalid_argument("halfspace normal must be nonzero");
  if (!std::isfinite(offset)) throw std::invalid_argument("halfspace offset must be finite");
  const int d = static_cast<int>(normal.size());
  return SetDescription(Halfspace{std::move(normal), offset}, d);
}

SetDescription SetDescription::ball(Vec center, double radius) {
  require_finite(center, "ball center");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw std::invalid_argument("ball radius must be > 0");
  const int d = static_cast<int>(center.size());
  return SetDescription(Ball{std::move(center), radius}, d);
}

SetDescription SetDescription::box(Vec lo, Vec hi) {
  require_finite(lo, "box lo");
  require_finite(hi, "box hi");
  if (lo.size() != hi.size()) throw std::invalid_argument("box bounds differ in dimension");
  if ((lo.array() > hi.array()).any()) throw std::invalid_argument("box requires lo <= hi");
  const int d = static_cast<int>(lo.size());
  return SetDescription(Box{std::move(lo), std::move(hi)}, d);
}

SetDescription SetDescription::sublevel(ConvexFn g, double level, Vec slater) {
  require_finite(slater, "slater point");
  if (!g.eval || !g.subgrad) throw std::invalid_argument("sublevel function needs eval and subgrad");
  if (!(g.eval(slater) < level)) throw std::invalid_argument("slater point must satisfy g(slater) < level");
  const int d = static_cast<int>(slater.size());
  return SetDescription(Sublevel{std::move(g), level, std::move(slater)}, d);
}

SetDescription SetDescription::intersection(std::vector<ConvexFn> pieces, Vec slater) {
  if (pieces.empty()) throw std::invalid_argument("intersection needs at least one piece");
  auto shared = std::make_shared<const std::vector<ConvexFn>>(std::move(pieces));
  ConvexFn g;
  g.eval = [shared](const Vec& x) {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& p : *shared) m = std::max(m, p.eval(x));
    return m;
  };
  g.subgrad = [shared](const Vec& x) {
    std::size_t best = 0;
    double m = (*shared)[0].eval(x);
    for (std::size_t i = 1; i < shared->size(); ++i) {
      const double v = (*shared)[i].eval(x);
      if (v > m) {  // strict: ties keep the lowest index
        m = v;
        best = i;
      }
    }
    return (*shared)[best].subgrad(x);
  };
  return sublevel(std::move(g), 0.0, std::move(slater));
}

SetDescription SetDescription::with_regularity(RegularityTag tag) const {
  if (!(tag.rho > 0.0)) throw std::invalid_argument("regularity radius rho must be > 0");
  SetDescription copy = *this;
  copy.regularity_ = tag;
  return copy;
}

std::string SetDescription::kind_name() const {
  return std::visit(overloaded{[](const Halfspace&) { return std::string("halfspace"); },
                               [](const Ball&) { return std::string("ball"); },
                               [](const Box&) { return std::string("box"); },
                               [](const Sublevel&) { return std::string("sublevel"); }},
                    kind_);
}

bool SetDescription::same_parameters(const SetDescription& other) const {
  if (kind_.index() != other.kind_.index() || dim_ != other.dim_) return false;
  return std::visit(
      overloaded{[&](const Halfspace& h) {
                   const auto& o = std::get<Halfspace>(other.kind_);
                   return h.normal == o.normal && h.offset == o.offset;
                 },
                 [&](const Ball& b) {
                   const auto& o = std::get<Ball>(other.kind_);
                   return b.center == o.center && b.radius == o.radius;
                 },
                 [&](const Box& b) {
                   const auto& o = std::get<Box>(other.kind_);
                   return b.lo == o.lo && b.hi == o.hi;
                 },
                 [&](const Sublevel&) { return this == &other; }},
      kind_);
}

SetDescription translate(const SetDescription& set, const Vec& offset) {
  if (offset.size() != set.dim()) throw std::invalid_argument("translate: dimension mismatch");
  auto moved = std::visit(
      overloaded{
          [&](const Halfspace& h) { return SetDescription::halfspace(h.normal, h.offset + h.normal.dot(offset)); },
          [&](const Ball& b) { return SetDescription::ball(b.center + offset, b.radius); },
          [&](const Box& b) { return SetDescription::box(b.lo + offset, b.hi + offset); },
          [&](const Sublevel& s) {
            ConvexFn g;
            g.eval = [f = s.g.eval, offset](const Vec& x) { return f(x - offset); };
            g.subgrad = [f = s.g.subgrad, offset](const Vec& x) { return f(x - offset); };
            return SetDescription::sublevel(std::move(g), s.level, s.slater + offset);
          }},
      set.kind());
  return moved.with_regularity(set.regularity());
}

MovingSet MovingSet::fixed(SetDescription set) {
  return MovingSet{[set = std::move(set)](double) { return set; }, 0.0};
}

MovingSet MovingSet::translating(SetDescription base, Vec velocity) {
  if (velocity.size() != base.dim()) throw std::invalid_argument("velocity dimension mismatch");
  const double speed = velocity.norm();
  return MovingSet{[base = std::move(base), velocity = std::move(velocity)](double t) {
                     return translate(base, t * velocity);
                   },
                   speed};
}

Vec exact_project(const SetDescription& set, const Vec& x) {
  if (x.size() != set.dim()) throw std::invalid_argument("exact_project: dimension mismatch");
  return std::visit(overloaded{[&](const Halfspace& h) -> Vec {
                                 const double gap = h.offset - h.normal.dot(x);
                                 if (gap <= 0.0) return x;
                                 return x + (gap / h.normal.squaredNorm()) * h.normal;
                               },
                               [&](const Ball& b) -> Vec {
                                 const Vec r = x - b.center;
                                 const double n = r.norm();
                                 if (n <= b.radius) return x;
                                 return b.center + (b.radius / n) * r;
                               },
                               [&](const Box& b) -> Vec { return x.cwiseMax(b.lo).cwiseMin(b.hi); },
                               [&](const Sublevel&) -> Vec {
                                 throw UnsupportedKind("no closed-form projection onto a sublevel set");
                               }},
                    set.kind());
}

Distance distance(const SetDescription& set, const Vec& x, double oracle_eps) {
  if (set.has_closed_form()) return {(x - exact_project(set, x)).norm(), false};
  const auto& sub = std::get<Sublevel>(set.kind());
  if (sub.g.eval(x) <= sub.level) return {0.0, false};
  ProjectorConfig cfg;
  cfg.eps = oracle_eps;
  cfg.feas_tol = default_feas_tol(set);
  const auto res = cutting_plane_project(sub, x, cfg);
  return {(x - res.point).norm(), true};
}

double residual(const SetDescription& set, const Vec& x) {
  if (x.size() != set.dim()) throw std::invalid_argument("residual: dimension mismatch");
  return std::visit(overloaded{[&](const Halfspace& h) { return (h.offset - h.normal.dot(x)) / h.normal.norm(); },
                               [&](const Ball& b) { return (x - b.center).norm() - b.radius; },
                               [&](const Box& b) {
                                 return std::max((b.lo - x).maxCoeff(), (x - b.hi).maxCoeff());
                               },
                               [&](const Sublevel& s) { return s.g.eval(x) - s.level; }},
                    set.kind());
}

double prox_eps0(double gamma, double rho) {
  if (gamma >= 1.0) throw NoRoot("prox_eps0: gamma must be < 1");
  if (!(gamma > 0.0)) throw std::invalid_argument("prox_eps0: gamma must be > 0");
  if (!(rho > 0.0)) throw std::invalid_argument("prox_eps0: rho must be > 0");
  const double inv_rho = std::isinf(rho) ? 0.0 : 1.0 / rho;
  // Strictly increasing in s = sqrt(eps0); negative at s = 0.
  auto lhs = [&](double s) { return gamma + 4.0 * s * (1.0 + gamma + inv_rho * (1.0 + 4.0 * s)) - 1.0; };
  double lo = 0.0;
  double hi = (1.0 - gamma) / (4.0 * (1.0 + gamma));  // lhs(hi) >= 0
  // Bisect to the floating-point limit, well past the 1e-12 target.
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (lhs(mid) < 0.0 ? lo : hi) = mid;
  }
  const double s = std::abs(lhs(lo)) <= std::abs(lhs(hi)) ? lo : hi;
  return s * s;
}

namespace {

// Reference point and boundary sampler for the one-sided excess estimate.
std::vector<Vec> boundary_samples(const SetDescription& set, int samples, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const int d = set.dim();
  auto direction = [&]() {
    Vec u(d);
    do {
      for (int i = 0; i < d; ++i) u[i] = normal(rng);
    } while (u.norm() == 0.0);
    return Vec(u / u.norm());
  };
  std::vector<Vec> pts;
  pts.reserve(samples);
  std::visit(overloaded{[&](const Halfspace& h) {
                          // Boundary is unbounded: sample a patch around the point nearest the origin.
                          const Vec base = (h.offset / h.normal.squaredNorm()) * h.normal;
                          const Vec unit = h.normal / h.normal.norm();
                          for (int i = 0; i < samples; ++i) {
                            Vec u = direction();
                            u -= u.dot(unit) * unit;
                            pts.push_back(base + u);
                          }
                        },
                        [&](const Ball& b) {
                          for (int i = 0; i < samples; ++i) pts.push_back(b.center + b.radius * direction());
                        },
                        [&](const Box& b) {
                          const Vec mid = 0.5 * (b.lo + b.hi);
                          const Vec half = 0.5 * (b.hi - b.lo);
                          if (d <= 10) {
                            for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
                              Vec corner = b.lo;
                              for (int i = 0; i < d; ++i)
                                if (mask & (1u << i)) corner[i] = b.hi[i];
                              pts.push_back(corner);
                            }
                          }
                          for (int i = 0; i < samples; ++i) {
                            const Vec u = direction();
                            double scale = std::numeric_limits<double>::infinity();
                            for (int j = 0; j < d; ++j)
                              if (u[j] != 0.0) scale = std::min(scale, half[j] / std::abs(u[j]));
                            pts.push_back(mid + scale * u);
                          }
                        },
                        [&](const Sublevel& s) {
                          constexpr double kReach = 1e6;  // cap for unbounded sublevel sets
                          for (int i = 0; i < samples; ++i) {
                            const Vec u = direction();
                            double lo = 0.0;
                            double hi = 1.0;
                            while (hi < kReach && s.g.eval(s.slater + hi * u) <= s.level) hi *= 2.0;
                            for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
                              const double mid = 0.5 * (lo + hi);
                              (s.g.eval(s.slater + mid * u) <= s.level ? lo : hi) = mid;
                            }
                            pts.push_back(s.slater + lo * u);
                          }
                        }},
             set.kind());
  return pts;
}

// Certified lower bound on d_B(p).
double distance_lower_bound(const SetDescription& b, const Vec& p) {
  if (b.has_closed_form()) return (p - exact_project(b, p)).norm();
  ProjectorConfig cfg;
  cfg.eps = 1e-12;
  cfg.feas_tol = default_feas_tol(b);
  const auto res = approx_project(b, p, cfg);
  const double sq = (p - res.point).squaredNorm() - res.certified_eps;
  return std::sqrt(std::max(0.0, sq));
}

double excess(const SetDescription& a, const SetDescription& b, int samples, std::mt19937_64& rng) {
  double e = 0.0;
  for (const Vec& p : boundary_samples(a, samples, rng)) e = std::max(e, distance_lower_bound(b, p));
  return e;
}

}  // namespace

double hausdorff_estimate(const SetDescription& a, const SetDescription& b, int samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("hausdorff_estimate: samples must be >= 1");
  if (a.dim() != b.dim()) throw std::invalid_argument("hausdorff_estimate: dimension mismatch");
  std::mt19937_64 rng(seed);
  const double ab = excess(a, b, samples, rng);
  const double ba = excess(b, a, samples, rng);
  return std::max(ab, ba);
}

}  // namespace sweep
