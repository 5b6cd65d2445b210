#include <doctest.h>

#include <cmath>
#include <random>

#include "sweep/oracles.hpp"

using namespace sweep;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

ProjectorConfig with_eps(double eps) {
  ProjectorConfig c;
  c.eps = eps;
  return c;
}

}  // namespace

TEST_CASE("oracle kind names") {
  CHECK(parse_oracle_kind("fw") == OracleKind::frank_wolfe);
  CHECK(parse_oracle_kind("cp") == OracleKind::cutting_plane);
  CHECK(parse_oracle_kind("exact") == OracleKind::exact);
  CHECK_FALSE(parse_oracle_kind("newton").has_value());
  for (auto k : {OracleKind::automatic, OracleKind::exact, OracleKind::frank_wolfe, OracleKind::cutting_plane})
    CHECK(parse_oracle_kind(to_string(k)) == k);
}

TEST_CASE("linear minimizers") {
  const auto ball = SetDescription::ball(v2(1, 0), 2.0);
  CHECK((linear_minimizer(ball)(v2(0, 1)) - v2(1, -2)).norm() == doctest::Approx(0.0));
  const auto box = SetDescription::box(v2(0, 0), v2(1, 2));
  CHECK((linear_minimizer(box)(v2(1, -1)) - v2(0, 2)).norm() == 0.0);
  CHECK_THROWS_AS(linear_minimizer(SetDescription::halfspace(v2(1, 0), 0.0)), UnsupportedKind);
}

TEST_CASE("Frank-Wolfe on a disk meets its certificate") {
  const auto ball = SetDescription::ball(v2(0, 0), 1.0);
  const Vec x = v2(3, 1);
  for (double eps : {1e-2, 1e-5, 1e-9}) {
    const auto r = approx_project(ball, x, with_eps(eps), OracleKind::frank_wolfe);
    CHECK(r.converged);
    CHECK(r.certified_eps <= eps);
    CHECK(residual(ball, r.point) <= 1e-12);
    const double opt = (x - exact_project(ball, x)).squaredNorm();
    CHECK((x - r.point).squaredNorm() <= opt + r.certified_eps);
    // Strong convexity: |z - P x|^2 <= eps.
    CHECK((r.point - exact_project(ball, x)).squaredNorm() <= r.certified_eps);
  }
}

TEST_CASE("Frank-Wolfe budget exhaustion is reported") {
  const auto ball = SetDescription::ball(v2(0, 0), 1.0);
  ProjectorConfig c = with_eps(1e-14);
  c.max_iter = 3;
  const auto r = approx_project(ball, v2(3, 1), c, OracleKind::frank_wolfe);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 3);
  CHECK(residual(ball, r.point) <= 1e-12);
}

TEST_CASE("interior points are returned unchanged") {
  const auto box = SetDescription::box(v2(0, 0), v2(1, 1));
  for (auto k : {OracleKind::automatic, OracleKind::frank_wolfe, OracleKind::cutting_plane}) {
    const auto r = approx_project(box, v2(0.5, 0.25), with_eps(1e-10), k);
    CHECK(r.point == v2(0.5, 0.25));
    CHECK(r.certified_eps == 0.0);
  }
}

TEST_CASE("separation oracle") {
  const Sublevel disk = as_sublevel(SetDescription::ball(v2(0, 0), 1.0));
  CHECK(std::holds_alternative<Member>(separation_oracle(disk, v2(0.5, 0))));
  const auto sep = separation_oracle(disk, v2(2, 0));
  REQUIRE(std::holds_alternative<Hyperplane>(sep));
  const auto& h = std::get<Hyperplane>(sep);
  CHECK(h.normal.dot(v2(2, 0)) > h.offset);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
  for (int i = 0; i < 200; ++i) {
    const double a = ang(rng);
    CHECK(h.normal.dot(v2(std::cos(a), std::sin(a))) <= h.offset + 1e-12);
  }
}

TEST_CASE("polyhedron projection matches a brute-force vertex search") {
  // Unit square as four cuts.
  std::vector<Hyperplane> cuts = {{v2(1, 0), 1.0}, {v2(-1, 0), 0.0}, {v2(0, 1), 1.0}, {v2(0, -1), 0.0}};
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd(0.5, 2.0);
  for (int i = 0; i < 300; ++i) {
    const Vec x = v2(nd(rng), nd(rng));
    const Vec p = project_onto_polyhedron(cuts, x, v2(0.5, 0.5));
    const Vec clamp = v2(std::clamp(x[0], 0.0, 1.0), std::clamp(x[1], 0.0, 1.0));
    CHECK((p - clamp).norm() <= 1e-12);
  }
}

TEST_CASE("cutting planes on a disk agree with the closed form") {
  const auto ball = SetDescription::ball(v2(0.5, -0.5), 1.5);
  const Sublevel s = as_sublevel(ball);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd(0.0, 4.0);
  for (int i = 0; i < 50; ++i) {
    const Vec x = v2(nd(rng), nd(rng));
    const auto r = cutting_plane_project(s, x, with_eps(1e-10));
    CHECK(r.converged);
    CHECK(r.certified_eps <= 1e-10);
    CHECK(s.g.eval(r.point) <= s.level + 1e-10);
    CHECK((r.point - exact_project(ball, x)).norm() <= std::sqrt(1e-10) + 1e-9);
  }
}

TEST_CASE("cutting planes report a monotone lower bound") {
  const Sublevel s = as_sublevel(SetDescription::ball(v2(0, 0), 1.0));
  std::vector<double> lower;
  cutting_plane_project(s, v2(3, 4), with_eps(1e-8), [&](double lb, const Vec&) { lower.push_back(lb); });
  REQUIRE(lower.size() >= 2);
  for (std::size_t i = 1; i < lower.size(); ++i) CHECK(lower[i] >= lower[i - 1] - 1e-12);
  CHECK(lower.back() <= 16.0 + 1e-9);  // true optimum (|x| - 1)^2 = 16
}

TEST_CASE("halfspace and box as sublevel sets") {
  const auto half = SetDescription::halfspace(v2(1, 1), 1.0);
  const auto r = approx_project(half, v2(-1, -1), with_eps(1e-9), OracleKind::cutting_plane);
  CHECK(r.converged);
  CHECK((r.point - exact_project(half, v2(-1, -1))).norm() <= std::sqrt(1e-9) + 1e-9);
  const auto box = SetDescription::box(v2(0, 0), v2(2, 1));
  const auto q = approx_project(box, v2(3, 3), with_eps(1e-9), OracleKind::cutting_plane);
  CHECK((q.point - v2(2, 1)).norm() <= std::sqrt(1e-9) + 1e-9);
  CHECK_THROWS_AS(as_sublevel(SetDescription::box(v2(0, 0), v2(0, 1))), UnsupportedKind);
}

TEST_CASE("zero subgradient outside the set is an error") {
  ConvexFn g{[](const Vec& y) { return y.squaredNorm(); }, [](const Vec& y) { return Vec(Vec::Zero(y.size())); }};
  Sublevel s{g, 1.0, v2(0, 0)};
  CHECK_THROWS_AS(separation_oracle(s, v2(2, 0)), ZeroSubgradient);
}

TEST_CASE("Frank-Wolfe on a box") {
  const auto box = SetDescription::box(v2(-1, -1), v2(1, 1));
  const Vec x = v2(3, 0.5);
  const auto r = approx_project(box, x, with_eps(1e-6), OracleKind::frank_wolfe);
  CHECK(r.converged);
  CHECK(r.certified_eps <= 1e-6);
  CHECK((r.point - v2(1, 0.5)).squaredNorm() <= 1e-6);
  CHECK(residual(box, r.point) <= 1e-12);
}

TEST_CASE("approximate projections converge as eps and the point converge") {
  const auto ball = SetDescription::ball(v2(0, 0), 1.0);
  const Vec x = v2(2, 0);
  const Vec target = exact_project(ball, x);
  std::vector<double> dist;
  for (int n = 1; n <= 20; ++n) {
    const Vec xn = x + std::pow(0.5, n) * v2(0.3, 1.0);
    const auto r = approx_project(ball, xn, with_eps(std::pow(4.0, -n)), OracleKind::frank_wolfe);
    REQUIRE(r.converged);
    dist.push_back((r.point - target).norm());
  }
  for (std::size_t i = 5; i < dist.size(); ++i) CHECK(dist[i] <= dist[i - 5]);
  CHECK(dist.back() <= 1e-4);
}
