#include <doctest.h>

#include <cmath>

#include "sweep/harness.hpp"
#include "sweep/solver.hpp"

using namespace sweep;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("grid maps are left-closed") {
  const Grid g(1.0, 4);
  CHECK(g.step() == 0.25);
  CHECK(g.node(4) == 1.0);
  CHECK(g.cell(0.0) == 0);
  CHECK(g.cell(0.25) == 1);
  CHECK(g.cell(0.2499) == 0);
  CHECK(g.cell(1.0) == 3);
  CHECK(g.delta(0.3) == 0.25);
  CHECK(g.theta(0.3) == 0.5);
  CHECK(g.theta(0.25) == 0.5);
  CHECK(g.delta(1.0) == 0.75);
  CHECK(g.theta(1.0) == 1.0);
  CHECK_THROWS_AS(g.cell(1.5), OutOfRange);
  CHECK_THROWS_AS(g.cell(-0.1), OutOfRange);
  CHECK_THROWS_AS(Grid(1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(Grid(0.0, 4), std::invalid_argument);
}

TEST_CASE("grid cell lookup is consistent with nodes") {
  const Grid g(0.7, 97);
  for (int k = 0; k < 97; ++k) {
    CHECK(g.cell(g.node(k)) == k);
    CHECK(g.cell(0.5 * (g.node(k) + g.node(k + 1))) == k);
  }
}

TEST_CASE("eps schedule") {
  const EpsSchedule s;
  CHECK(s.eps(0.5) == 0.125);
  CHECK(s.sqrt_eps_over_mu_bound(1.0) == 1.0);
  CHECK(EpsSchedule(4.0, 4.0).sqrt_eps_over_mu_bound(2.0) == doctest::Approx(4.0));
  CHECK_THROWS_AS(EpsSchedule(1.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(EpsSchedule(0.0, 3.0), std::invalid_argument);
}

TEST_CASE("problem validation") {
  const auto ball = SetDescription::ball(v2(0, 0), 1.0);
  CHECK_THROWS_AS(SweepingProblem(MovingSet::fixed(ball), perturbations::zero(2), v2(2, 0), 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(SweepingProblem(MovingSet::translating(ball, v2(1, 0)), perturbations::zero(2), v2(0, 0), 1.0,
                                  SolveMode::fixed_set),
                  std::invalid_argument);
  CHECK_THROWS_AS(SweepingProblem(MovingSet::fixed(ball), perturbations::zero(2), v2(0, 0), -1.0),
                  std::invalid_argument);
  const SweepingProblem ok(MovingSet::fixed(ball), perturbations::zero(2), v2(0, 0), 1.0, SolveMode::fixed_set);
  CHECK(ok.lipschitz() == 0.0);
}

TEST_CASE("dragging interval nodes are exact") {
  const auto problem = catalog_problem(ProblemId::dragging_interval);
  const auto traj = solve(problem, 64, EpsSchedule());
  REQUIRE(traj.complete());
  for (int k = 0; k <= 64; ++k) CHECK(traj.nodes[static_cast<std::size_t>(k)][0] == traj.grid.node(k));
}

TEST_CASE("interior ODE reproduces the explicit Euler recursion") {
  const auto problem = catalog_problem(ProblemId::interior_ode);
  const int n = 50;
  const auto traj = solve(problem, n, EpsSchedule());
  const double mu = 1.0 / n;
  Vec euler = v2(1, 0);
  for (int k = 1; k <= n; ++k) {
    euler = euler - mu * euler;
    CHECK((traj.nodes[static_cast<std::size_t>(k)] - euler).norm() <= 1e-15);
  }
  CHECK(traj.nodes.back()[0] == doctest::Approx(std::pow(1.0 - mu, n)).epsilon(1e-13));
}

TEST_CASE("interpolant and velocity") {
  const auto problem = catalog_problem(ProblemId::interior_ode);
  const auto traj = solve(problem, 8, EpsSchedule());
  for (int k = 0; k <= 8; ++k)
    CHECK((interpolate(traj, traj.grid.node(k)) - traj.nodes[static_cast<std::size_t>(k)]).norm() == 0.0);
  // Inside a cell with an interior step, x_{k+1} = x_k + I_k, so the interpolant
  // is x_k + (t - t_k) f(x_k) and the velocity is f(x_k) = -x_k.
  const double t = 0.3;
  const int k = traj.grid.cell(t);
  const Vec& xk = traj.nodes[static_cast<std::size_t>(k)];
  CHECK((interpolate(traj, t) - (xk - (t - traj.grid.node(k)) * xk)).norm() <= 1e-15);
  CHECK((velocity(traj, t) + xk).norm() <= 1e-12);
  CHECK_THROWS_AS(velocity(traj, 0.25), OutOfRange);
  CHECK((velocity(traj, 0.25, Side::left) + traj.nodes[1]).norm() <= 1e-12);
  CHECK((velocity(traj, 0.25, Side::right) + traj.nodes[2]).norm() <= 1e-12);
  CHECK_THROWS_AS(velocity(traj, 0.0, Side::left), OutOfRange);
  CHECK_THROWS_AS(velocity(traj, 1.0, Side::right), OutOfRange);
}

TEST_CASE("F = 0 interpolant is the chord between nodes") {
  const auto problem = catalog_problem(ProblemId::translating_disk);
  StepperConfig cfg;
  cfg.oracle = OracleKind::frank_wolfe;
  const auto traj = solve(problem, 32, EpsSchedule(), cfg);
  for (int k = 0; k < 32; ++k) {
    const double mid = 0.5 * (traj.grid.node(k) + traj.grid.node(k + 1));
    const Vec mean = 0.5 * (traj.nodes[static_cast<std::size_t>(k)] + traj.nodes[static_cast<std::size_t>(k) + 1]);
    CHECK((interpolate(traj, mid) - mean).norm() <= 1e-12);
  }
}

TEST_CASE("projection failures abort with a partial trajectory") {
  const auto problem = catalog_problem(ProblemId::translating_disk);
  StepperConfig cfg;
  cfg.oracle = OracleKind::frank_wolfe;
  cfg.max_iter = 2;
  try {
    solve(problem, 64, EpsSchedule(), cfg);
    FAIL("expected ProjectionFailed");
  } catch (const ProjectionFailed& e) {
    CHECK_FALSE(e.partial().complete());
    CHECK(e.partial().nodes.size() == e.partial().steps.size() + 1);
  }
  cfg.permissive = true;
  const auto traj = solve(problem, 64, EpsSchedule(), cfg);
  CHECK(traj.complete());
  CHECK_FALSE(traj.failed_cells().empty());
}

TEST_CASE("step rejects out-of-range indices") {
  const auto problem = catalog_problem(ProblemId::dragging_interval);
  const Grid g(1.0, 4);
  const auto sel = make_selection(problem.perturbation(), 1e-8);
  CHECK_THROWS_AS(step(problem, g, sel, 4, Vec::Zero(1), 1e-6, {}), OutOfRange);
  CHECK_THROWS_AS(step(problem, g, sel, 0, Vec::Zero(1), 0.0, {}), std::invalid_argument);
}

TEST_CASE("interpolation beyond the computed prefix throws") {
  const auto problem = catalog_problem(ProblemId::translating_disk);
  StepperConfig cfg;
  cfg.oracle = OracleKind::frank_wolfe;
  cfg.max_iter = 2;
  try {
    solve(problem, 64, EpsSchedule(), cfg);
  } catch (const ProjectionFailed& e) {
    CHECK_THROWS_AS(interpolate(e.partial(), 0.99), OutOfRange);
  }
}
