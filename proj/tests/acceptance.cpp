// Acceptance criteria, one PASS/FAIL line each. Every tolerance and runtime
// limit is fixed below. The exit status is nonzero only if a criterion could
// not be evaluated (an unexpected exception).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "sweep/audit.hpp"
#include "sweep/cli.hpp"
#include "sweep/harness.hpp"
#include "sweep/io.hpp"

using namespace sweep;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

int failures = 0;
int errors = 0;

void criterion(int id, const std::string& title, double limit_seconds, const std::function<Verdict()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    ++errors;
    v = {false, fmt::format("exception: {}", e.what())};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = secs < limit_seconds;
  const bool pass = v.pass && in_time;
  if (!pass) ++failures;
  std::printf("%s criterion %d %s: %s; runtime %.2fs (limit %gs)\n", pass ? "PASS" : "FAIL", id, title.c_str(),
              v.detail.c_str(), secs, limit_seconds);
  std::fflush(stdout);
}

Vec random_vec(std::mt19937_64& rng, int d, double scale) {
  std::normal_distribution<double> nd(0.0, scale);
  Vec v(d);
  for (int i = 0; i < d; ++i) v[i] = nd(rng);
  return v;
}

Verdict certificate_soundness() {
  constexpr double kFeasTol = 1e-12;
  std::mt19937_64 rng(0xacce55);
  std::uniform_int_distribution<int> dim(1, 5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int triples = 0, violations = 0, exhausted = 0;
  double worst_excess = -INFINITY;
  for (int i = 0; i < 1200; ++i) {
    const int d = dim(rng);
    SetDescription set = SetDescription::ball(Vec::Zero(1), 1.0);
    std::vector<OracleKind> kinds = {OracleKind::exact, OracleKind::cutting_plane};
    switch (i % 3) {
      case 0:
        set = SetDescription::ball(random_vec(rng, d, 1.0), 0.1 + 2.0 * unit(rng));
        kinds.push_back(OracleKind::frank_wolfe);
        break;
      case 1: {
        const Vec c = random_vec(rng, d, 1.0);
        Vec w(d);
        for (int j = 0; j < d; ++j) w[j] = 0.05 + 1.5 * unit(rng);
        set = SetDescription::box(c - w, c + w);
        kinds.push_back(OracleKind::frank_wolfe);
        break;
      }
      default:
        set = SetDescription::halfspace(random_vec(rng, d, 1.0) + Vec::Constant(d, 1e-3), 2.0 * unit(rng) - 1.0);
    }
    const Vec x = random_vec(rng, d, 3.0);
    ProjectorConfig cfg;
    cfg.eps = std::pow(10.0, -2.0 - 8.0 * unit(rng));
    const double opt = (x - exact_project(set, x)).squaredNorm();
    for (OracleKind k : kinds) {
      const ProjectionResult r = approx_project(set, x, cfg, k);
      ++triples;
      const double excess = (x - r.point).squaredNorm() - (opt + r.certified_eps);
      worst_excess = std::max(worst_excess, excess);
      // A BudgetExhausted result must still be feasible and sound; the
      // certified_eps <= eps requirement applies to successful results.
      if (!r.converged) ++exhausted;
      const bool ok = residual(set, r.point) <= kFeasTol && excess <= 0.0 && (!r.converged || r.certified_eps <= cfg.eps);
      if (!ok) ++violations;
    }
  }
  return {triples >= 1000 && violations == 0,
          fmt::format("{} triples, {} violations, worst |x-z|^2 - (d^2 + cert) = {:.3g}, {} runs "
                      "ended BudgetExhausted (flagged, still feasible and sound)",
                      triples, violations, worst_excess, exhausted)};
}

Verdict sublevel_vs_closed_form() {
  constexpr double kEps = 1e-8;
  const double tol = std::sqrt(kEps) + 1e-6;
  Vec c(2);
  c << 0.3, -0.7;
  const double r = 1.25;
  const auto disk = SetDescription::ball(c, r);
  const Sublevel s{ConvexFn{[c](const Vec& y) { return (y - c).norm(); },
                            [c](const Vec& y) -> Vec {
                              const double n = (y - c).norm();
                              return n > 0.0 ? Vec((y - c) / n) : Vec(Vec::Zero(2));
                            }},
                   r, c};
  std::mt19937_64 rng(0xd15c);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI), rad(1.01, 5.0);
  ProjectorConfig cfg;
  cfg.eps = kEps;
  double worst = 0.0;
  int bad = 0;
  for (int i = 0; i < 100; ++i) {
    const double a = ang(rng);
    Vec x(2);
    x << std::cos(a), std::sin(a);
    x = c + r * rad(rng) * x;
    const ProjectionResult p = cutting_plane_project(s, x, cfg);
    const double err = (p.point - exact_project(disk, x)).norm();
    worst = std::max(worst, err);
    if (!p.converged || err > tol) ++bad;
  }
  return {bad == 0, fmt::format("100 exterior points, worst |z - P(x)| = {:.3g} (tol {:.3g})", worst, tol)};
}

const std::vector<int> kAuditNs = {64, 256, 1024};

Trajectory catalog_run(ProblemId id, int n) {
  StepperConfig cfg;
  cfg.oracle = default_oracle(id);
  return solve(catalog_problem(id), n, EpsSchedule(1.0, 3.0), cfg);
}

Verdict interpolant_identity() {
  constexpr double kTol = 1e-12;
  double worst_node = 0.0, worst_mid = 0.0;
  int runs = 0, zero_cells = 0;
  for (ProblemId id : catalog())
    for (int n : kAuditNs) {
      const Trajectory traj = catalog_run(id, n);
      ++runs;
      for (int k = 0; k <= n; ++k)
        worst_node = std::max(worst_node,
                              (interpolate(traj, traj.grid.node(k)) - traj.nodes[static_cast<std::size_t>(k)]).norm());
      if (id == ProblemId::interior_ode) continue;  // F != 0
      for (int k = 0; k < n; ++k) {
        const auto kk = static_cast<std::size_t>(k);
        const double mid = 0.5 * (traj.grid.node(k) + traj.grid.node(k + 1));
        worst_mid = std::max(worst_mid, (interpolate(traj, mid) - 0.5 * (traj.nodes[kk] + traj.nodes[kk + 1])).norm());
        ++zero_cells;
      }
    }
  return {worst_node <= kTol && worst_mid <= kTol,
          fmt::format("{} runs, max node deviation {:.3g}, {} F=0 cells with max midpoint deviation {:.3g} (tol {:g})",
                      runs, worst_node, zero_cells, worst_mid, kTol)};
}

Verdict audit_all() {
  int cells = 0, violations = 0, failed_cells = 0;
  std::string worst;
  double worst_ratio = 0.0;
  for (ProblemId id : catalog())
    for (int n : kAuditNs) {
      const auto problem = catalog_problem(id);
      const AuditReport report = theorem1_audit(catalog_run(id, n), problem);
      ++cells;
      failed_cells += static_cast<int>(report.failed_cells.size());
      for (const auto& c : report.checks) {
        violations += c.violations;
        if (c.name != "eps budget" && c.worst_ratio > worst_ratio) {
          worst_ratio = c.worst_ratio;
          worst = fmt::format("{} on {} n={}", c.name, to_string(id), n);
        }
      }
    }
  return {violations == 0 && failed_cells == 0,
          fmt::format("{} problem/n cells, {} violations, {} failed projections, tightest bound ratio {:.6f} ({})",
                      cells, violations, failed_cells, worst_ratio, worst)};
}

Verdict closed_form_errors() {
  std::vector<std::string> parts;
  bool ok = true;

  double drag = 0.0;
  for (int n : kAuditNs) {
    const auto traj = catalog_run(ProblemId::dragging_interval, n);
    drag = std::max(drag, node_error(traj, [](double t) { return reference_solution(ProblemId::dragging_interval, t); }));
  }
  ok = ok && drag == 0.0;
  parts.push_back(fmt::format("dragging node error {:g} (= 0)", drag));

  const auto ode = catalog_run(ProblemId::interior_ode, 1024);
  const double ode_err = sup_error(ode, [](double t) { return reference_solution(ProblemId::interior_ode, t); });
  ok = ok && ode_err <= 1e-2;
  parts.push_back(fmt::format("interior ODE n=1024 sup error {:.3g} (<= 1e-2)", ode_err));

  double half_margin = -INFINITY;
  for (int n : kAuditNs) {
    const auto traj = catalog_run(ProblemId::translating_halfspace, n);
    const double err =
        sup_error(traj, [](double t) { return reference_solution(ProblemId::translating_halfspace, t); });
    const double bound = 2.0 * traj.grid.step() + 2.0 * std::sqrt(traj.eps_n);
    half_margin = std::max(half_margin, err / bound);
  }
  ok = ok && half_margin <= 1.0;
  parts.push_back(fmt::format("halfspace max error/(2mu + 2sqrt(eps)) {:.3g} (<= 1)", half_margin));

  const auto problem = catalog_problem(ProblemId::translating_disk);
  StepperConfig exact;
  exact.oracle = OracleKind::exact;
  const Trajectory fine = solve(problem, 4 * 512, EpsSchedule(1.0, 3.0), exact);
  const auto gate =
      self_consistency_gate(problem, fine, [](double t) { return reference_solution(ProblemId::translating_disk, t); });
  const auto disk = catalog_run(ProblemId::translating_disk, 512);
  const double disk_err = sup_error(disk, [&fine](double t) { return interpolate(fine, t); });
  ok = ok && gate.passed() && disk_err <= 0.05;
  parts.push_back(fmt::format("disk (Frank-Wolfe) n=512 sup error vs n_ref=2048 {:.3g} (<= 0.05), reference gate {:.3g} <= {:.3g}",
                              disk_err, gate.error, gate.bound));

  std::string detail;
  for (std::size_t i = 0; i < parts.size(); ++i) detail += (i ? "; " : "") + parts[i];
  return {ok, detail};
}

Verdict rate_floor() {
  RateOptions opt;
  opt.reference = ReferenceKind::fine_grid;
  opt.slope_floor = 0.25;
  const RateStudy s = rate_study(ProblemId::translating_disk, {64, 128, 256, 512, 1024}, EpsSchedule(1.0, 3.0), opt);
  std::string es;
  for (const auto& e : s.entries) es += fmt::format("{}{:.3g}", es.empty() ? "" : ", ", e.error);
  return {s.strictly_decreasing && s.slope_floor_met && s.self_consistency && s.self_consistency->passed(),
          fmt::format("E_n = [{}], strictly decreasing {}, slope {:.3f} (floor 0.25)", es, s.strictly_decreasing,
                      s.slope.value_or(NAN))};
}

Verdict stability() {
  Vec x(2), u(2);
  x << 2.0, 0.0;
  u << 0.0, 1.0;
  const auto report =
      stability_study(SetDescription::ball(Vec::Zero(2), 1.0), x, u, {10, 100, 1000}, 2.0, OracleKind::automatic, 1e-4);
  return {report.converged(),
          fmt::format("ball(0,1), x=(2,0), u=(0,1), eps_n=n^-2: |z_n - P(x)| = {:.3g}, {:.3g}, {:.3g} at n=10,100,1000 "
                      "(final tol 1e-4), monotone band {}",
                      report.error[0], report.error[1], report.error[2], report.monotone_within_band())};
}

Verdict prox_eps0_grid() {
  double worst = 0.0;
  int nonmonotone = 0;
  std::vector<double> gammas, rhos;
  for (int i = 0; i < 20; ++i) gammas.push_back(0.02 + 0.96 * i / 19.0);
  for (int j = 0; j < 20; ++j) rhos.push_back(std::pow(10.0, -2.0 + 4.0 * j / 19.0));
  std::vector<std::vector<double>> e(20, std::vector<double>(20));
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j) {
      const double g = gammas[static_cast<std::size_t>(i)], rho = rhos[static_cast<std::size_t>(j)];
      const double eps0 = prox_eps0(g, rho);
      const double s = std::sqrt(eps0);
      worst = std::max(worst, std::abs(g + 4.0 * s * (1.0 + g + (1.0 + 4.0 * s) / rho) - 1.0));
      e[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = eps0;
    }
  for (std::size_t i = 0; i < 20; ++i)
    for (std::size_t j = 0; j < 20; ++j) {
      if (i > 0 && !(e[i][j] < e[i - 1][j])) ++nonmonotone;  // decreasing in gamma
      if (j > 0 && !(e[i][j] > e[i][j - 1])) ++nonmonotone;  // increasing in rho
    }
  return {worst <= 1e-10 && nonmonotone == 0,
          fmt::format("400 (gamma, rho) points, max residual {:.3g} (tol 1e-10), {} monotonicity violations", worst,
                      nonmonotone)};
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv = {"sweep"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  return cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
}

Verdict determinism() {
  const fs::path root = fs::temp_directory_path() / "sweep_acceptance";
  fs::remove_all(root);
  fs::create_directories(root);
  const auto solve_cfg = (root / "solve.toml").string();
  const auto rate_cfg = (root / "rate.toml").string();
  io::write_file(solve_cfg, "problem = \"translating_disk\"\nn = 256\nseed = 7\n");
  io::write_file(rate_cfg, "problem = \"translating_disk\"\nladder = [64, 128, 256]\nseed = 7\n");
  int mismatches = 0, files = 0;
  for (int rep = 0; rep < 2; ++rep) {
    const auto dir = (root / fmt::format("run{}", rep)).string();
    run_cli({"solve", "--config", solve_cfg, "--out", dir, "--seed", "7"});
    run_cli({"rate", "--config", rate_cfg, "--out", dir, "--seed", "7"});
  }
  for (const char* name : {"trajectory.csv", "trajectory.json", "audit.json", "rate.csv", "rate.json"}) {
    ++files;
    const auto a = io::read_file((root / "run0" / name).string());
    const auto b = io::read_file((root / "run1" / name).string());
    if (a.empty() || a != b) ++mismatches;
  }
  return {mismatches == 0, fmt::format("{} files compared across two runs, {} differ", files, mismatches)};
}

}  // namespace

int main() {
  criterion(1, "certificate soundness", 10.0, certificate_soundness);
  criterion(2, "sublevel projection vs closed form", 10.0, sublevel_vs_closed_form);
  criterion(3, "interpolant identity", 60.0, interpolant_identity);
  criterion(4, "a-priori bound audit", 60.0, audit_all);
  criterion(5, "closed-form trajectory errors", 60.0, closed_form_errors);
  criterion(6, "rate floor", 300.0, rate_floor);
  criterion(7, "projection stability", 10.0, stability);
  criterion(8, "prox_eps0 residual and monotonicity", 1.0, prox_eps0_grid);
  criterion(9, "determinism", 60.0, determinism);
  std::printf("acceptance: %d/9 PASS\n", 9 - failures);
  return errors == 0 ? 0 : 1;
}
