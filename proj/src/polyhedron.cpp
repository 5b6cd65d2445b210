#include <algorithm>
#include <cmath>
#include <vector>

#include "sweep/oracles.hpp"

namespace sweep {

// Primal active-set method for min 0.5 |z - x|^2 s.t. <a_i, z> <= b_i.
// The working set stays linearly independent: a blocking constraint always has
// <a_i, p> > 0 for a step p orthogonal to every working normal.
Vec project_onto_polyhedron(const std::vector<Hyperplane>& cuts, const Vec& x, const Vec& feasible_start) {
  const auto m = cuts.size();
  const auto d = x.size();
  if (m == 0) return x;

  Eigen::MatrixXd a(m, d);
  Eigen::VectorXd b(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double n = cuts[i].normal.norm();
    a.row(static_cast<Eigen::Index>(i)) = cuts[i].normal.transpose() / n;
    b[static_cast<Eigen::Index>(i)] = cuts[i].offset / n;
  }

  Vec z = feasible_start;
  std::vector<Eigen::Index> working;
  std::vector<char> in_working(m, 0);
  const double scale = 1.0 + x.norm() + z.norm();
  const int max_iter = 50 * static_cast<int>(m + d) + 100;

  for (int iter = 0; iter < max_iter; ++iter) {
    const Vec r = x - z;
    Vec p = r;
    Vec nu;
    Eigen::MatrixXd aw(static_cast<Eigen::Index>(working.size()), d);
    if (!working.empty()) {
      for (std::size_t j = 0; j < working.size(); ++j) aw.row(static_cast<Eigen::Index>(j)) = a.row(working[j]);
      const Eigen::MatrixXd gram = aw * aw.transpose();
      nu = gram.ldlt().solve(aw * r);
      p -= aw.transpose() * nu;
    }

    if (p.norm() <= 1e-15 * scale) {
      if (working.empty()) return z;
      Eigen::Index worst = 0;
      nu.minCoeff(&worst);
      if (nu[worst] >= -1e-15 * scale) return z;
      in_working[static_cast<std::size_t>(working[static_cast<std::size_t>(worst)])] = 0;
      working.erase(working.begin() + worst);
      continue;
    }

    double alpha = 1.0;
    Eigen::Index blocking = -1;
    const double pn = p.norm();
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(m); ++i) {
      if (in_working[static_cast<std::size_t>(i)]) continue;
      const double ap = a.row(i).dot(p);
      if (ap <= 1e-14 * pn) continue;
      const double step = std::max(0.0, b[i] - a.row(i).dot(z)) / ap;
      if (step < alpha) {
        alpha = step;
        blocking = i;
      }
    }
    z += alpha * p;
    if (blocking >= 0) {
      working.push_back(blocking);
      in_working[static_cast<std::size_t>(blocking)] = 1;
    }
  }
  return z;
}

}  // namespace sweep
