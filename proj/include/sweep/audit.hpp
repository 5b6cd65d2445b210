#ifndef SWEEP_AUDIT_HPP
#define SWEEP_AUDIT_HPP

#include <string>
#include <vector>

#include "sweep/solver.hpp"

namespace sweep {

/// Explicit a-priori constants of the catching-up scheme.
///
/// With c = sup_n sqrt(eps_n)/mu_n, h0 = h(x0) and h* = h0 + L_h K1:
///   K1 = T (L_C + 2 h0 + 2 sqrt(gamma) + c) exp(2 L_h T)
///   K2 = K1 + |x0| + T (L_C + 2 (h* + sqrt(gamma)) + c)
///   K3 = L_C + 2 (h* + sqrt(gamma))
///   K4 = K3 + L_C + 2 (h* + sqrt(gamma))
///   K5 = K4 + L_C
///   K6 = c + L_C + 2 (h* + sqrt(gamma))
struct AuditConstants {
  double lipschitz = 0.0;
  double growth_at_x0 = 0.0;
  double growth_lipschitz = 0.0;
  double sqrt_gamma = 0.0;
  double sqrt_eps_over_mu = 0.0;
  double k1 = 0.0, k2 = 0.0, k3 = 0.0, k4 = 0.0, k5 = 0.0, k6 = 0.0;
};

AuditConstants audit_constants(const SweepingProblem& problem, const EpsSchedule& schedule, double gamma);

struct AuditCheck {
  std::string name;
  std::string bound;
  int samples = 0;
  int violations = 0;
  double worst_excess = 0.0;  // max(lhs - rhs) over samples; <= 0 when the bound holds
  double worst_ratio = 0.0;   // max lhs / rhs
  bool passed() const { return violations == 0; }
};

struct AuditReport {
  AuditConstants constants;
  std::vector<AuditCheck> checks;
  std::vector<int> failed_cells;
  /// Prox-regular mode: n > 2 L_C T / rho, the regime where the rate estimate applies.
  bool rate_regime = true;
  bool passed() const;
};

/// Checks the computable a-priori bounds of the scheme on a trajectory.
/// Comparisons allow a relative floating-point slack of 1e-12.
AuditReport theorem1_audit(const Trajectory& traj, const SweepingProblem& problem, int samples_per_cell = 4);

}  // namespace sweep

#endif  // SWEEP_AUDIT_HPP
