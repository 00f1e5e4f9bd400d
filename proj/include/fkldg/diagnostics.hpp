// diagnostics.hpp
//
// Error norms at the final time, the discrete entropy ledger, pointwise
// positivity scans, and activation-time fields.
#pragma once

#include "fkldg/ldg_system.hpp"
#include "fkldg/nonlinear_ops.hpp"

#include <functional>
#include <vector>

namespace fkldg {

struct ErrorReport {
  double E_c = 0.0;       // || c(.,T) - u(w_h) ||_L2
  double E_sigma = 0.0;   // || grad c(.,T) + sigma_h ||_L2
  double dg_norm_w = 0.0; // sqrt(W^T A W)
  double mass = 0.0;      // int u(w_h)
  double entropy = 0.0;   // int s(u(w_h))
  double min_u = 0.0, max_u = 0.0;
};

ErrorReport error_norms(const LdgSystem& sys, const Eigen::VectorXd& W,
                        const Eigen::VectorXd& S,
                        const std::function<double(const Vec2&)>& exact_c,
                        const std::function<Vec2(const Vec2&)>& exact_grad_c);

// One row of the discrete entropy inequality. The running left side is
//   sum(eps_term + sigma_term + jump_term) + entropy,
// the running right side
//   entropy_c0 + sum(budget + source_work),
// where budget = tau * 0.25 * max(alpha) * |Omega| and source_work keeps the
// manufactured-source contribution tau (g, w) exactly (zero without source).
struct LedgerEntry {
  int step = 0;
  double t = 0.0;
  double eps_term = 0.0;     // eps tau ||w||_DG^2
  double entropy = 0.0;      // int s(u(w)) at this step
  double sigma_term = 0.0;   // 4 D0 tau ||sigma||^2
  double jump_term = 0.0;    // tau W^T J W
  double budget = 0.0;
  double source_work = 0.0;
  double lhs = 0.0, rhs = 0.0;  // accumulated
  bool violated = false;
};

class EntropyLedger {
 public:
  EntropyLedger(const LdgSystem& sys, const NonlinearOps& ops, double entropy_c0);

  // Appends the step taken to reach (W, S) at time t with step size tau.
  // g_load is the source load vector used in that step (may be empty).
  const LedgerEntry& append(int step, double t, double tau, double eps,
                            const Eigen::VectorXd& W, const Eigen::VectorXd& S,
                            const Eigen::VectorXd& g_load);

  const std::vector<LedgerEntry>& entries() const { return entries_; }
  bool compliant(double rel_slack = 1e-10) const;
  double entropy_c0() const { return entropy_c0_; }

 private:
  const LdgSystem* sys_;
  const NonlinearOps* ops_;
  double entropy_c0_;
  double area_;
  double d0_;
  double alpha_max_;
  double acc_lhs_terms_ = 0.0;
  double acc_rhs_terms_ = 0.0;
  std::vector<LedgerEntry> entries_;
};

// sigma_h squared L2 norm through the cell quadrature.
double sigma_norm_sq(const DgSpace& space, const Eigen::VectorXd& S);

struct PositivityReport {
  double min_u = 1.0, max_u = 0.0;
  Vec2 argmin = Vec2::Zero(), argmax = Vec2::Zero();
  int cell_min = -1, cell_max = -1;
};

// Scans u(w_h) over cell quadrature points plus a per-cell refinement:
// vertices, edge subdivisions and interior fan points at `sample_density`
// points per edge. The logistic map guarantees (0,1); the scan verifies the
// represented w_h is finite everywhere sampled.
PositivityReport positivity_scan(const DgSpace& space, const Eigen::VectorXd& W,
                                 int sample_density);

// Activation times t'(x) = sum_n tau * [conc(x, t_n) < c_crit] at cell
// centroids over the uniform-step series {t_0 = 0, t_1, ..., t_N = T},
// left-endpoint rule: the t_N state never contributes. The t_0 entry comes
// from the initial datum, later entries from u(w_h).
std::vector<double> activation_time(const DgSpace& space,
                                    const std::function<double(const Vec2&)>& c0,
                                    const std::vector<Eigen::VectorXd>& W_snapshots, double tau,
                                    double c_crit);

}  // namespace fkldg
