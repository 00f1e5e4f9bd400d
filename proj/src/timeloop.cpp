// timeloop.cpp

#include "fkldg/timeloop.hpp"

#include "fkldg/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace fkldg {

TimeLoop::TimeLoop(const LdgSystem& sys, const NonlinearOps& ops, const TimeConfig& cfg,
                   ScalarFn c0, TimeFn exact, TimeFn source)
    : sys_(&sys),
      ops_(&ops),
      cfg_(cfg),
      c0_(std::move(c0)),
      exact_(std::move(exact)),
      source_(std::move(source)),
      newton_(sys, ops, cfg.newton) {
  if (cfg.nu < 1 || cfg.nu > 6)
    throw std::runtime_error(fmt::format("TimeLoop: BDF order {} outside [1, 6]", cfg.nu));
  if (cfg.tau <= 0.0) throw std::runtime_error("TimeLoop: tau must be positive");
  for (int nu = 1; nu <= 6; ++nu) schemes_.push_back(bdf_coefficients(nu));
  const double steps = cfg.T / cfg.tau;
  n_steps_ = static_cast<int>(std::lround(steps));
  if (n_steps_ < 1 || std::abs(steps - n_steps_) > 1e-8 * std::max(1.0, steps))
    throw std::runtime_error(
        fmt::format("TimeLoop: T = {} is not a positive integer multiple of tau = {}", cfg.T,
                    cfg.tau));
  if (cfg.init == TimeConfig::Init::exact && !exact_)
    throw std::runtime_error("TimeLoop: exact initialization needs an exact solution");
}

Eigen::VectorXd TimeLoop::load_of(const ScalarFn& f) const {
  const DgSpace& space = sys_->space();
  const int m = space.dofs_per_cell();
  Eigen::VectorXd out(space.n_scalar_dofs());
  for (int k = 0; k < space.mesh().n_cells(); ++k) {
    const auto& cd = space.cell(k);
    Eigen::VectorXd vals(cd.quad.size());
    for (int q = 0; q < cd.quad.size(); ++q) vals[q] = cd.quad.weights[q] * f(cd.quad.points[q]);
    out.segment(space.scalar_offset(k), m) = cd.phi.transpose() * vals;
  }
  return out;
}

void TimeLoop::initialize() {
  const DgSpace& space = sys_->space();
  const int m = space.dofs_per_cell();

  // The initial datum must respect the bounds; quadrature points stand in
  // for "almost everywhere".
  entropy_c0_ = 0.0;
  for (int k = 0; k < space.mesh().n_cells(); ++k) {
    const auto& cd = space.cell(k);
    for (int q = 0; q < cd.quad.size(); ++q) {
      const double c = c0_(cd.quad.points[q]);
      if (!(c >= 0.0 && c <= 1.0))
        throw std::runtime_error(fmt::format(
            "TimeLoop: initial datum {} outside [0, 1] at ({}, {})", c,
            cd.quad.points[q].x(), cd.quad.points[q].y()));
      entropy_c0_ += cd.quad.weights[q] * entropy::s_of_c(c);
    }
  }

  history_.clear();
  history_.push_back(load_of(c0_));
  if (cfg_.init == TimeConfig::Init::exact) {
    // Seed the pre-initial history at t = -tau, ..., -(nu-1) tau so the very
    // first computed step already runs the full-order formula.
    for (int j = 1; j < cfg_.nu; ++j) {
      const double t = -j * cfg_.tau;
      history_.push_back(load_of([&](const Vec2& x) { return exact_(x, t); }));
    }
  }

  // First Newton guess. Exact mode serves the convergence studies: project
  // the clamped entropy transform of the datum at full order, so the first
  // solve starts O(tau) from the solution with no inter-cell jumps for the
  // first direction to amplify. Rampup keeps piecewise-constant cell means,
  // clamped away from the singular ends of s', which is the safe choice for
  // generic data grazing the bounds.
  W_.resize(space.n_scalar_dofs());
  if (cfg_.init == TimeConfig::Init::exact) {
    W_ = space.project_scalar([&](const Vec2& x) {
      return entropy::s_prime_of_c(std::clamp(c0_(x), 1e-8, 1.0 - 1e-8));
    });
  } else {
    for (int k = 0; k < space.mesh().n_cells(); ++k) {
      const auto& cd = space.cell(k);
      double mean = 0.0;
      for (int q = 0; q < cd.quad.size(); ++q)
        mean += cd.quad.weights[q] * c0_(cd.quad.points[q]);
      mean /= space.mesh().cell_areas[k];
      const double w0 = entropy::s_prime_of_c(std::clamp(mean, 1e-8, 1.0 - 1e-8));
      Eigen::VectorXd moments = Eigen::VectorXd::Zero(m);
      for (int q = 0; q < cd.quad.size(); ++q)
        moments += cd.quad.weights[q] * w0 * cd.phi.row(q).transpose();
      W_.segment(space.scalar_offset(k), m) = cd.mass_llt.solve(moments);
    }
  }
  S_ = Eigen::VectorXd::Zero(space.n_vector_dofs());

  ledger_.emplace(*sys_, *ops_, entropy_c0_);
  records_.clear();
  traces_.clear();
  states_.clear();
  step_ = 0;
  initialized_ = true;
}

void TimeLoop::advance() {
  if (!initialized_) throw std::runtime_error("TimeLoop: advance before initialize");
  if (step_ >= n_steps_) throw std::runtime_error("TimeLoop: already at final time");
  const int n_next = step_ + 1;
  const double t_next = n_next * cfg_.tau;
  const int nu_eff =
      cfg_.init == TimeConfig::Init::exact ? cfg_.nu : std::min(n_next, cfg_.nu);
  const BdfScheme& scheme = schemes_[nu_eff - 1];

  StepProblem prob;
  prob.tau = cfg_.tau;
  prob.beta = scheme.beta;
  prob.eps = cfg_.eps;
  prob.hist_combo = scheme.a[0] * history_[0];
  for (int j = 2; j <= nu_eff; ++j) prob.hist_combo += scheme.a[j - 1] * history_[j - 1];
  if (source_)
    prob.g_load = load_of([&](const Vec2& x) { return source_(x, t_next); });

  NewtonTrace trace = newton_.solve_step(prob, W_, S_);

  history_.push_front(ops_->eval_U(W_));
  while (static_cast<int>(history_.size()) > cfg_.nu) history_.pop_back();
  step_ = n_next;

  StepRecord rec;
  rec.step = n_next;
  rec.t = t_next;
  rec.newton_iters = static_cast<int>(trace.rows.size());
  rec.newton_residual = trace.rows.empty() ? 0.0 : trace.rows.back().residual;
  rec.mass = ops_->mass_of_u(W_);
  rec.entropy = ops_->entropy_of_w(W_);
  rec.min_u = 1.0;
  rec.max_u = 0.0;
  for (int k = 0; k < sys_->space().mesh().n_cells(); ++k) {
    const Eigen::VectorXd wq = ops_->values_at_quad(W_, k);
    for (int q = 0; q < wq.size(); ++q) {
      const double uq = entropy::u(wq[q]);
      rec.min_u = std::min(rec.min_u, uq);
      rec.max_u = std::max(rec.max_u, uq);
    }
  }
  records_.push_back(rec);
  traces_.push_back(std::move(trace));
  ledger_->append(n_next, t_next, cfg_.tau, cfg_.eps, W_, S_, prob.g_load);
  if (cfg_.keep_states) states_.push_back(W_);
}

void TimeLoop::run() {
  if (!initialized_) initialize();
  while (step_ < n_steps_) advance();
}

}  // namespace fkldg
