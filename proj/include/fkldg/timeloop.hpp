// timeloop.hpp
//
// Uniform-step BDF time integration of the entropy-variable system. The
// history holds load vectors (u(w_h^(k)), psi_i); ramp-up raises the BDF
// order step by step, exact initialization seeds the full history from the
// scenario's exact solution so every computed step runs at full order.
#pragma once

#include "fkldg/bdf.hpp"
#include "fkldg/diagnostics.hpp"
#include "fkldg/newton.hpp"

#include <deque>
#include <functional>
#include <optional>

namespace fkldg {

struct TimeConfig {
  int nu = 1;
  double tau = 1e-2;
  double T = 1.0;  // must be an integer multiple of tau
  double eps = 0.0;
  enum class Init { rampup, exact } init = Init::rampup;
  NewtonConfig newton;
  bool keep_states = false;  // retain W after every step (activation, snapshots)
};

struct StepRecord {
  int step = 0;
  double t = 0.0;
  int newton_iters = 0;
  double newton_residual = 0.0;
  double min_u = 0.0, max_u = 0.0;  // over quadrature points
  double mass = 0.0;
  double entropy = 0.0;
};

class TimeLoop {
 public:
  using ScalarFn = std::function<double(const Vec2&)>;
  using TimeFn = std::function<double(const Vec2&, double)>;

  // c0 must map into [0,1] (checked at quadrature points); exact enables
  // Init::exact, source adds the manufactured load at t_{n+1}.
  TimeLoop(const LdgSystem& sys, const NonlinearOps& ops, const TimeConfig& cfg, ScalarFn c0,
           TimeFn exact = nullptr, TimeFn source = nullptr);

  void initialize();
  void advance();  // one step; NewtonFailure propagates
  void run();      // initialize (if needed) and step to T

  int step() const { return step_; }
  int n_steps() const { return n_steps_; }
  double time() const { return step_ * cfg_.tau; }
  const Eigen::VectorXd& W() const { return W_; }
  const Eigen::VectorXd& S() const { return S_; }
  const std::deque<Eigen::VectorXd>& history() const { return history_; }

  const std::vector<StepRecord>& records() const { return records_; }
  const std::vector<NewtonTrace>& traces() const { return traces_; }
  const std::vector<Eigen::VectorXd>& states() const { return states_; }
  const EntropyLedger& ledger() const { return *ledger_; }
  double entropy_c0() const { return entropy_c0_; }

 private:
  Eigen::VectorXd load_of(const ScalarFn& f) const;

  const LdgSystem* sys_;
  const NonlinearOps* ops_;
  TimeConfig cfg_;
  ScalarFn c0_;
  TimeFn exact_, source_;

  std::vector<BdfScheme> schemes_;  // index nu-1
  NewtonSolver newton_;
  std::deque<Eigen::VectorXd> history_;
  Eigen::VectorXd W_, S_;
  int step_ = 0;
  int n_steps_ = 0;
  bool initialized_ = false;
  double entropy_c0_ = 0.0;

  std::optional<EntropyLedger> ledger_;
  std::vector<StepRecord> records_;
  std::vector<NewtonTrace> traces_;
  std::vector<Eigen::VectorXd> states_;
};

}  // namespace fkldg
