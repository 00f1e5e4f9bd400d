// BDF time loop: configuration validation, history management under ramp-up
// and exact seeding, invariance of reaction-free constants, step records.
#include "fkldg/timeloop.hpp"

#include "fkldg/entropy.hpp"

#include <doctest.h>

#include <cmath>

using namespace fkldg;

namespace {

struct Setup {
  PolyMesh mesh;
  DgSpace space;
  CoeffField coeffs;
  LdgSystem sys;
  NonlinearOps ops;

  Setup(double alpha = 1.0)
      : mesh(generate_voronoi({{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}}, 8, 4, 33)),
        space(mesh, 1),
        coeffs(CoeffField::constant(mesh, alpha, 0.1 * Eigen::Matrix2d::Identity())),
        sys(space, coeffs, {}),
        ops(space, coeffs) {}
};

double smooth_c0(const Vec2& x) { return 0.35 + 0.25 * std::sin(3.0 * x.x()) * std::cos(x.y()); }

}  // namespace

TEST_CASE("configuration validation") {
  Setup s;
  TimeConfig cfg;
  cfg.tau = 0.1;
  cfg.T = 0.35;  // not a multiple
  CHECK_THROWS(TimeLoop(s.sys, s.ops, cfg, smooth_c0));

  cfg.T = 0.3;
  cfg.nu = 7;
  CHECK_THROWS(TimeLoop(s.sys, s.ops, cfg, smooth_c0));

  cfg.nu = 2;
  cfg.init = TimeConfig::Init::exact;
  CHECK_THROWS(TimeLoop(s.sys, s.ops, cfg, smooth_c0));  // no exact solution given

  cfg.init = TimeConfig::Init::rampup;
  cfg.tau = -0.1;
  CHECK_THROWS(TimeLoop(s.sys, s.ops, cfg, smooth_c0));
}

TEST_CASE("initial datum outside the unit interval is rejected") {
  Setup s;
  TimeConfig cfg;
  cfg.tau = 0.1;
  cfg.T = 0.2;
  TimeLoop high(s.sys, s.ops, cfg, [](const Vec2&) { return 1.2; });
  CHECK_THROWS(high.initialize());
  TimeLoop low(s.sys, s.ops, cfg, [](const Vec2&) { return -0.1; });
  CHECK_THROWS(low.initialize());
}

TEST_CASE("ramp-up grows the history to the target depth") {
  Setup s;
  TimeConfig cfg;
  cfg.nu = 3;
  cfg.tau = 0.05;
  cfg.T = 0.25;
  TimeLoop loop(s.sys, s.ops, cfg, smooth_c0);
  loop.initialize();
  CHECK(loop.history().size() == 1);
  loop.advance();
  CHECK(loop.history().size() == 2);
  loop.advance();
  CHECK(loop.history().size() == 3);
  loop.advance();
  CHECK(loop.history().size() == 3);  // capped at nu
  CHECK(loop.step() == 3);
  CHECK(loop.time() == doctest::Approx(0.15));
}

TEST_CASE("exact initialization seeds the pre-initial history") {
  Setup s;
  TimeConfig cfg;
  cfg.nu = 3;
  cfg.tau = 0.05;
  cfg.T = 0.2;
  cfg.init = TimeConfig::Init::exact;
  auto exact = [](const Vec2& x, double t) { return smooth_c0(x) * std::exp(-t); };
  TimeLoop loop(s.sys, s.ops, cfg, smooth_c0, exact);
  loop.initialize();
  CHECK(loop.history().size() == 3);
  // The newest history entry is the t = 0 load, so it matches ramp-up's.
  TimeConfig ramp_cfg = cfg;
  ramp_cfg.init = TimeConfig::Init::rampup;
  TimeLoop ramp(s.sys, s.ops, ramp_cfg, smooth_c0);
  ramp.initialize();
  CHECK((loop.history().front() - ramp.history().front()).norm() < 1e-14);
  // Deeper entries differ (they carry exp(+j tau)).
  CHECK((loop.history()[1] - loop.history()[0]).norm() > 1e-6);
  loop.run();
  CHECK(loop.step() == 4);
}

TEST_CASE("constants are fixed points without reaction") {
  Setup s(0.0);  // alpha = 0
  TimeConfig cfg;
  cfg.nu = 2;
  cfg.tau = 0.1;
  cfg.T = 0.5;
  cfg.keep_states = true;
  TimeLoop loop(s.sys, s.ops, cfg, [](const Vec2&) { return 0.3; });
  loop.run();
  CHECK(loop.step() == 5);
  CHECK(static_cast<int>(loop.states().size()) == 5);

  const double w_star = entropy::s_prime_of_c(0.3);
  for (const StepRecord& rec : loop.records()) {
    CHECK(rec.min_u == doctest::Approx(0.3).epsilon(1e-9));
    CHECK(rec.max_u == doctest::Approx(0.3).epsilon(1e-9));
    CHECK(rec.mass == doctest::Approx(0.3 * s.mesh.total_area()).epsilon(1e-9));
  }
  for (int k = 0; k < s.mesh.n_cells(); ++k)
    CHECK(s.space.eval_scalar(loop.W(), k, s.mesh.cell_centroids[k]) ==
          doctest::Approx(w_star).epsilon(1e-8));
  // Ledger stays compliant and sigma vanishes.
  CHECK(loop.ledger().compliant());
  CHECK(loop.S().norm() < 1e-8);
}

TEST_CASE("records carry monotone time and per-step Newton data") {
  Setup s;
  TimeConfig cfg;
  cfg.nu = 1;
  cfg.tau = 0.05;
  cfg.T = 0.3;
  TimeLoop loop(s.sys, s.ops, cfg, smooth_c0);
  loop.run();
  const auto& recs = loop.records();
  REQUIRE(static_cast<int>(recs.size()) == 6);
  REQUIRE(loop.traces().size() == recs.size());
  for (size_t i = 0; i < recs.size(); ++i) {
    CHECK(recs[i].step == static_cast<int>(i) + 1);
    CHECK(recs[i].t == doctest::Approx(0.05 * (i + 1)));
    CHECK(recs[i].newton_iters == static_cast<int>(loop.traces()[i].rows.size()));
    CHECK(recs[i].min_u > 0.0);
    CHECK(recs[i].max_u < 1.0);
    CHECK(recs[i].newton_residual <= 1e-10);
  }
  // Growth from the logistic reaction: total mass increases.
  CHECK(recs.back().mass > recs.front().mass);
  // One ledger entry per step, compliant at first order.
  CHECK(loop.ledger().entries().size() == recs.size());
  CHECK(loop.ledger().compliant());
  CHECK_THROWS(loop.advance());  // already at T
}
