#include <doctest.h>

#include <cmath>
#include <random>

#include "fastdiff/grid.hpp"
#include "fastdiff/profiles.hpp"
#include "fastdiff/solver_physical.hpp"

using namespace fastdiff;
constexpr double kInf = std::numeric_limits<double>::infinity();

namespace {
const ModelParams kRef{.n = 2, .m = 0.75, .p = 2.0};

ModelParams no_absorption() {
  ModelParams p = kRef;
  p.absorption_enabled = false;
  return p;
}
}  // namespace

TEST_CASE("constant field is a zero-flux equilibrium without absorption") {
  auto g = build_grid(2, 5.0, 128);
  Field u(g, std::vector<double>(128, 0.7));
  StepControl ctrl;
  const StepAttempt att = step_physical(u, 0.0, 0.05, no_absorption(), ctrl);
  REQUIRE(att.next.has_value());
  for (int i = 0; i < 128; ++i) CHECK((*att.next)[i] == doctest::Approx(0.7).epsilon(1e-13));
}

TEST_CASE("constant field with absorption solves the scalar implicit root") {
  auto g = build_grid(2, 5.0, 128);
  Field u(g, std::vector<double>(128, 1.0));
  StepControl ctrl;
  const double dt = 0.01;
  const StepAttempt att = step_physical(u, 0.0, dt, kRef, ctrl);
  REQUIRE(att.next.has_value());
  // oracle: root of x + dt x^2 = 1 -> x = (-1 + sqrt(1 + 4 dt)) / (2 dt)
  const double root = (-1.0 + std::sqrt(1.0 + 4.0 * dt)) / (2.0 * dt);
  for (int i = 0; i < 128; i += 17) {
    CHECK((*att.next)[i] == doctest::Approx(root).epsilon(1e-10));
  }
}

TEST_CASE("one step: mass decreases with absorption, conserved without") {
  auto g = build_grid(2, 30.0, 512);
  const BarenblattSpec spec = solve_theta(1.0, kRef);
  Field u = u_profile(spec.beta, kRef, 1.0, g);
  StepControl ctrl;

  const StepAttempt on = step_physical(u, 0.0, 0.01, kRef, ctrl);
  REQUIRE(on.next.has_value());
  CHECK(mass(*on.next) < mass(u));

  const StepAttempt off = step_physical(u, 0.0, 0.01, no_absorption(), ctrl);
  REQUIRE(off.next.has_value());
  CHECK(std::abs(mass(*off.next) - mass(u)) <= 10.0 * ctrl.newton_tol);
}

TEST_CASE("zero initial data stays zero") {
  auto g = build_grid(2, 10.0, 256);
  Trajectory traj = run_physical(Field(g), 1.0, kRef, StepControl{}, {0.0, 0.5, 1.0});
  REQUIRE(traj.snapshots.size() == 3);
  for (const auto& snap : traj.snapshots) {
    CHECK(lr_norm(snap.field, kInf) == 0.0);
  }
}

TEST_CASE("tracks the self-similar solution without absorption") {
  // U_M solves the pure fast diffusion equation exactly
  const BarenblattSpec spec = solve_theta(1.0, kRef);
  auto g = build_grid(2, 90.0, 1024, Grading::geometric, 1.004);
  Field u0 = u_profile(spec.beta, kRef, 1.0, g);
  StepControl ctrl;
  ctrl.dt_init = 1e-4;
  ctrl.dt_max = 2e-3;
  const ModelParams params = no_absorption();
  Trajectory traj = run_physical(u0, 0.5, params, ctrl, {0.1, 0.25, 0.5});
  for (const auto& snap : traj.snapshots) {
    Field exact = u_profile(spec.beta, kRef, 1.0 + snap.time, u0.grid_ptr());
    CHECK(l1_distance(snap.field, exact) < 2e-3);
  }
}

TEST_CASE("L^r norms contract along trajectories") {
  auto g = build_grid(2, 20.0, 512);
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  std::vector<double> v(512);
  for (size_t i = 0; i < v.size(); ++i) v[i] = d(rng) * std::exp(-0.05 * i);
  Field u0 = mollify_initial(Field(g, v), 0.5);  // smooth the noise a bit

  StepControl ctrl;
  Trajectory traj = run_physical(u0, 0.5, kRef, ctrl, {0.5});
  CHECK(traj.audit.max_l1_increase <= 10.0 * ctrl.newton_tol);
  CHECK(traj.audit.max_l2_increase <= 10.0 * ctrl.newton_tol);
  CHECK(traj.audit.max_linf_increase <= 10.0 * ctrl.newton_tol);
  // backward-Euler mass identity holds to Newton tolerance per step
  CHECK(traj.audit.max_mass_ode_residual <= 10.0 * ctrl.newton_tol / ctrl.dt_min * 1e-12 + 1e-6);
}

TEST_CASE("mollifier basics") {
  auto g = build_grid(2, 10.0, 512);
  std::vector<double> step_data(512, 0.0);
  for (int i = 0; i < 512; ++i) {
    if (g->centers()[i] < 3.0) step_data[i] = 1.0;
  }
  Field u(g, step_data);

  Field same = mollify_initial(u, 0.0);
  for (int i = 0; i < 512; ++i) CHECK(same[i] == u[i]);

  Field smooth = mollify_initial(u, 0.8);
  CHECK(std::abs(mass(smooth) - mass(u)) <= 1e-8 * mass(u));
  // support grows by at most the mollification radius
  for (int i = 0; i < 512; ++i) {
    if (g->centers()[i] > 3.0 + 0.8) CHECK(smooth[i] == 0.0);
  }
  // strictly inside the original support the data is still positive
  CHECK(smooth[0] > 0.0);
  // the jump is actually smoothed: value at the old edge is intermediate
  bool has_intermediate = false;
  for (int i = 0; i < 512; ++i) {
    if (smooth[i] > 0.05 && smooth[i] < 0.95) has_intermediate = true;
  }
  CHECK(has_intermediate);

  CHECK_THROWS(mollify_initial(u, -0.1));
}

TEST_CASE("epsilon robustness of short runs") {
  auto g = build_grid(2, 40.0, 512);
  const BarenblattSpec spec = solve_theta(1.0, kRef);
  Field u0 = u_profile(spec.beta, kRef, 1.0, g);
  StepControl ctrl;
  ModelParams a = kRef;
  a.epsilon = 1e-8;
  ModelParams b = kRef;
  b.epsilon = 5e-9;
  Trajectory ta = run_physical(u0, 0.5, a, ctrl, {0.5});
  Trajectory tb = run_physical(u0, 0.5, b, ctrl, {0.5});
  CHECK(l1_distance(ta.snapshots.back().field, tb.snapshots.back().field) < 1e-6);
}

TEST_CASE("dt underflow raises SolverError with the failing time") {
  auto g = build_grid(2, 10.0, 128);
  Field u(g, std::vector<double>(128, 1.0));
  StepControl ctrl;
  ctrl.dt_init = 0.1;
  ctrl.dt_min = 0.1;
  ctrl.dt_max = 0.1;
  ctrl.newton_max_iter = 1;  // cannot converge in one iteration
  ctrl.newton_tol = 1e-14;
  CHECK_THROWS_AS(run_physical(u, 1.0, kRef, ctrl, {1.0}), SolverError);
}

TEST_CASE("snapshot times are hit exactly") {
  auto g = build_grid(2, 10.0, 128);
  Field u(g, std::vector<double>(128, 0.3));
  StepControl ctrl;
  ctrl.dt_init = 0.007;  // deliberately incommensurate with the snapshot times
  ctrl.dt_max = 0.013;
  Trajectory traj = run_physical(u, 0.4, kRef, ctrl, {0.1, 0.2, 0.3, 0.4});
  REQUIRE(traj.snapshots.size() == 4);
  CHECK(traj.snapshots[0].time == 0.1);
  CHECK(traj.snapshots[1].time == 0.2);
  CHECK(traj.snapshots[2].time == 0.3);
  CHECK(traj.snapshots[3].time == 0.4);
}
