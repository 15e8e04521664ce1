#include <doctest.h>

#include <cmath>

#include "gaitforge/gaits.hpp"
#include "gaitforge/rng.hpp"
#include "gaitforge/trajectory.hpp"

using namespace gaitforge;

namespace {

const RadiusBounds kBounds;

ControlPointSet random_points(RandomStream& rng,
                              int n = kDefaultControlPoints) {
  Eigen::VectorXd radii(n);
  for (int i = 0; i < n; ++i)
    radii[i] = rng.uniform(kBounds.w_min, kBounds.w_max);
  return ControlPointSet(radii, kBounds);
}

// Third-order one-sided difference quotients: exact for cubics up to
// roundoff, and the stencil stays within one spline segment.
double left_slope(const FootTrajectory& traj, double phi, double h = 1e-4) {
  return (11.0 * traj.evaluate(phi) - 18.0 * traj.evaluate(phi - h) +
          9.0 * traj.evaluate(phi - 2.0 * h) - 2.0 * traj.evaluate(phi - 3.0 * h)) /
         (6.0 * h);
}
double right_slope(const FootTrajectory& traj, double phi, double h = 1e-4) {
  return (-11.0 * traj.evaluate(phi) + 18.0 * traj.evaluate(phi + h) -
          9.0 * traj.evaluate(phi + 2.0 * h) + 2.0 * traj.evaluate(phi + 3.0 * h)) /
         (6.0 * h);
}

}  // namespace

TEST_SUITE("trajectory") {

TEST_CASE("constant radii give the constant loop with zero tangents") {
  Eigen::VectorXd radii = Eigen::VectorXd::Constant(18, 0.16);
  const FootTrajectory traj = build_trajectory({radii, kBounds});
  CHECK(traj.tangents().cwiseAbs().maxCoeff() == 0.0);
  RandomStream rng(3);
  for (int i = 0; i < 100; ++i)
    CHECK(traj.evaluate(rng.uniform(0.0, 2.0 * M_PI)) ==
          doctest::Approx(0.16).epsilon(1e-14));
}

TEST_CASE("knot phases reproduce the sampled cosine radii exactly") {
  const int n = 18;
  Eigen::VectorXd radii(n);
  for (int i = 0; i < n; ++i)
    radii[i] = 0.16 + 0.05 * std::cos(2.0 * M_PI * i / n);
  const ControlPointSet points(radii, kBounds);
  const FootTrajectory traj = build_trajectory(points);
  for (int i = 0; i < n; ++i)
    CHECK(traj.evaluate(points.phase(i)) == radii[i]);
}

TEST_CASE("segment midpoint matches the hand-evaluated hermite basis") {
  // Basis at t = 1/2 is [0.5, 0.5, 0.125, -0.125] against
  // [w0, w1, w0'*dx, w1'*dx].
  const int n = 18;
  Eigen::VectorXd radii = Eigen::VectorXd::Constant(n, 0.15);
  radii[0] = 0.1;
  radii[1] = 0.2;
  radii[2] = 0.17;
  radii[n - 1] = 0.12;
  const ControlPointSet points(radii, kBounds);
  const FootTrajectory traj = build_trajectory(points);

  const double dx = points.spacing();
  const double w0p = (radii[1] - radii[n - 1]) / (2.0 * dx);
  const double w1p = (radii[2] - radii[0]) / (2.0 * dx);
  const double expected =
      0.5 * radii[0] + 0.5 * radii[1] + 0.125 * w0p * dx - 0.125 * w1p * dx;

  CHECK(traj.evaluate(0.5 * dx) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("knot interpolation is exact for random point sets") {
  RandomStream rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const ControlPointSet points = random_points(rng);
    const FootTrajectory traj = build_trajectory(points);
    for (int i = 0; i < points.count(); ++i)
      CHECK(traj.evaluate(points.phase(i)) == points.radius(i));
  }
}

TEST_CASE("loop closes: phi and phi + 2pi evaluate identically") {
  RandomStream rng(19);
  const FootTrajectory traj = build_trajectory(random_points(rng));
  // Multiples of 1/8 survive the +2pi addition without rounding, so the
  // wrap is bit-exact there.
  for (int i = 0; i < 50; ++i) {
    const double phi = 0.125 * i;
    CHECK(traj.evaluate(phi) == traj.evaluate(phi + 2.0 * M_PI));
  }
  for (int i = 0; i < 200; ++i) {
    const double phi = rng.uniform(0.0, 2.0 * M_PI);
    CHECK(traj.evaluate(phi + 2.0 * M_PI) ==
          doctest::Approx(traj.evaluate(phi)).epsilon(1e-12));
  }
}

TEST_CASE("finite differences recover the stored tangents") {
  RandomStream rng(23);
  const FootTrajectory traj = build_trajectory(random_points(rng));
  const auto& knots = traj.knots();
  for (int i = 0; i < knots.count(); ++i) {
    const double h = 1e-6;
    const double phi = knots.phase(i);
    const double fd =
        (traj.evaluate(phi + h) - traj.evaluate(phi - h)) / (2.0 * h);
    CHECK(fd == doctest::Approx(traj.tangents()[i]).epsilon(1e-6));
    CHECK(traj.derivative(phi) == traj.tangents()[i]);
  }
}

TEST_CASE("left and right slopes agree at every knot") {
  RandomStream rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    const FootTrajectory traj = build_trajectory(random_points(rng));
    for (int i = 0; i < traj.knots().count(); ++i) {
      const double phi = traj.knots().phase(i) + 2.0 * M_PI;  // interior wrap
      CHECK(std::abs(left_slope(traj, phi) - right_slope(traj, phi)) <= 1e-9);
    }
  }
}

TEST_CASE("out-of-bounds radii are rejected") {
  Eigen::VectorXd radii = Eigen::VectorXd::Constant(18, 0.16);
  radii[4] = kBounds.w_max + 1e-3;
  CHECK_THROWS_AS(ControlPointSet(radii, kBounds), InvalidControlPoints);
  CHECK_THROWS_AS(
      ControlPointSet(Eigen::VectorXd::Constant(4, 0.16), kBounds),
      InvalidControlPoints);
  CHECK_THROWS_AS(
      ControlPointSet(Eigen::VectorXd::Constant(30, 0.16), kBounds),
      InvalidControlPoints);
}

TEST_CASE("sagittal targets stay in the x-y plane") {
  RandomStream rng(31);
  const FootTrajectory traj = build_trajectory(random_points(rng));
  const WorkspaceBox huge{Vec3::Constant(-1.0), Vec3::Constant(1.0)};
  for (int i = 0; i < 100; ++i) {
    const PhaseState phase{rng.uniform(0.0, 2.0 * M_PI), 0.25};
    const FootPoint p =
        foot_target(traj, phase, 0.0, GaitPlane::sagittal(), huge);
    CHECK(p.position.z() == 0.0);
  }
}

TEST_CASE("frontal targets have zero forward component") {
  RandomStream rng(37);
  const FootTrajectory traj = build_trajectory(random_points(rng));
  const WorkspaceBox huge{Vec3::Constant(-1.0), Vec3::Constant(1.0)};
  for (int i = 0; i < 100; ++i) {
    const PhaseState phase{rng.uniform(0.0, 2.0 * M_PI), 0.25};
    const FootPoint p =
        foot_target(traj, phase, 0.0, GaitPlane::frontal(), huge);
    CHECK(p.position.x() == 0.0);
  }
}

TEST_CASE("yawed plane equals the rotated sagittal target") {
  RandomStream rng(41);
  const FootTrajectory traj = build_trajectory(random_points(rng));
  const WorkspaceBox huge{Vec3::Constant(-1.0), Vec3::Constant(1.0)};
  const double yaw = M_PI / 4.0;
  const Eigen::AngleAxisd rot(yaw, Vec3::UnitY());
  for (int i = 0; i < 200; ++i) {
    const PhaseState phase{rng.uniform(0.0, 2.0 * M_PI), 0.25};
    const Vec3 sagittal =
        foot_target(traj, phase, 0.0, GaitPlane::sagittal(), huge).position;
    const Vec3 yawed =
        foot_target(traj, phase, 0.0, GaitPlane::yawed(yaw), huge).position;
    CHECK((yawed - rot * sagittal).norm() <= 1e-12);
  }
  // At phi = pi/2 the radial direction is horizontal, so forward and
  // lateral components match in magnitude under 45 degrees of yaw.
  const PhaseState quarter{M_PI / 2.0, 0.25};
  const Vec3 p =
      foot_target(traj, quarter, 0.0, GaitPlane::yawed(yaw), huge).position;
  CHECK(std::abs(p.x()) == doctest::Approx(std::abs(p.z())).epsilon(1e-12));
}

TEST_CASE("clamped targets stay inside the workspace") {
  RandomStream rng(43);
  const LegGeometry geom;
  const WorkspaceBox box;
  ClampCounter clamps;
  const FootTrajectory traj = build_trajectory(random_points(rng));
  for (int i = 0; i < 500; ++i) {
    const PhaseState phase{rng.uniform(0.0, 2.0 * M_PI), 0.25};
    const double offset = rng.uniform(0.0, 2.0 * M_PI);
    const FootPoint p =
        foot_target(traj, phase, offset, GaitPlane::sagittal(), box, &clamps);
    CHECK(workspace_contains(geom, box, p));
  }
  CHECK(clamps.events > 0);  // the raw loop does leave the box
}

TEST_CASE("phase boundary fires when crossing pi") {
  const PhaseState phase{M_PI - 1e-4, 0.25};
  const auto [next, boundary] = advance_phase(phase, 0.001);
  CHECK(boundary);
  CHECK(next.phi > M_PI);
}

TEST_CASE("phase boundary fires when landing exactly on pi") {
  // step_duration = pi makes dphi == dt with no rounding.
  const PhaseState phase{3.0, M_PI};
  const auto [next, boundary] = advance_phase(phase, M_PI - 3.0);
  CHECK(next.phi == M_PI);
  CHECK(boundary);
  // Starting exactly on the boundary must not re-fire.
  const auto [next2, boundary2] = advance_phase(next, 0.01);
  CHECK_FALSE(boundary2);
}

TEST_CASE("one full cycle fires the boundary exactly twice") {
  PhaseState phase{0.0, 0.25};
  int fires = 0;
  const int k = 500;
  for (int i = 0; i < k; ++i) {
    const auto [next, boundary] = advance_phase(phase, 2.0 * 0.25 / k);
    phase = next;
    if (boundary) ++fires;
  }
  CHECK(fires == 2);
}

TEST_CASE("phase advances monotonically modulo 2pi") {
  RandomStream rng(47);
  PhaseState phase{0.0, 0.25};
  double unwrapped = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double dt = rng.uniform(1e-4, 0.2);
    const double dphi = M_PI * dt / phase.step_duration;
    const auto [next, boundary] = advance_phase(phase, dt);
    (void)boundary;
    unwrapped += dphi;
    CHECK(next.phi >= 0.0);
    CHECK(next.phi < 2.0 * M_PI);
    // The wrapped value tracks the unwrapped accumulation.
    CHECK(std::abs(wrap_two_pi(unwrapped) - next.phi) < 1e-6);
    phase = next;
  }
}

TEST_CASE("blending a gait onto itself is a fixed point") {
  const GaitConfig turn = gait_config(GaitName::Turn);
  BlendState state = blend_init(turn);
  for (int i = 0; i < 10; ++i) {
    state = blend_gaits(state, turn, 0.3);
    for (int leg = 0; leg < kNumLegs; ++leg) {
      CHECK(state.yaw[leg] == turn.leg_planes[leg].yaw);
      CHECK(state.offset[leg] == turn.phase_offsets[leg]);
    }
  }
}

TEST_CASE("alpha = 1 jumps to the target in one step") {
  const GaitConfig from = gait_config(GaitName::ForwardTrot);
  const GaitConfig to = gait_config(GaitName::Turn);
  const BlendState state = blend_gaits(blend_init(from), to, 1.0);
  for (int leg = 0; leg < kNumLegs; ++leg)
    CHECK(state.yaw[leg] == to.leg_planes[leg].yaw);
}

TEST_CASE("alpha = 0.3 follows the geometric recursion toward 45 degrees") {
  GaitConfig from = gait_config(GaitName::ForwardTrot);
  GaitConfig to = from;
  const double target = M_PI / 4.0;
  for (int leg = 0; leg < kNumLegs; ++leg)
    to.leg_planes[leg] = GaitPlane::yawed(target);

  BlendState state = blend_init(from);
  for (int k = 1; k <= 25; ++k) {
    state = blend_gaits(state, to, 0.3);
    const double expected = target * (1.0 - std::pow(0.7, k));
    for (int leg = 0; leg < kNumLegs; ++leg)
      CHECK(state.yaw[leg] == doctest::Approx(expected).epsilon(1e-12));
  }
}

}  // TEST_SUITE
