#include <doctest.h>

#include <cmath>

#include "gaitforge/kinematics.hpp"
#include "gaitforge/rng.hpp"

using namespace gaitforge;

namespace {

// Valid angle triples away from the fold/extension singularities and from
// the abduction-singular plane (planar foot at hip height), where the
// round-trip identity is well posed.
LegAngles sample_safe_angles(const LegGeometry& geom, RandomStream& rng,
                             KneeBranch branch) {
  for (;;) {
    LegAngles a;
    a.abduction = rng.uniform(-0.6, 0.6);
    a.hip = rng.uniform(-0.9, 0.9);
    const double knee_mag = rng.uniform(0.35, 2.2);
    a.knee = branch == KneeBranch::Backward ? knee_mag : -knee_mag;

    const double u = geom.upper_link_length;
    const double l = geom.lower_link_length;
    const double x = u * std::sin(a.hip) + l * std::sin(a.hip + a.knee);
    const double y = -u * std::cos(a.hip) - l * std::cos(a.hip + a.knee);
    const double r = std::hypot(x, y);
    if (r < geom.min_radius() + 2.0 * kExtensionMargin) continue;
    if (r > geom.max_radius() - 2.0 * kExtensionMargin) continue;
    if (std::abs(std::atan2(x, -y)) > 1.2) continue;
    return a;
  }
}

}  // namespace

TEST_SUITE("kinematics") {

TEST_CASE("fully folded leg sits at the inner annulus radius") {
  const LegGeometry geom;
  const FootPoint p =
      forward_kinematics(geom, LegAngles{0.0, 0.3, M_PI});
  CHECK(p.position.norm() ==
        doctest::Approx(geom.min_radius()).epsilon(1e-12));
}

TEST_CASE("straight leg points straight down") {
  const LegGeometry geom;
  const FootPoint p = forward_kinematics(geom, LegAngles{0.0, 0.0, 0.0});
  CHECK(p.position.x() == doctest::Approx(0.0));
  CHECK(p.position.y() == doctest::Approx(-geom.max_radius()));
  CHECK(p.position.z() == 0.0);
}

TEST_CASE("zero abduction keeps the foot exactly in the sagittal plane") {
  const LegGeometry geom;
  RandomStream rng(11);
  for (int i = 0; i < 200; ++i) {
    const LegAngles a{0.0, rng.uniform(-1.2, 1.2), rng.uniform(-2.4, 2.4)};
    CHECK(forward_kinematics(geom, a).position.z() == 0.0);
  }
}

TEST_CASE("fk image stays inside the analytic annulus") {
  const LegGeometry geom;
  RandomStream rng(42);
  for (int i = 0; i < 1000; ++i) {
    const LegAngles a{rng.uniform(-0.7, 0.7), rng.uniform(-1.2, 1.2),
                      rng.uniform(-2.4, 2.4)};
    const double r = forward_kinematics(geom, a).position.norm();
    CHECK(r >= geom.min_radius() - 1e-12);
    CHECK(r <= geom.max_radius() + 1e-12);
  }
}

TEST_CASE("near-extension target resolves to a nearly straight leg") {
  const LegGeometry geom;
  const double r = geom.max_radius() - 1e-3;
  const LegAngles a = inverse_kinematics(geom, FootPoint{Vec3{0.0, -r, 0.0}},
                                         KneeBranch::Backward);
  CHECK(a.abduction == doctest::Approx(0.0));
  CHECK(std::abs(a.knee) < 0.2);
}

TEST_CASE("targets outside the annulus are unreachable") {
  const LegGeometry geom;
  CHECK_THROWS_AS(
      inverse_kinematics(
          geom, FootPoint{Vec3{0.0, -(geom.max_radius() + 0.01), 0.0}},
          KneeBranch::Backward),
      UnreachableError);
  CHECK_THROWS_AS(
      inverse_kinematics(geom, FootPoint{Vec3{0.0, -0.01, 0.0}},
                         KneeBranch::Backward),
      UnreachableError);
}

TEST_CASE("ik respects joint limits when given them") {
  const LegGeometry geom;
  JointLimits limits;
  limits.lower[1] = -0.1;
  limits.upper[1] = 0.1;  // pinch the hip range
  // A far-forward target needs a large hip angle.
  CHECK_THROWS_AS(inverse_kinematics(geom, limits,
                                     FootPoint{Vec3{0.18, -0.10, 0.0}},
                                     KneeBranch::Backward),
                  UnreachableError);
}

TEST_CASE("fk-ik round trip over 10000 reachable points") {
  const LegGeometry geom;
  RandomStream rng(7);
  double worst_pos = 0.0;
  double worst_ang = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const KneeBranch branch =
        rng.uniform() < 0.5 ? KneeBranch::Backward : KneeBranch::Forward;
    const LegAngles a = sample_safe_angles(geom, rng, branch);
    const FootPoint p = forward_kinematics(geom, a);

    const LegAngles rec = inverse_kinematics(geom, p, branch);
    const FootPoint p2 = forward_kinematics(geom, rec);

    worst_pos = std::max(worst_pos, (p2.position - p.position).norm());
    worst_ang = std::max({worst_ang, std::abs(rec.abduction - a.abduction),
                          std::abs(rec.hip - a.hip),
                          std::abs(rec.knee - a.knee)});
  }
  CHECK(worst_pos <= 1e-9);
  CHECK(worst_ang <= 1e-9);
}

TEST_CASE("workspace membership against an independent predicate") {
  const LegGeometry geom;
  const WorkspaceBox box;
  RandomStream rng(1234);
  for (int i = 0; i < 10000; ++i) {
    const Vec3 p{rng.uniform(-0.3, 0.3), rng.uniform(-0.35, 0.05),
                 rng.uniform(-0.15, 0.15)};

    // Direct restatement of the two membership conditions.
    const double r = p.norm();
    const bool in_annulus = r >= geom.min_radius() + kExtensionMargin &&
                            r <= geom.max_radius() - kExtensionMargin;
    const bool in_box = p.x() >= box.min.x() && p.x() <= box.max.x() &&
                        p.y() >= box.min.y() && p.y() <= box.max.y() &&
                        p.z() >= box.min.z() && p.z() <= box.max.z();

    CHECK(workspace_contains(geom, box, FootPoint{p}) ==
          (in_annulus && in_box));
  }
}

TEST_CASE("workspace rejects the hip origin and accepts mid-range stance") {
  const LegGeometry geom;
  const WorkspaceBox box;
  CHECK_FALSE(workspace_contains(geom, box, FootPoint{Vec3::Zero()}));
  CHECK(workspace_contains(geom, box, FootPoint{Vec3{0.0, -0.16, 0.0}}));
}

TEST_CASE("degenerate geometry is rejected") {
  LegGeometry geom;
  geom.upper_link_length = -0.1;
  CHECK_THROWS_AS(geom.validate(), std::invalid_argument);
}

}  // TEST_SUITE
