#include "gaitforge/kinematics.hpp"

#include <algorithm>
#include <cmath>

namespace gaitforge {

void LegGeometry::validate() const {
  if (!(upper_link_length > 0.0) || !(lower_link_length > 0.0))
    throw std::invalid_argument("LegGeometry: link lengths must be positive");
  if (!(max_radius() - min_radius() > 2.0 * kExtensionMargin))
    throw std::invalid_argument("LegGeometry: degenerate reachable annulus");
}

bool JointLimits::contains(const LegAngles& a) const {
  const Vec3 v{a.abduction, a.hip, a.knee};
  return (v.array() >= lower.array()).all() &&
         (v.array() <= upper.array()).all();
}

bool JointLimits::contains(const Vec12& q) const {
  for (int leg = 0; leg < kNumLegs; ++leg) {
    for (int s = 0; s < kJointsPerLeg; ++s) {
      const double v = q[leg * kJointsPerLeg + s];
      if (v < lower[s] || v > upper[s]) return false;
    }
  }
  return true;
}

FootPoint forward_kinematics(const LegGeometry& geom, const LegAngles& angles) {
  const double u = geom.upper_link_length;
  const double l = geom.lower_link_length;

  // Planar 2R in the leg plane; hip angle measured from the downward
  // vertical toward +x.
  const double x = u * std::sin(angles.hip) +
                   l * std::sin(angles.hip + angles.knee);
  const double y = -u * std::cos(angles.hip) -
                   l * std::cos(angles.hip + angles.knee);

  const double ca = std::cos(angles.abduction);
  const double sa = std::sin(angles.abduction);
  const double d = geom.abduction_axis_offset;

  // Roll the leg plane about x. abduction = 0 leaves z = d (0 by default).
  FootPoint foot;
  foot.position = Vec3{x, y * ca - d * sa, y * sa + d * ca};
  return foot;
}

LegAngles inverse_kinematics(const LegGeometry& geom, const FootPoint& target,
                             KneeBranch branch) {
  const Vec3& p = target.position;
  if (!p.allFinite()) throw UnreachableError("ik: non-finite target");

  const double d = geom.abduction_axis_offset;
  const double rho = std::hypot(p.y(), p.z());
  if (rho < std::abs(d) + kExtensionMargin)
    throw UnreachableError("ik: target too close to the abduction axis");

  // Solve -p.y*sin(a) + p.z*cos(a) = d for the roll angle a.
  const double a =
      std::asin(d / rho) - std::atan2(p.z(), -p.y());

  // Rotate the target back into the leg plane.
  const double ca = std::cos(a);
  const double sa = std::sin(a);
  const double qx = p.x();
  const double qy = p.y() * ca + p.z() * sa;

  const double u = geom.upper_link_length;
  const double l = geom.lower_link_length;
  const double r2 = qx * qx + qy * qy;
  const double r = std::sqrt(r2);
  if (r < geom.min_radius() + kExtensionMargin ||
      r > geom.max_radius() - kExtensionMargin)
    throw UnreachableError("ik: radius outside reachable annulus");

  double cos_knee = (r2 - u * u - l * l) / (2.0 * u * l);
  cos_knee = std::clamp(cos_knee, -1.0, 1.0);
  const double knee =
      branch == KneeBranch::Backward ? std::acos(cos_knee) : -std::acos(cos_knee);

  const double gamma = std::atan2(qx, -qy);
  const double hip =
      gamma - std::atan2(l * std::sin(knee), u + l * std::cos(knee));

  return LegAngles{a, hip, knee};
}

LegAngles inverse_kinematics(const LegGeometry& geom,
                             const JointLimits& limits, const FootPoint& target,
                             KneeBranch branch) {
  const LegAngles a = inverse_kinematics(geom, target, branch);
  if (!limits.contains(a))
    throw UnreachableError("ik: solution violates joint limits");
  return a;
}

bool workspace_contains(const LegGeometry& geom, const WorkspaceBox& box,
                        const FootPoint& point) {
  const double r = point.position.norm();
  if (r < geom.min_radius() + kExtensionMargin) return false;
  if (r > geom.max_radius() - kExtensionMargin) return false;
  return box.contains(point.position);
}

}  // namespace gaitforge
