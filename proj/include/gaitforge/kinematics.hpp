#pragma once

#include "gaitforge/types.hpp"

namespace gaitforge {

// Hip-frame convention used throughout: x forward, y up, z to the robot's
// right. The leg hangs along -y; the five-bar is solved as its equivalent
// serial 2R chain in the leg plane, composed with the abduction roll about
// the x axis.

// Targets closer than this to full extension or full fold are rejected so
// the planar solve stays well conditioned.
constexpr double kExtensionMargin = 1e-4;

struct LegGeometry {
  double upper_link_length = 0.12;   // m
  double lower_link_length = 0.145;  // m
  Vec3 hip_offset = Vec3::Zero();    // hip origin in the body frame
  double abduction_axis_offset = 0.0;  // leg-plane offset from the roll axis

  double min_radius() const {
    return std::abs(upper_link_length - lower_link_length);
  }
  double max_radius() const { return upper_link_length + lower_link_length; }

  void validate() const;
};

struct LegAngles {
  double abduction = 0.0;
  double hip = 0.0;
  double knee = 0.0;
};

// Per-slot limits (abduction, hip, knee), shared by all four legs.
struct JointLimits {
  Vec3 lower{-0.7, -1.2, -2.4};
  Vec3 upper{0.7, 1.2, 2.4};

  bool contains(const LegAngles& a) const;
  bool contains(const Vec12& q) const;
};

struct FootPoint {
  Vec3 position = Vec3::Zero();  // hip frame, meters
};

// Axis-aligned box confining foot targets, hip frame.
struct WorkspaceBox {
  Vec3 min{-0.13, -0.22, -0.06};
  Vec3 max{0.13, -0.10, 0.06};

  bool contains(const Vec3& p) const {
    return (p.array() >= min.array()).all() &&
           (p.array() <= max.array()).all();
  }
  Vec3 clamp(const Vec3& p) const {
    return p.cwiseMax(min).cwiseMin(max);
  }
};

enum class KneeBranch { Backward, Forward };

FootPoint forward_kinematics(const LegGeometry& geom, const LegAngles& angles);

// Throws UnreachableError when the target lies outside the reachable
// annulus (with the extension margin applied).
LegAngles inverse_kinematics(const LegGeometry& geom, const FootPoint& target,
                             KneeBranch branch);

// Same, but also rejects solutions violating the joint limits.
LegAngles inverse_kinematics(const LegGeometry& geom,
                             const JointLimits& limits, const FootPoint& target,
                             KneeBranch branch);

// True iff the point lies in the reachable spherical annulus and the box.
bool workspace_contains(const LegGeometry& geom, const WorkspaceBox& box,
                        const FootPoint& point);

}  // namespace gaitforge
