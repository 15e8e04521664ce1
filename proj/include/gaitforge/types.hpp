#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <stdexcept>
#include <string>

namespace gaitforge {

using Vec3 = Eigen::Vector3d;
using Vec12 = Eigen::Matrix<double, 12, 1>;
using Mat3 = Eigen::Matrix3d;
using Quat = Eigen::Quaterniond;

constexpr int kNumLegs = 4;
constexpr int kJointsPerLeg = 3;
constexpr int kStateDim = kNumLegs * kJointsPerLeg;

// Leg ordering is fixed as FL, FR, BL, BR; joints within a leg as
// abduction, hip, knee. All 12-vectors in the project follow this layout.
enum class Leg : int { FL = 0, FR = 1, BL = 2, BR = 3 };
enum class JointSlot : int { Abduction = 0, Hip = 1, Knee = 2 };

constexpr int joint_index(Leg leg, JointSlot slot) {
  return static_cast<int>(leg) * kJointsPerLeg + static_cast<int>(slot);
}

inline const char* leg_name(Leg leg) {
  switch (leg) {
    case Leg::FL: return "fl";
    case Leg::FR: return "fr";
    case Leg::BL: return "bl";
    case Leg::BR: return "br";
  }
  return "?";
}

constexpr std::array<Leg, kNumLegs> kAllLegs{Leg::FL, Leg::FR, Leg::BL,
                                             Leg::BR};

// The policy's input: the 12 motor angles sampled at a gait-step boundary.
struct JointState {
  Vec12 angles = Vec12::Zero();

  JointState() = default;
  explicit JointState(const Vec12& a) : angles(a) {
    if (!angles.allFinite())
      throw std::invalid_argument("JointState: non-finite entry");
  }
  double operator[](int i) const { return angles[i]; }
};

struct UnreachableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidControlPoints : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DimensionMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct RankDeficientError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EpisodeDiverged : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnknownGaitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct TrainingAborted : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace gaitforge
