#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <utility>

#include "gaitforge/kinematics.hpp"
#include "gaitforge/types.hpp"

namespace gaitforge {

constexpr int kDefaultControlPoints = 18;
constexpr int kMinControlPoints = 6;
constexpr int kMaxControlPoints = 24;

inline double wrap_two_pi(double phi) {
  const double two_pi = 2.0 * M_PI;
  double w = phi - two_pi * std::floor(phi / two_pi);
  if (w >= two_pi) w -= two_pi;  // guards the phi == -tiny rounding case
  return w;
}

// Radial interval the policy's way-points are clamped into.
struct RadiusBounds {
  double w_min = 0.10;
  double w_max = 0.22;

  double clamp(double w) const { return std::clamp(w, w_min, w_max); }
  double range() const { return w_max - w_min; }
};

// The action: n radial way-points at evenly spaced phases over [0, 2pi).
// Phase is measured from the downward vertical, increasing toward the
// front of the robot.
class ControlPointSet {
 public:
  ControlPointSet(Eigen::VectorXd radii, RadiusBounds bounds);

  int count() const { return static_cast<int>(radii_.size()); }
  double spacing() const { return 2.0 * M_PI / count(); }
  double radius(int i) const { return radii_[i]; }
  double phase(int i) const { return phases_[i]; }
  const Eigen::VectorXd& radii() const { return radii_; }
  const Eigen::VectorXd& phases() const { return phases_; }
  const RadiusBounds& bounds() const { return bounds_; }

 private:
  Eigen::VectorXd radii_;
  Eigen::VectorXd phases_;
  RadiusBounds bounds_;
};

// Closed C1 cubic Hermite spline through the way-points. Tangents follow
// the cyclic centered-difference rule w'_i = (w_{i+1} - w_{i-1}) /
// (alpha_{i+1} - alpha_{i-1}) with index wrap.
class FootTrajectory {
 public:
  explicit FootTrajectory(ControlPointSet knots);

  const ControlPointSet& knots() const { return knots_; }
  const Eigen::VectorXd& tangents() const { return tangents_; }

  // Piecewise cubic in phase; exact at stored knot phases.
  double evaluate(double phi) const;
  // dw/dphi; equals the stored tangent at every knot.
  double derivative(double phi) const;

 private:
  ControlPointSet knots_;
  Eigen::VectorXd tangents_;
};

FootTrajectory build_trajectory(const ControlPointSet& points);

enum class PlaneAxes { Sagittal, Frontal, YawedSagittal };

// Plane carrying a leg's spline, parameterized by yaw about the vertical
// axis: sagittal (x-y) at yaw 0, frontal (y-z) at yaw -pi/2.
struct GaitPlane {
  double yaw = 0.0;
  PlaneAxes axes = PlaneAxes::Sagittal;

  static GaitPlane sagittal() { return {0.0, PlaneAxes::Sagittal}; }
  static GaitPlane frontal() { return {-M_PI / 2.0, PlaneAxes::Frontal}; }
  static GaitPlane yawed(double yaw_rad) {
    return {yaw_rad, PlaneAxes::YawedSagittal};
  }

  // Maps in-plane coordinates (s along the plane's horizontal axis,
  // v vertical) into the hip frame.
  Vec3 embed(double s, double v) const;
};

struct PhaseState {
  double phi = 0.0;            // wrapped into [0, 2pi)
  double step_duration = 0.25;  // seconds per half-cycle
};

struct ClampCounter {
  std::int64_t events = 0;
};

// Polar-to-Cartesian foot target on the gait plane, box-clamped. Clamping
// is silent; pass a counter to observe it.
FootPoint foot_target(const FootTrajectory& traj, const PhaseState& phase,
                      double offset, const GaitPlane& plane,
                      const WorkspaceBox& box,
                      ClampCounter* clamps = nullptr);

// Advances phi by pi*dt/step_duration. The flag is true exactly when the
// step crosses (or lands on) a multiple of pi.
std::pair<PhaseState, bool> advance_phase(const PhaseState& phase, double dt);

// First-order low-pass state for gait transitions: filtered per-leg plane
// yaws and phase offsets.
struct BlendState {
  std::array<double, kNumLegs> yaw{};
  std::array<double, kNumLegs> offset{};
};

struct GaitConfig;  // defined in gaits.hpp

BlendState blend_init(const GaitConfig& gait);
// One filter step toward the target's parameters; alpha in (0, 1].
BlendState blend_gaits(const BlendState& current, const GaitConfig& target,
                       double alpha);
// Per-leg planes/offsets currently in effect under the blend.
GaitPlane blend_plane(const BlendState& state, int leg);

}  // namespace gaitforge
