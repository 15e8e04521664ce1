#include "gaitforge/trajectory.hpp"

#include <cmath>

#include "gaitforge/gaits.hpp"

namespace gaitforge {

ControlPointSet::ControlPointSet(Eigen::VectorXd radii, RadiusBounds bounds)
    : radii_(std::move(radii)), bounds_(bounds) {
  const int n = static_cast<int>(radii_.size());
  if (n < kMinControlPoints || n > kMaxControlPoints)
    throw InvalidControlPoints("control point count " + std::to_string(n) +
                               " outside [" +
                               std::to_string(kMinControlPoints) + ", " +
                               std::to_string(kMaxControlPoints) + "]");
  if (!radii_.allFinite())
    throw InvalidControlPoints("non-finite control point radius");
  for (int i = 0; i < n; ++i) {
    if (radii_[i] < bounds_.w_min || radii_[i] > bounds_.w_max)
      throw InvalidControlPoints(
          "radius " + std::to_string(radii_[i]) + " at index " +
          std::to_string(i) + " outside [" + std::to_string(bounds_.w_min) +
          ", " + std::to_string(bounds_.w_max) + "]");
  }
  phases_.resize(n);
  for (int i = 0; i < n; ++i) phases_[i] = 2.0 * M_PI * i / n;
}

FootTrajectory::FootTrajectory(ControlPointSet knots)
    : knots_(std::move(knots)) {
  const int n = knots_.count();
  const double spacing = knots_.spacing();
  tangents_.resize(n);
  for (int i = 0; i < n; ++i) {
    const int next = (i + 1) % n;
    const int prev = (i + n - 1) % n;
    tangents_[i] =
        (knots_.radius(next) - knots_.radius(prev)) / (2.0 * spacing);
  }
}

FootTrajectory build_trajectory(const ControlPointSet& points) {
  return FootTrajectory(points);
}

namespace {

struct SegmentPos {
  int seg;
  double t;  // local parameter in [0, 1)
};

SegmentPos locate(const ControlPointSet& knots, double phi) {
  const double w = wrap_two_pi(phi);
  const double spacing = knots.spacing();
  int seg = static_cast<int>(std::floor(w / spacing));
  seg = std::clamp(seg, 0, knots.count() - 1);
  double t = (w - spacing * seg) / spacing;
  t = std::clamp(t, 0.0, 1.0);
  return {seg, t};
}

}  // namespace

double FootTrajectory::evaluate(double phi) const {
  const double w = wrap_two_pi(phi);
  const auto [seg, t] = locate(knots_, w);
  const int n = knots_.count();
  const int next = (seg + 1) % n;

  // Knot phases return the stored radius bit-exactly; the segment index
  // may round to either side of the knot.
  if (w == knots_.phase(seg)) return knots_.radius(seg);
  if (w == knots_.phase(next)) return knots_.radius(next);
  const double dx = knots_.spacing();
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
  const double h01 = -2.0 * t3 + 3.0 * t2;
  const double h10 = t3 - 2.0 * t2 + t;
  const double h11 = t3 - t2;
  return h00 * knots_.radius(seg) + h01 * knots_.radius(next) +
         h10 * tangents_[seg] * dx + h11 * tangents_[next] * dx;
}

double FootTrajectory::derivative(double phi) const {
  const double w = wrap_two_pi(phi);
  const auto [seg, t] = locate(knots_, w);
  const int n = knots_.count();
  const int next = (seg + 1) % n;

  if (w == knots_.phase(seg)) return tangents_[seg];
  if (w == knots_.phase(next)) return tangents_[next];

  const double dx = knots_.spacing();
  const double t2 = t * t;
  const double dh00 = 6.0 * t2 - 6.0 * t;
  const double dh01 = -6.0 * t2 + 6.0 * t;
  const double dh10 = 3.0 * t2 - 4.0 * t + 1.0;
  const double dh11 = 3.0 * t2 - 2.0 * t;
  // d/dphi = (d/dt) / dx
  return (dh00 * knots_.radius(seg) + dh01 * knots_.radius(next)) / dx +
         dh10 * tangents_[seg] + dh11 * tangents_[next];
}

Vec3 GaitPlane::embed(double s, double v) const {
  switch (axes) {
    case PlaneAxes::Sagittal:
      return Vec3{s, v, 0.0};
    case PlaneAxes::Frontal:
      return Vec3{0.0, v, s};
    case PlaneAxes::YawedSagittal:
      break;
  }
  const double c = std::cos(yaw);
  const double si = std::sin(yaw);
  return Vec3{s * c, v, -s * si};
}

FootPoint foot_target(const FootTrajectory& traj, const PhaseState& phase,
                      double offset, const GaitPlane& plane,
                      const WorkspaceBox& box, ClampCounter* clamps) {
  const double phi = wrap_two_pi(phase.phi + offset);
  const double w = traj.evaluate(phi);
  const double s = w * std::sin(phi);
  const double v = -w * std::cos(phi);
  const Vec3 raw = plane.embed(s, v);
  const Vec3 clamped = box.clamp(raw);
  if (clamps != nullptr && clamped != raw) ++clamps->events;
  return FootPoint{clamped};
}

std::pair<PhaseState, bool> advance_phase(const PhaseState& phase, double dt) {
  const double dphi = M_PI * dt / phase.step_duration;
  const double pre = phase.phi;
  const double post = pre + dphi;
  // Landing exactly on a multiple of pi counts as a crossing.
  const bool boundary = std::floor(post / M_PI) > std::floor(pre / M_PI);
  PhaseState out = phase;
  out.phi = wrap_two_pi(post);
  return {out, boundary};
}

BlendState blend_init(const GaitConfig& gait) {
  BlendState s;
  for (int leg = 0; leg < kNumLegs; ++leg) {
    s.yaw[leg] = gait.leg_planes[leg].yaw;
    s.offset[leg] = gait.phase_offsets[leg];
  }
  return s;
}

BlendState blend_gaits(const BlendState& current, const GaitConfig& target,
                       double alpha) {
  BlendState out = current;
  for (int leg = 0; leg < kNumLegs; ++leg) {
    out.yaw[leg] += alpha * (target.leg_planes[leg].yaw - out.yaw[leg]);
    out.offset[leg] += alpha * (target.phase_offsets[leg] - out.offset[leg]);
  }
  return out;
}

GaitPlane blend_plane(const BlendState& state, int leg) {
  return GaitPlane::yawed(state.yaw[leg]);
}

}  // namespace gaitforge
