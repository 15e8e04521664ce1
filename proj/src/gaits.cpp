#include "gaitforge/gaits.hpp"

namespace gaitforge {

std::string gait_to_string(GaitName name) {
  switch (name) {
    case GaitName::ForwardTrot: return "forward_trot";
    case GaitName::BackwardTrot: return "backward_trot";
    case GaitName::SideStep: return "side_step";
    case GaitName::Turn: return "turn";
  }
  return "?";
}

GaitName gait_from_string(const std::string& s) {
  if (s == "forward_trot") return GaitName::ForwardTrot;
  if (s == "backward_trot") return GaitName::BackwardTrot;
  if (s == "side_step") return GaitName::SideStep;
  if (s == "turn") return GaitName::Turn;
  throw UnknownGaitError("unknown gait '" + s + "'");
}

std::string reward_axis_to_string(RewardAxis axis) {
  switch (axis) {
    case RewardAxis::PlusX: return "+x";
    case RewardAxis::MinusX: return "-x";
    case RewardAxis::PlusZ: return "+z";
    case RewardAxis::PlusYaw: return "+yaw";
  }
  return "?";
}

RewardAxis reward_axis_from_string(const std::string& s) {
  if (s == "+x") return RewardAxis::PlusX;
  if (s == "-x") return RewardAxis::MinusX;
  if (s == "+z") return RewardAxis::PlusZ;
  if (s == "+yaw") return RewardAxis::PlusYaw;
  throw ConfigError("unknown reward axis '" + s + "'");
}

GaitLibrary GaitLibrary::defaults() {
  GaitLibrary lib;

  const std::array<double, kNumLegs> trot_offsets{0.0, M_PI, M_PI, 0.0};

  GaitConfig forward;
  forward.name = GaitName::ForwardTrot;
  forward.leg_planes.fill(GaitPlane::sagittal());
  forward.phase_offsets = trot_offsets;
  forward.reward_axis = RewardAxis::PlusX;
  lib.entries_[GaitName::ForwardTrot] = forward;

  GaitConfig backward = forward;
  backward.name = GaitName::BackwardTrot;
  backward.reward_axis = RewardAxis::MinusX;
  lib.entries_[GaitName::BackwardTrot] = backward;

  GaitConfig side;
  side.name = GaitName::SideStep;
  side.leg_planes.fill(GaitPlane::frontal());
  side.phase_offsets = trot_offsets;
  side.reward_axis = RewardAxis::PlusZ;
  lib.entries_[GaitName::SideStep] = side;

  // Front legs face inward, back legs outward: FL +45, FR -45, BL -45,
  // BR +45 degrees of plane yaw.
  GaitConfig turn;
  turn.name = GaitName::Turn;
  const double q = M_PI / 4.0;
  turn.leg_planes = {GaitPlane::yawed(q), GaitPlane::yawed(-q),
                     GaitPlane::yawed(-q), GaitPlane::yawed(q)};
  turn.phase_offsets = trot_offsets;
  turn.reward_axis = RewardAxis::PlusYaw;
  lib.entries_[GaitName::Turn] = turn;

  return lib;
}

GaitConfig GaitLibrary::get(GaitName name) const {
  const auto it = entries_.find(name);
  if (it == entries_.end())
    throw UnknownGaitError("gait not in library: " + gait_to_string(name));
  return it->second;
}

GaitConfig GaitLibrary::get(const std::string& name) const {
  return get(gait_from_string(name));
}

void GaitLibrary::set(GaitName name, const GaitConfig& config) {
  entries_[name] = config;
}

GaitConfig gait_config(GaitName name) {
  static const GaitLibrary lib = GaitLibrary::defaults();
  return lib.get(name);
}

GaitConfig gait_config(const std::string& name) {
  return gait_config(gait_from_string(name));
}

void MultiGaitSpec::validate() const {
  if (entries.empty())
    throw ConfigError("multi-gait spec needs at least one entry");
  for (const auto& [gait, weight] : entries) {
    (void)gait;
    if (!(weight > 0.0))
      throw ConfigError("multi-gait weights must be positive");
  }
}

double multi_gait_return(const MultiGaitSpec& spec, const EpisodeFn& episode,
                         uint64_t seed) {
  spec.validate();
  // Every agent sees the same episode seed, so identical entries score
  // identically and a single entry reduces to the plain return.
  double total = 0.0;
  for (const auto& [gait, weight] : spec.entries)
    total += weight * episode(gait, seed);
  return total;
}

}  // namespace gaitforge
