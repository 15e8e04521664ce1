#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "gaitforge/trajectory.hpp"
#include "gaitforge/types.hpp"

namespace gaitforge {

enum class GaitName { ForwardTrot, BackwardTrot, SideStep, Turn };

// Base displacement component that earns reward for a gait.
enum class RewardAxis { PlusX, MinusX, PlusZ, PlusYaw };

struct GaitConfig {
  GaitName name = GaitName::ForwardTrot;
  std::array<GaitPlane, kNumLegs> leg_planes{};
  std::array<double, kNumLegs> phase_offsets{0.0, M_PI, M_PI, 0.0};
  RewardAxis reward_axis = RewardAxis::PlusX;
};

std::string gait_to_string(GaitName name);
GaitName gait_from_string(const std::string& s);  // throws UnknownGaitError

std::string reward_axis_to_string(RewardAxis axis);
RewardAxis reward_axis_from_string(const std::string& s);

class GaitLibrary {
 public:
  static GaitLibrary defaults();

  // Returns a value copy; throws UnknownGaitError for names not present.
  GaitConfig get(GaitName name) const;
  GaitConfig get(const std::string& name) const;
  void set(GaitName name, const GaitConfig& config);

 private:
  std::map<GaitName, GaitConfig> entries_;
};

GaitConfig gait_config(GaitName name);
GaitConfig gait_config(const std::string& name);

// Several gaits scored together with one shared policy.
struct MultiGaitSpec {
  std::vector<std::pair<GaitConfig, double>> entries;

  void validate() const;
};

// Episode return of one policy in one environment; defined in env.hpp's
// terms, kept as a function type so tests can stub environments.
using EpisodeFn = std::function<double(const GaitConfig& gait, uint64_t seed)>;

// Weighted sum of per-gait episode returns, evaluated in fixed entry order.
double multi_gait_return(const MultiGaitSpec& spec, const EpisodeFn& episode,
                         uint64_t seed);

}  // namespace gaitforge
