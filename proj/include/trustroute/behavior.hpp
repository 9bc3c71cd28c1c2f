#pragma once

#include <string>
#include <variant>

#include <nlohmann/json.hpp>

#include "trustroute/types.hpp"

namespace trustroute {

namespace behavior {
struct Benevolent {};
struct SelectiveForwarder {
  double drop_prob = 0.0;
};
struct Blackhole {};
/// Forwards faithfully, lies when asked for recommendations.
struct MaliciousSpy {
  double lie_value = 0.0;
};
/// Benevolent for good_period, then drops with drop_prob for bad_period, repeating.
struct OnOff {
  Seconds good_period = 1.0;
  Seconds bad_period = 1.0;
  double drop_prob = 1.0;
};
}  // namespace behavior

using BehaviorProfile = std::variant<behavior::Benevolent, behavior::SelectiveForwarder,
                                     behavior::Blackhole, behavior::MaliciousSpy, behavior::OnOff>;

enum class ForwardDecision { Forward, Drop };

/// Throws std::invalid_argument when a probability or period is out of range.
void validate(const BehaviorProfile& profile);

/// Forwarding action of a node holding `profile` at time `now`. Only the
/// probabilistic profiles draw from `rng`.
ForwardDecision decide_forward(const BehaviorProfile& profile, Seconds now, Rng& rng);

/// Value a node reports when asked to recommend; spies substitute their lie.
double decide_recommend(const BehaviorProfile& profile, double honest_value);

bool is_spy(const BehaviorProfile& profile);

/// Stable lower-case name used in scenario files ("selective_forwarder", ...).
std::string kind_name(const BehaviorProfile& profile);

BehaviorProfile behavior_from_json(const nlohmann::json& j);
nlohmann::json behavior_to_json(const BehaviorProfile& profile);

}  // namespace trustroute
