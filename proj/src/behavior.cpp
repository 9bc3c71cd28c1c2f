#include "trustroute/behavior.hpp"

#include <cmath>
#include <stdexcept>

namespace trustroute {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(what) + " must lie in [0,1]");
  }
}

double number_or(const nlohmann::json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number()) throw std::invalid_argument(std::string("behavior.") + key + " must be a number");
  return v.get<double>();
}

}  // namespace

void validate(const BehaviorProfile& profile) {
  std::visit(overloaded{
                 [](const behavior::Benevolent&) {},
                 [](const behavior::Blackhole&) {},
                 [](const behavior::SelectiveForwarder& b) { require_probability(b.drop_prob, "drop_prob"); },
                 [](const behavior::MaliciousSpy& b) { require_probability(b.lie_value, "lie_value"); },
                 [](const behavior::OnOff& b) {
                   require_probability(b.drop_prob, "drop_prob");
                   if (!(b.good_period > 0.0) || !(b.bad_period > 0.0)) {
                     throw std::invalid_argument("on_off periods must be > 0");
                   }
                 },
             },
             profile);
}

ForwardDecision decide_forward(const BehaviorProfile& profile, Seconds now, Rng& rng) {
  auto drop_with = [&rng](double p) {
    return rng.bernoulli(p) ? ForwardDecision::Drop : ForwardDecision::Forward;
  };
  return std::visit(
      overloaded{
          [](const behavior::Benevolent&) { return ForwardDecision::Forward; },
          [](const behavior::MaliciousSpy&) { return ForwardDecision::Forward; },
          [](const behavior::Blackhole&) { return ForwardDecision::Drop; },
          [&](const behavior::SelectiveForwarder& b) { return drop_with(b.drop_prob); },
          [&](const behavior::OnOff& b) {
            const double cycle = b.good_period + b.bad_period;
            const double phase = std::fmod(now, cycle);
            if (phase < b.good_period) return ForwardDecision::Forward;
            return drop_with(b.drop_prob);
          },
      },
      profile);
}

double decide_recommend(const BehaviorProfile& profile, double honest_value) {
  if (const auto* spy = std::get_if<behavior::MaliciousSpy>(&profile)) return spy->lie_value;
  return honest_value;
}

bool is_spy(const BehaviorProfile& profile) {
  return std::holds_alternative<behavior::MaliciousSpy>(profile);
}

std::string kind_name(const BehaviorProfile& profile) {
  return std::visit(overloaded{
                        [](const behavior::Benevolent&) { return std::string("benevolent"); },
                        [](const behavior::SelectiveForwarder&) { return std::string("selective_forwarder"); },
                        [](const behavior::Blackhole&) { return std::string("blackhole"); },
                        [](const behavior::MaliciousSpy&) { return std::string("malicious_spy"); },
                        [](const behavior::OnOff&) { return std::string("on_off"); },
                    },
                    profile);
}

BehaviorProfile behavior_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    throw std::invalid_argument("behavior requires a string 'kind'");
  }
  const auto kind = j.at("kind").get<std::string>();
  BehaviorProfile out;
  if (kind == "benevolent") {
    out = behavior::Benevolent{};
  } else if (kind == "blackhole") {
    out = behavior::Blackhole{};
  } else if (kind == "selective_forwarder") {
    out = behavior::SelectiveForwarder{number_or(j, "drop_prob", 0.5)};
  } else if (kind == "malicious_spy") {
    out = behavior::MaliciousSpy{number_or(j, "lie_value", 0.0)};
  } else if (kind == "on_off") {
    out = behavior::OnOff{number_or(j, "good_period", 10.0), number_or(j, "bad_period", 10.0),
                          number_or(j, "drop_prob", 1.0)};
  } else {
    throw std::invalid_argument("unknown behavior kind '" + kind + "'");
  }
  validate(out);
  return out;
}

nlohmann::json behavior_to_json(const BehaviorProfile& profile) {
  nlohmann::json j = {{"kind", kind_name(profile)}};
  std::visit(overloaded{
                 [](const behavior::Benevolent&) {},
                 [](const behavior::Blackhole&) {},
                 [&j](const behavior::SelectiveForwarder& b) { j["drop_prob"] = b.drop_prob; },
                 [&j](const behavior::MaliciousSpy& b) { j["lie_value"] = b.lie_value; },
                 [&j](const behavior::OnOff& b) {
                   j["good_period"] = b.good_period;
                   j["bad_period"] = b.bad_period;
                   j["drop_prob"] = b.drop_prob;
                 },
             },
             profile);
  return j;
}

}  // namespace trustroute
