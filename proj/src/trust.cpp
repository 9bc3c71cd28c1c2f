#include "trustroute/trust.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace trustroute {

namespace {

bool in_unit(double v) { return v >= 0.0 && v <= 1.0; }

double clamp_unit(double v) { return std::clamp(v, 0.0, 1.0); }

double group_mean(const std::vector<Recommendation>& group) {
  if (group.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& r : group) sum += r.reported * r.weight;
  return sum / static_cast<double>(group.size());
}

}  // namespace

void TrustParams::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("trust.") + what + " out of range");
  };
  require(in_unit(threshold_recommender), "threshold_recommender");
  require(in_unit(threshold_benevolent), "threshold_benevolent");
  require(in_unit(aging_past_weight), "aging_past_weight");
  require(update_period > 0.0, "update_period");
  require(filter_deviation >= 0.0, "filter_deviation");
  require(in_unit(filter_penalty), "filter_penalty");
  require(in_unit(initial_trust), "initial_trust");
}

TrustParams trust_params_from_json(const nlohmann::json& j) {
  TrustParams p;
  if (!j.is_object()) throw std::invalid_argument("trust must be an object");
  auto read = [&j](const char* key, double& field) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_number()) throw std::invalid_argument(std::string("trust.") + key + " must be a number");
    field = j.at(key).get<double>();
  };
  read("threshold_recommender", p.threshold_recommender);
  read("threshold_benevolent", p.threshold_benevolent);
  read("aging_past_weight", p.aging_past_weight);
  read("update_period", p.update_period);
  read("filter_deviation", p.filter_deviation);
  read("filter_penalty", p.filter_penalty);
  read("initial_trust", p.initial_trust);
  p.validate();
  return p;
}

nlohmann::json to_json(const TrustParams& p) {
  return {{"threshold_recommender", p.threshold_recommender},
          {"threshold_benevolent", p.threshold_benevolent},
          {"aging_past_weight", p.aging_past_weight},
          {"update_period", p.update_period},
          {"filter_deviation", p.filter_deviation},
          {"filter_penalty", p.filter_penalty},
          {"initial_trust", p.initial_trust}};
}

TrustRecord TrustRecord::fresh(const TrustParams& params) {
  TrustRecord r;
  r.direct = params.initial_trust;
  r.indirect = 0.0;
  r.total = total_trust(r.direct, r.indirect);
  return r;
}

bool RecommendationSet::empty() const {
  return std::all_of(groups.begin(), groups.end(), [](const auto& g) { return g.empty(); });
}

std::size_t RecommendationSet::size() const {
  return groups[0].size() + groups[1].size() + groups[2].size();
}

double direct_trust(const TrustRecord& rec, const TrustParams& params) {
  if (rec.transmitted == 0) return params.initial_trust;
  return static_cast<double>(rec.forwarded) / static_cast<double>(rec.transmitted);
}

double indirect_trust(const RecommendationSet& recs) {
  if (recs.empty()) return 0.0;
  const double first = group_mean(recs.groups[0]);
  const double second = group_mean(recs.groups[1]);
  const double third = group_mean(recs.groups[2]);
  return clamp_unit((std::sqrt(first * second) + third) / 2.0);
}

double total_trust(double direct, double indirect) { return std::min(1.0, direct + indirect); }

double age_trust(double old_value, double observed, const TrustParams& params) {
  const double w = params.aging_past_weight;
  return w * old_value + (1.0 - w) * observed;
}

FilterResult filter_recommendations(std::span<const std::pair<NodeId, double>> reports,
                                    const TrustParams& params) {
  FilterResult out;
  if (reports.empty()) return out;

  std::vector<double> values;
  values.reserve(reports.size());
  for (const auto& r : reports) values.push_back(r.second);
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  const double median = (n % 2 == 1) ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);

  for (const auto& r : reports) {
    if (std::abs(r.second - median) > params.filter_deviation) {
      out.rejected.push_back(r.first);
    } else {
      out.kept.push_back(r);
    }
  }
  return out;
}

TrustClass classify(double total, const TrustParams& params) {
  return total > params.threshold_benevolent ? TrustClass::Benevolent : TrustClass::Selfish;
}

double geometric_mean(std::span<const double> metrics) {
  if (metrics.empty()) return 0.0;
  if (metrics.size() == 1) return clamp_unit(metrics.front());
  double log_sum = 0.0;
  for (double m : metrics) {
    if (m <= 0.0) return 0.0;
    log_sum += std::log(m);
  }
  return clamp_unit(std::exp(log_sum / static_cast<double>(metrics.size())));
}

void record_observation(TrustRecord& rec, bool forwarded) {
  ++rec.transmitted;
  if (forwarded) ++rec.forwarded;
}

bool periodic_update(TrustRecord& rec, Seconds now, const TrustParams& params) {
  rec.last_update = now;
  const std::uint64_t window_tx = rec.transmitted - rec.transmitted_at_update;
  if (window_tx == 0) return false;
  const std::uint64_t window_fwd = rec.forwarded - rec.forwarded_at_update;
  const double observed = static_cast<double>(window_fwd) / static_cast<double>(window_tx);
  rec.direct = clamp_unit(age_trust(rec.direct, observed, params));
  rec.forwarded_at_update = rec.forwarded;
  rec.transmitted_at_update = rec.transmitted;
  rec.total = total_trust(rec.direct, rec.indirect);
  return true;
}

}  // namespace trustroute
