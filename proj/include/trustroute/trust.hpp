#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "trustroute/types.hpp"

namespace trustroute {

struct TrustParams {
  double threshold_recommender = 0.9;  // minimum total trust to be asked for a recommendation
  double threshold_benevolent = 0.5;   // TTH: benevolent iff total > TTH
  double aging_past_weight = 0.5;      // present weight is 1 - this
  Seconds update_period = 1.0;
  double filter_deviation = 0.3;
  double filter_penalty = 0.05;
  double initial_trust = 0.5;

  /// Throws std::invalid_argument on out-of-range fields.
  void validate() const;
};

TrustParams trust_params_from_json(const nlohmann::json& j);
nlohmann::json to_json(const TrustParams& p);

/// One node's view of a neighbor. Counters are cumulative; the *_at_update
/// snapshots delimit the observation window consumed by the next periodic update.
struct TrustRecord {
  std::uint64_t forwarded = 0;
  std::uint64_t transmitted = 0;
  std::uint64_t forwarded_at_update = 0;
  std::uint64_t transmitted_at_update = 0;
  double direct = 0.5;
  double indirect = 0.0;
  double total = 0.5;
  Seconds last_update = 0.0;

  static TrustRecord fresh(const TrustParams& params);
  bool has_evidence() const { return transmitted > 0; }
};

struct Recommendation {
  NodeId recommender;
  double reported = 0.0;
  double weight = 1.0;
};

/// The three recommender groups of the indirect-trust formula (sizes N, M, P).
struct RecommendationSet {
  std::array<std::vector<Recommendation>, 3> groups;

  bool empty() const;
  std::size_t size() const;
};

struct FilterResult {
  std::vector<std::pair<NodeId, double>> kept;
  std::vector<NodeId> rejected;
};

enum class TrustClass { Benevolent, Selfish };

/// Forwarded / transmitted; initial_trust when nothing has been transmitted yet.
double direct_trust(const TrustRecord& rec, const TrustParams& params = {});

/// [ sqrt(mean1 * mean2) + mean3 ] / 2 over weighted reports, where each
/// mean is (1/|group|) * sum(reported * weight) and an empty group has mean 0.
double indirect_trust(const RecommendationSet& recs);

/// min(1, direct + indirect).
double total_trust(double direct, double indirect);

/// Convex blend of the previous value and the newly observed one.
double age_trust(double old_value, double observed, const TrustParams& params);

/// Median-deviation filter against bad-mouthing and false praise.
FilterResult filter_recommendations(std::span<const std::pair<NodeId, double>> reports,
                                    const TrustParams& params);

TrustClass classify(double total, const TrustParams& params);

/// Geometric mean of a set of trust metrics in [0,1]; 0 for an empty set.
double geometric_mean(std::span<const double> metrics);

/// Watchdog verdict: one more transmission, forwarded or not.
void record_observation(TrustRecord& rec, bool forwarded);

/// Periodic refresh of the direct component: if the record saw traffic since
/// the last update, direct <- age(direct, window forwarding ratio). Returns
/// true when the record changed.
bool periodic_update(TrustRecord& rec, Seconds now, const TrustParams& params);

}  // namespace trustroute
