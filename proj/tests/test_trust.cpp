#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "trustroute/trust.hpp"

using namespace trustroute;

namespace {

TrustRecord counts(std::uint64_t fwd, std::uint64_t tx) {
  TrustRecord r;
  r.forwarded = fwd;
  r.transmitted = tx;
  return r;
}

RecommendationSet unanimous(double v, std::size_t per_group = 2) {
  RecommendationSet s;
  for (auto& g : s.groups) {
    for (std::size_t i = 0; i < per_group; ++i) g.push_back({NodeId(static_cast<std::uint32_t>(i)), v, 1.0});
  }
  return s;
}

}  // namespace

TEST(DirectTrust, PriorWithoutTraffic) { EXPECT_DOUBLE_EQ(direct_trust(counts(0, 0)), 0.5); }

TEST(DirectTrust, Ratio) {
  EXPECT_DOUBLE_EQ(direct_trust(counts(10, 10)), 1.0);
  EXPECT_DOUBLE_EQ(direct_trust(counts(8, 10)), 0.8);
  EXPECT_DOUBLE_EQ(direct_trust(counts(0, 3)), 0.0);
}

TEST(DirectTrust, CustomPrior) {
  TrustParams p;
  p.initial_trust = 0.3;
  EXPECT_DOUBLE_EQ(direct_trust(counts(0, 0), p), 0.3);
}

TEST(DirectTrust, ScaleInvariant) {
  for (std::uint64_t f = 0; f <= 7; ++f) {
    for (std::uint64_t k : {2u, 3u, 17u}) EXPECT_DOUBLE_EQ(direct_trust(counts(f, 7)), direct_trust(counts(f * k, 7 * k)));
  }
}

TEST(IndirectTrust, EmptyIsZero) { EXPECT_EQ(indirect_trust(RecommendationSet{}), 0.0); }

TEST(IndirectTrust, UnanimousIsIdentity) {
  for (double v : {0.0, 0.25, 0.5, 0.75, 1.0}) EXPECT_NEAR(indirect_trust(unanimous(v)), v, 1e-12);
}

TEST(IndirectTrust, WorkedExample) {
  RecommendationSet s;
  s.groups[0] = {{NodeId(1), 0.8, 1.0}, {NodeId(2), 0.6, 1.0}};
  s.groups[1] = {{NodeId(3), 0.9, 0.5}};
  s.groups[2] = {{NodeId(4), 1.0, 1.0}};
  // Value computed independently: (sqrt(0.7 * 0.45) + 1) / 2
  EXPECT_NEAR(indirect_trust(s), 0.7806243040080456, 1e-12);
}

TEST(IndirectTrust, EmptyGroupContributesZero) {
  RecommendationSet s;
  s.groups[0] = {{NodeId(1), 0.9, 1.0}};
  s.groups[2] = {{NodeId(2), 0.6, 1.0}};
  EXPECT_NEAR(indirect_trust(s), 0.3, 1e-12);
}

TEST(IndirectTrust, MonotoneInReports) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    RecommendationSet s;
    for (auto& g : s.groups) {
      const int n = 1 + static_cast<int>(gen() % 3);
      for (int i = 0; i < n; ++i) g.push_back({NodeId(i), u(gen), u(gen)});
    }
    const double before = indirect_trust(s);
    auto raised = s;
    auto& r = raised.groups[gen() % 3].front();
    r.reported = std::min(1.0, r.reported + u(gen) * 0.5);
    EXPECT_GE(indirect_trust(raised), before - 1e-15);
    EXPECT_GE(before, 0.0);
    EXPECT_LE(before, 1.0);
  }
}

TEST(TotalTrust, AdditiveWithClamp) {
  EXPECT_DOUBLE_EQ(total_trust(0.5, 0.0), 0.5);
  EXPECT_DOUBLE_EQ(total_trust(0.8, 0.6), 1.0);
  EXPECT_DOUBLE_EQ(total_trust(0.0, 0.0), 0.0);
}

TEST(AgeTrust, Examples) {
  TrustParams p;
  EXPECT_DOUBLE_EQ(age_trust(1.0, 1.0, p), 1.0);
  EXPECT_DOUBLE_EQ(age_trust(1.0, 0.0, p), 0.5);
  double v = 1.0;
  for (double expected : {0.5, 0.25, 0.125}) {
    v = age_trust(v, 0.0, p);
    EXPECT_DOUBLE_EQ(v, expected);
  }
}

TEST(AgeTrust, ConvexCombination) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    TrustParams p;
    p.aging_past_weight = u(gen);
    const double a = u(gen), b = u(gen);
    const double r = age_trust(a, b, p);
    EXPECT_GE(r, std::min(a, b) - 1e-15);
    EXPECT_LE(r, std::max(a, b) + 1e-15);
  }
}

TEST(Filter, RejectsOutlier) {
  const std::vector<std::pair<NodeId, double>> reports{{NodeId(1), 0.8}, {NodeId(2), 0.82}, {NodeId(3), 0.1}};
  const auto r = filter_recommendations(reports, TrustParams{});
  ASSERT_EQ(r.kept.size(), 2u);
  EXPECT_EQ(r.kept[0].first, NodeId(1));
  EXPECT_EQ(r.kept[1].first, NodeId(2));
  ASSERT_EQ(r.rejected.size(), 1u);
  EXPECT_EQ(r.rejected[0], NodeId(3));
}

TEST(Filter, EqualAndSingleReportsKept) {
  const std::vector<std::pair<NodeId, double>> same{{NodeId(1), 0.4}, {NodeId(2), 0.4}, {NodeId(3), 0.4}};
  EXPECT_EQ(filter_recommendations(same, TrustParams{}).kept.size(), 3u);
  const std::vector<std::pair<NodeId, double>> one{{NodeId(9), 0.0}};
  EXPECT_EQ(filter_recommendations(one, TrustParams{}).kept.size(), 1u);
  EXPECT_TRUE(filter_recommendations({}, TrustParams{}).kept.empty());
}

TEST(Filter, PartitionsInput) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::pair<NodeId, double>> reports;
    const int n = 1 + static_cast<int>(gen() % 9);
    for (int i = 0; i < n; ++i) reports.emplace_back(NodeId(i), u(gen));
    const auto r = filter_recommendations(reports, TrustParams{});
    EXPECT_EQ(r.kept.size() + r.rejected.size(), reports.size());
    std::set<NodeId> seen;
    for (auto& k : r.kept) seen.insert(k.first);
    for (auto id : r.rejected) seen.insert(id);
    EXPECT_EQ(seen.size(), reports.size());
  }
}

TEST(Filter, MinoritySpiesKeepBenevolentSubjectClose) {
  TrustParams p;
  std::mt19937_64 gen(17);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 3 + static_cast<int>(gen() % 8);
    const int spies = static_cast<int>(gen() % ((n - 1) / 2 + 1));  // strictly under half
    ASSERT_LT(2 * spies, n);
    const double honest = 0.9;
    std::vector<std::pair<NodeId, double>> reports;
    for (int i = 0; i < n; ++i) reports.emplace_back(NodeId(i), i < spies ? 0.0 : honest);
    const auto r = filter_recommendations(reports, p);
    RecommendationSet s;
    for (auto& [id, v] : r.kept) {
      for (auto& g : s.groups) g.push_back({id, v, 1.0});
    }
    EXPECT_LT(std::abs(indirect_trust(s) - honest), p.filter_deviation);
  }
}

TEST(Classify, StrictThreshold) {
  TrustParams p;
  EXPECT_EQ(classify(0.9, p), TrustClass::Benevolent);
  EXPECT_EQ(classify(0.5, p), TrustClass::Selfish);
  EXPECT_EQ(classify(0.0, p), TrustClass::Selfish);
}

TEST(GeometricMean, Basics) {
  EXPECT_EQ(geometric_mean({}), 0.0);
  const double one[] = {0.37};
  EXPECT_EQ(geometric_mean(one), 0.37);
  const double two[] = {0.25, 1.0};
  EXPECT_NEAR(geometric_mean(two), 0.5, 1e-15);
  const double zero[] = {0.9, 0.0, 0.8};
  EXPECT_EQ(geometric_mean(zero), 0.0);
}

TEST(PeriodicUpdate, BlackholeDecay) {
  TrustParams p;
  TrustRecord r = TrustRecord::fresh(p);
  for (double expected : {0.25, 0.125, 0.0625}) {
    record_observation(r, false);
    EXPECT_TRUE(periodic_update(r, 0.0, p));
    EXPECT_NEAR(r.direct, expected, 1e-12);
  }
}

TEST(PeriodicUpdate, QuietWindowLeavesValue) {
  TrustParams p;
  TrustRecord r = TrustRecord::fresh(p);
  record_observation(r, true);
  record_observation(r, false);
  ASSERT_TRUE(periodic_update(r, 1.0, p));
  EXPECT_DOUBLE_EQ(r.direct, 0.5);  // 0.5*0.5 + 0.5*0.5
  EXPECT_FALSE(periodic_update(r, 2.0, p));
  EXPECT_DOUBLE_EQ(r.direct, 0.5);
  EXPECT_DOUBLE_EQ(r.last_update, 2.0);
}

TEST(TrustOutputs, StayInUnitInterval) {
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  TrustParams p;
  for (int i = 0; i < 2000; ++i) {
    TrustRecord r = TrustRecord::fresh(p);
    const int n = static_cast<int>(gen() % 20);
    for (int k = 0; k < n; ++k) {
      record_observation(r, u(gen) < 0.5);
      if (gen() % 3 == 0) periodic_update(r, k, p);
    }
    RecommendationSet s;
    for (auto& g : s.groups) {
      if (gen() % 2) g.push_back({NodeId(1), u(gen), u(gen)});
    }
    const double d = direct_trust(r, p), it = indirect_trust(s), t = total_trust(r.direct, it);
    for (double v : {d, r.direct, it, t}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

TEST(TrustParams, ValidationAndJson) {
  TrustParams p;
  EXPECT_NO_THROW(p.validate());
  p.aging_past_weight = 1.5;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = TrustParams{};
  p.update_period = 0.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);

  TrustParams q;
  q.filter_deviation = 0.2;
  const auto back = trust_params_from_json(to_json(q));
  EXPECT_DOUBLE_EQ(back.filter_deviation, 0.2);
  EXPECT_THROW(trust_params_from_json(nlohmann::json{{"threshold_benevolent", "high"}}), std::invalid_argument);
}
