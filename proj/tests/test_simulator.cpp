#include <gtest/gtest.h>

#include <set>

#include "trustroute/simulator.hpp"

using namespace trustroute;

namespace {

ScenarioConfig fixture_config(Seconds duration = 30.0) {
  ScenarioConfig c;
  c.network.kind = NetworkSpec::Kind::Fixture;
  c.source = kFixtureSource;
  c.sink = kFixtureSink;
  c.duration = duration;
  return c;
}

ScenarioConfig line_config(BehaviorProfile middle, Seconds duration) {
  ScenarioConfig c;
  c.network.kind = NetworkSpec::Kind::Inline;
  c.network.inline_document = {{"radio_range", 10.0},
                               {"area_radius", 10.0},
                               {"nodes", {{{"id", 0}}, {{"id", 1}, {"x", 5.0}}, {{"id", 2}, {"x", 10.0}}}},
                               {"edges", {{0, 1}, {1, 2}}}};
  c.source = NodeId(0);
  c.sink = NodeId(2);
  c.duration = duration;
  c.behaviors.push_back({NodeId(1), 0.0, middle});
  return c;
}

ScenarioConfig random_config(std::uint64_t seed, Variant v) {
  ScenarioConfig c;
  c.network.require_path = true;
  c.source = NodeId(0);
  c.sink = NodeId(1);
  c.rng_seed = seed;
  c.variant = v;
  c.duration = 60.0;
  c.behaviors.push_back({std::nullopt, 0.2, behavior::SelectiveForwarder{0.8}});
  c.behaviors.push_back({std::nullopt, 0.1, behavior::MaliciousSpy{0.0}});
  return c;
}

void expect_conservation(const RunMetrics& m) {
  EXPECT_EQ(m.delivered + m.dropped + m.in_flight, m.generated);
  EXPECT_LE(m.no_route, m.dropped);
  EXPECT_LE(m.total_energy, m.initial_energy_total);
  for (const auto& [id, trace] : m.energy_trace) {
    for (std::size_t i = 1; i < trace.size(); ++i) EXPECT_LE(trace[i], trace[i - 1]) << "node " << id.value;
  }
}

}  // namespace

TEST(EventQueue, Ordering) {
  EventQueue q;
  auto ev = [](Seconds t, EventKind k, std::uint32_t n, std::uint64_t packet) {
    Event e;
    e.time = t;
    e.kind = k;
    e.node = NodeId(n);
    e.packet = packet;
    return e;
  };
  q.push(ev(1.0, EventKind::Forward, 3, 1));
  q.push(ev(1.0, EventKind::PacketGen, 9, 2));
  q.push(ev(0.5, EventKind::WatchdogVerdict, 1, 3));
  q.push(ev(1.0, EventKind::Forward, 2, 4));
  q.push(ev(1.0, EventKind::Forward, 2, 5));
  q.push(ev(1.0, EventKind::TrustUpdate, 9, 6));
  q.push(ev(1.0, EventKind::NodeDeath, 9, 7));
  std::vector<std::uint64_t> order;
  while (!q.empty()) order.push_back(q.pop().packet);
  EXPECT_EQ(order, (std::vector<std::uint64_t>{3, 7, 6, 2, 4, 5, 1}));
}

TEST(Watchdog, CountsAndOneHopRule) {
  Network net = figure2_fixture();
  const TrustParams p;
  auto& rec = watchdog_observe(net, NodeId(19), NodeId(9), ForwardDecision::Forward, p);
  EXPECT_EQ(rec.forwarded, 1u);
  EXPECT_EQ(rec.transmitted, 1u);
  auto& r2 = net.node(NodeId(9)).trust_table[NodeId(6)];
  r2.forwarded = 5;
  r2.transmitted = 9;
  watchdog_observe(net, NodeId(9), NodeId(6), ForwardDecision::Drop, p);
  EXPECT_EQ(r2.forwarded, 5u);
  EXPECT_EQ(r2.transmitted, 10u);
  EXPECT_THROW(watchdog_observe(net, NodeId(19), NodeId(6), ForwardDecision::Forward, p), std::invalid_argument);
}

TEST(Simulator, BenevolentFixtureDeliversEverything) {
  for (auto v : {Variant::NoTrust, Variant::DirectOnly, Variant::Combined}) {
    auto c = fixture_config(100.0);
    c.variant = v;
    const auto m = run(c);
    EXPECT_EQ(m.generated, 100u);
    EXPECT_DOUBLE_EQ(m.pdr, 1.0) << variant_name(v);
    expect_conservation(m);
  }
}

TEST(Simulator, BlackholeDecayOnLine) {
  Simulator sim(line_config(behavior::Blackhole{}, 10.0));
  const auto& rec = [&]() -> const TrustRecord& { return sim.network().node(NodeId(0)).trust_table.at(NodeId(1)); };
  for (auto [t, expected] : std::vector<std::pair<double, double>>{{1.0, 0.25}, {2.0, 0.125}, {3.0, 0.0625}}) {
    sim.run_until(t + 0.5);
    EXPECT_NEAR(rec().direct, expected, 1e-12) << "t=" << t;
  }
}

TEST(Simulator, FixtureAvoidsBlackholeN15) {
  auto c = fixture_config(40.0);
  c.behaviors.push_back({NodeId(15), 0.0, behavior::Blackhole{}});
  Simulator sim(c);
  sim.run_until(30.5);
  ASSERT_TRUE(sim.current_route());
  const auto& hops = sim.current_route()->hops;
  EXPECT_EQ(std::count(hops.begin(), hops.end(), NodeId(15)), 0);
  const auto m = sim.finish();
  EXPECT_GT(m.pdr, 0.8);
  expect_conservation(m);
}

TEST(Simulator, NoTrustUsesFewestHops) {
  auto c = fixture_config(5.0);
  c.variant = Variant::NoTrust;
  Simulator sim(c);
  sim.run_until(0.5);
  ASSERT_TRUE(sim.current_route());
  EXPECT_EQ(sim.current_route()->hop_count(), 3u);
  EXPECT_EQ(sim.finish().ledger.total(), 0u);
}

TEST(Simulator, CombinedPaysForExchange) {
  const auto m = run(fixture_config(10.0));
  EXPECT_GT(m.ledger.header_report, 0u);
  EXPECT_GT(m.ledger.reputation_request, 0u);
}

TEST(Simulator, Deterministic) {
  const auto c = random_config(5, Variant::Combined);
  const auto a = run(c), b = run(c);
  EXPECT_EQ(summary_json(a).dump(), summary_json(b).dump());
  EXPECT_EQ(intervals_csv(a), intervals_csv(b));
}

TEST(Simulator, ConservationAndEnergyAcrossVariants) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    for (auto v : {Variant::NoTrust, Variant::DirectOnly, Variant::Combined}) {
      auto c = random_config(seed, v);
      const auto m = run(c);
      expect_conservation(m);
      EXPECT_EQ(m.intervals.size(), m.generated);
    }
  }
}

TEST(Simulator, PerPacketModeConserves) {
  auto c = random_config(2, Variant::Combined);
  c.route_mode = RouteMode::PerPacket;
  expect_conservation(run(c));
}

TEST(Simulator, SpyForwardsBetterThanSelectiveForwarder) {
  Simulator spy(line_config(behavior::MaliciousSpy{0.0}, 50.0));
  Simulator sf(line_config(behavior::SelectiveForwarder{0.5}, 50.0));
  spy.run_until(50.0);
  sf.run_until(50.0);
  const auto dt = [](const Simulator& s) { return s.network().node(NodeId(0)).trust_table.at(NodeId(1)).direct; };
  EXPECT_GE(dt(spy), dt(sf));
  EXPECT_DOUBLE_EQ(dt(spy), 1.0);
}

TEST(Simulator, FailoverToDisjointRoute) {
  Simulator sim(fixture_config(30.0));
  sim.run_until(10.4);
  ASSERT_TRUE(sim.current_route());
  const Route before = *sim.current_route();
  for (std::size_t i = 1; i + 1 < before.hops.size(); ++i) sim.fail_node(before.hops[i], 10.5);
  const auto delivered = sim.metrics().delivered;
  sim.run_until(11.5);
  ASSERT_TRUE(sim.current_route());
  for (std::size_t i = 1; i + 1 < before.hops.size(); ++i) {
    const auto& hops = sim.current_route()->hops;
    EXPECT_EQ(std::count(hops.begin(), hops.end(), before.hops[i]), 0);
  }
  EXPECT_EQ(sim.metrics().delivered, delivered + 1);
  EXPECT_THROW(sim.fail_node(NodeId(3), 1.0), std::invalid_argument);
  EXPECT_THROW(sim.fail_node(NodeId(1000), 20.0), std::invalid_argument);
}

TEST(Simulator, ScriptedFailuresDoNotCountAsEnergyDeath) {
  auto c = fixture_config(20.0);
  c.failures.push_back({NodeId(15), 3.0});
  const auto m = run(c);
  EXPECT_FALSE(m.first_death_time);
  expect_conservation(m);
}

TEST(Simulator, RejectsUnreachableSink) {
  auto c = fixture_config(5.0);
  c.sink = NodeId(1234);
  EXPECT_THROW(Simulator{c}, ScenarioError);
  auto d = line_config(behavior::Benevolent{}, 5.0);
  d.failures.clear();
  Network net = build_network(d);
  net.node(NodeId(1)).failed = true;
  EXPECT_THROW(Simulator(d, net), std::invalid_argument);
}

TEST(HeaderRotation, RoundRobinUnderUniformDrain) {
  Network net(10.0, 10.0);
  for (std::uint32_t i = 0; i < 3; ++i) {
    NodeState n;
    n.id = NodeId(i);
    n.energy = 1.0;
    net.add_node(n);
  }
  ExchangeScheme s{SchemeKind::Header, NodeId(0), 1.0};
  std::vector<std::uint32_t> served;
  for (int round = 0; round < 9; ++round) {
    s = rotate_header(s, net, round);
    served.push_back(s.header.value);
    net.node(s.header).energy -= 0.01;  // the same duty cost every round
  }
  EXPECT_EQ(served, (std::vector<std::uint32_t>{0, 1, 2, 0, 1, 2, 0, 1, 2}));
}

TEST(HeaderRotation, ThreeNodeRunHandsOverEveryPeriod) {
  ScenarioConfig c;
  c.network.kind = NetworkSpec::Kind::Inline;
  c.network.inline_document = {{"radio_range", 10.0},
                               {"area_radius", 10.0},
                               {"nodes", {{{"id", 0}}, {{"id", 1}, {"x", 3.0}}, {{"id", 2}, {"x", 6.0}}}},
                               {"edges", {{0, 1}, {1, 2}, {0, 2}}}};
  c.source = NodeId(0);
  c.sink = NodeId(2);
  c.duration = 9.0;
  c.packet_interval = 100.0;
  c.packet_size = 1;
  c.exchange.rotation_period = 1.0;
  Simulator sim(c);
  std::vector<std::uint32_t> headers;
  for (int k = 0; k < 9; ++k) {
    sim.run_until(k + 0.5);
    headers.push_back(sim.exchange().scheme().header.value);
  }
  for (std::size_t k = 1; k < headers.size(); ++k) EXPECT_NE(headers[k], headers[k - 1]);
  EXPECT_EQ(std::set<std::uint32_t>(headers.begin(), headers.end()).size(), 3u);
}

TEST(Simulator, RotationDoesNotShortenLifetime) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    ScenarioConfig c = random_config(seed, Variant::Combined);
    c.network.node_count = 20;
    c.network.radio_range = 60.0;
    c.behaviors.clear();
    c.initial_energy = 0.05;
    c.control_packet_size = 2000;
    c.duration = 200.0;
    ScenarioConfig fixed = c, rotating = c;
    rotating.exchange.rotation_period = 5.0;
    const auto a = run(fixed), b = run(rotating);
    ASSERT_TRUE(a.first_death_time) << seed;
    const double rotating_death = b.first_death_time.value_or(c.duration);
    EXPECT_GE(rotating_death, *a.first_death_time) << seed;
  }
}
