#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <vector>

#include "trustroute/exchange.hpp"
#include "trustroute/metrics.hpp"
#include "trustroute/routing.hpp"
#include "trustroute/scenario.hpp"

namespace trustroute {

/// Same-time events run in this order, then by node id, then FIFO.
enum class EventKind : std::uint8_t {
  NodeDeath = 0,
  HeaderRotation = 1,
  TrustUpdate = 2,
  PacketGen = 3,
  Forward = 4,
  WatchdogVerdict = 5,
};

struct Event {
  Seconds time = 0.0;
  EventKind kind = EventKind::PacketGen;
  NodeId node;
  std::uint64_t seq = 0;
  std::uint64_t packet = 0;
  std::size_t hop_index = 0;
  NodeId upstream;
  ForwardDecision outcome = ForwardDecision::Forward;
  bool scripted = false;  // NodeDeath caused by an injected failure
};

struct EventOrder {
  bool operator()(const Event& a, const Event& b) const;  // "a runs after b"
};

/// Time-ordered event queue with deterministic tie-breaking.
class EventQueue {
 public:
  void push(Event e);
  Event pop();
  const Event& top() const { return heap_.top(); }
  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }

 private:
  std::priority_queue<Event, std::vector<Event>, EventOrder> heap_;
  std::uint64_t next_seq_ = 0;
};

/// Watchdog verdict from `upstream` about its neighbor `watched`. Throws
/// std::invalid_argument when the two are not one-hop neighbors.
TrustRecord& watchdog_observe(Network& net, NodeId upstream, NodeId watched, ForwardDecision outcome,
                              const TrustParams& params);

/// One single-threaded, deterministic simulation run.
class Simulator {
 public:
  explicit Simulator(const ScenarioConfig& config);
  Simulator(const ScenarioConfig& config, Network network);

  /// Processes every event with time <= t.
  void run_until(Seconds t);
  /// Runs to the configured duration and aggregates the metrics.
  RunMetrics finish();

  /// Injects a failure of `node` at time `at` (>= now).
  void fail_node(NodeId node, Seconds at);

  Seconds now() const { return now_; }
  const Network& network() const { return net_; }
  const ScenarioConfig& config() const { return config_; }
  const std::optional<Route>& current_route() const { return route_; }
  const ReputationExchange& exchange() const { return exchange_; }
  const RunMetrics& metrics() const { return metrics_; }

  /// The source's trust in every other node under the configured variant.
  TrustMap trust_view() const;

 private:
  struct Packet {
    Route route;
  };

  void schedule(Event e);
  void dispatch(const Event& e);
  void on_packet_gen(const Event& e);
  void on_forward(const Event& e);
  void on_verdict(const Event& e);
  void on_trust_update(const Event& e);
  void on_header_rotation(const Event& e);
  void on_node_death(const Event& e);

  std::optional<Route> select_route();
  void refresh_indirect();
  void invalidate_route_if(const Route& used);
  void ensure_header();
  void consume(NodeId id, double joules);
  void transmit(NodeId from, NodeId to, std::uint64_t bits);
  void sample(Seconds t);

  ScenarioConfig config_;
  Network net_;
  ReputationExchange exchange_;
  EventQueue queue_;
  Seconds now_ = 0.0;
  bool finished_ = false;

  std::map<NodeId, Rng> rngs_;
  std::map<NodeId, double> initial_energy_;
  std::map<std::uint64_t, Packet> packets_;
  std::uint64_t next_packet_ = 0;
  std::optional<Route> route_;
  bool route_valid_ = false;
  // Source's indirect trust for nodes it has no trust record for (Combined only).
  std::map<NodeId, double> remote_indirect_;

  RunMetrics metrics_;
};

/// Builds the network from the config and runs it to completion.
RunMetrics run(const ScenarioConfig& config);

}  // namespace trustroute
