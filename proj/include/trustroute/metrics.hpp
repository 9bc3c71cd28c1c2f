#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "trustroute/exchange.hpp"
#include "trustroute/routing.hpp"

namespace trustroute {

struct NodeMetrics {
  double energy_used = 0.0;
  double final_total_trust = 0.0;  // as seen by the source
};

/// One row per packet interval, taken right after the packet was routed.
struct IntervalSample {
  Seconds time = 0.0;
  double pdr = 0.0;           // delivered / generated so far
  double total_energy = 0.0;  // joules consumed so far
  std::size_t live_nodes = 0;
  std::optional<double> chosen_route_pt;
};

struct RouteChange {
  Seconds time = 0.0;
  Route route;
};

struct RunMetrics {
  std::uint64_t generated = 0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped = 0;
  std::uint64_t in_flight = 0;
  std::uint64_t no_route = 0;  // subset of dropped: no trusted route existed
  double pdr = 0.0;
  double total_energy = 0.0;
  double initial_energy_total = 0.0;
  std::optional<Seconds> first_death_time;
  std::map<NodeId, NodeMetrics> per_node;
  std::vector<RouteChange> route_history;
  std::vector<IntervalSample> intervals;
  MessageLedger ledger;
  /// Residual energy of every node at each interval sample (not serialized).
  std::map<NodeId, std::vector<double>> energy_trace;
};

nlohmann::json summary_json(const RunMetrics& m);

/// time,pdr,total_energy,live_nodes,chosen_route_pt
std::string intervals_csv(const RunMetrics& m);

/// Shortest round-trippable rendering, so CSV output is stable byte-for-byte.
std::string format_number(double v);

}  // namespace trustroute
