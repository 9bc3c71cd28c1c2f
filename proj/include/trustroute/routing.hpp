#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include <nlohmann/json.hpp>

#include "trustroute/topology.hpp"

namespace trustroute {

struct Route {
  std::vector<NodeId> hops;  // source first, sink last, no repeats
  double path_trust = 0.0;

  std::size_t hop_count() const { return hops.empty() ? 0 : hops.size() - 1; }
  friend bool operator==(const Route&, const Route&) = default;
};

using TrustMap = std::map<NodeId, double>;

struct EnumerateOptions {
  /// Maximum number of hops (edges) per route; 0 means the node count.
  std::size_t hop_limit = 0;
  std::set<NodeId> excluded;
};

/// Every simple source->sink path over live nodes, found by depth-first
/// search with ascending neighbor order (so output is lexicographic).
/// No shortest-path pruning is applied.
std::vector<Route> enumerate_routes(const Network& net, NodeId source, NodeId sink,
                                    const EnumerateOptions& options = {});

/// Product of the trust of the intermediate hops, left to right; 1 when the
/// route has no intermediates. Throws std::out_of_range naming a hop with
/// no trust value.
double path_trust(const Route& route, const TrustMap& trust_of);

/// Strict preference used by route selection: higher path trust, then fewer
/// hops, then the lexicographically smaller hop sequence.
bool more_trusted(const Route& a, const Route& b);

/// Sorts by more_trusted (the RouteTable order).
void sort_route_table(std::vector<Route>& routes);

struct SelectOptions {
  /// Best path trust must exceed this for a route to be returned.
  double floor = 0.0;
};

/// Most trusted route, or nullopt (NoTrustedRoute) when the list is empty
/// or the best path trust does not exceed the floor.
std::optional<Route> smtr_select(const std::vector<Route>& routes, const SelectOptions& options = {});

/// enumerate -> path_trust -> smtr_select with `excluded` removed from the graph.
std::optional<Route> reselect_excluding(const Network& net, NodeId source, NodeId sink,
                                        const std::set<NodeId>& excluded, const TrustMap& trust_of,
                                        const SelectOptions& options = {}, std::size_t hop_limit = 0);

/// Same result as reselect_excluding, computed by a branch-and-bound DFS
/// that never materializes the full route list. Used by the simulator on
/// graphs where the number of simple paths is large.
std::optional<Route> smtr_search(const Network& net, NodeId source, NodeId sink,
                                 const std::set<NodeId>& excluded, const TrustMap& trust_of,
                                 const SelectOptions& options = {}, std::size_t hop_limit = 0);

/// [{hops:[ids], pt:real}, ...]
nlohmann::json routes_to_json(const std::vector<Route>& routes);

}  // namespace trustroute
