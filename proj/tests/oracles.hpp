#pragma once

// Test-only reference implementations, written independently of src/.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "trustroute/topology.hpp"

namespace trustroute::oracle {

struct OracleRoute {
  std::vector<NodeId> hops;
  double pt = 0.0;
};

// Breadth-first frontier expansion of partial paths (no recursion, no DFS order).
inline std::vector<std::vector<NodeId>> all_simple_paths(const Network& net, NodeId source, NodeId sink) {
  std::vector<std::vector<NodeId>> done;
  std::vector<std::vector<NodeId>> frontier{{source}};
  while (!frontier.empty()) {
    std::vector<std::vector<NodeId>> next;
    for (const auto& p : frontier) {
      for (const auto& candidate : net.nodes()) {
        const NodeId v = candidate.id;
        if (!net.has_edge(p.back(), v) || !candidate.alive()) continue;
        if (std::find(p.begin(), p.end(), v) != p.end()) continue;
        auto q = p;
        q.push_back(v);
        if (v == sink) {
          done.push_back(std::move(q));
        } else {
          next.push_back(std::move(q));
        }
      }
    }
    frontier = std::move(next);
  }
  return done;
}

inline double product_of_intermediates(const std::vector<NodeId>& hops, const std::map<NodeId, double>& trust) {
  double pt = 1.0;
  for (std::size_t i = 1; i + 1 < hops.size(); ++i) pt *= trust.at(hops[i]);
  return pt;
}

// Max path trust; ties: fewer hops, then lexicographically smaller sequence.
inline std::optional<OracleRoute> best_route(const Network& net, NodeId source, NodeId sink,
                                             const std::map<NodeId, double>& trust, double floor = 0.0) {
  std::optional<OracleRoute> best;
  for (auto& hops : all_simple_paths(net, source, sink)) {
    OracleRoute r{hops, product_of_intermediates(hops, trust)};
    bool better = !best;
    if (best) {
      if (r.pt > best->pt) {
        better = true;
      } else if (r.pt == best->pt) {
        if (r.hops.size() < best->hops.size()) {
          better = true;
        } else if (r.hops.size() == best->hops.size() &&
                   std::lexicographical_compare(r.hops.begin(), r.hops.end(), best->hops.begin(), best->hops.end())) {
          better = true;
        }
      }
    }
    if (better) best = r;
  }
  if (best && !(best->pt > floor)) return std::nullopt;
  return best;
}

}  // namespace trustroute::oracle
