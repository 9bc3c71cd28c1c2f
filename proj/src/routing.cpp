#include "trustroute/routing.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>

namespace trustroute {

namespace {

std::size_t effective_limit(const Network& net, std::size_t hop_limit) {
  return hop_limit == 0 ? net.size() : hop_limit;
}

bool usable(const Network& net, NodeId id, const std::set<NodeId>& excluded) {
  return net.alive(id) && excluded.count(id) == 0;
}

void check_endpoints(const Network& net, NodeId source, NodeId sink) {
  if (source == sink) throw std::invalid_argument("source and sink must differ");
  (void)net.node(source);
  (void)net.node(sink);
}

struct Enumerator {
  const Network& net;
  NodeId sink;
  const std::set<NodeId>& excluded;
  std::size_t limit;
  std::vector<NodeId> path;
  std::set<NodeId> on_path;
  std::vector<Route> out;

  void visit(NodeId u) {
    if (u == sink) {
      out.push_back(Route{path, 0.0});
      return;
    }
    if (path.size() - 1 >= limit) return;
    for (NodeId v : net.neighbors(u, Liveness::LiveOnly)) {
      if (on_path.count(v) || excluded.count(v)) continue;
      path.push_back(v);
      on_path.insert(v);
      visit(v);
      on_path.erase(v);
      path.pop_back();
    }
  }
};

}  // namespace

std::vector<Route> enumerate_routes(const Network& net, NodeId source, NodeId sink,
                                    const EnumerateOptions& options) {
  check_endpoints(net, source, sink);
  if (!usable(net, source, options.excluded) || !usable(net, sink, options.excluded)) return {};
  Enumerator e{net, sink, options.excluded, effective_limit(net, options.hop_limit), {source}, {source}, {}};
  e.visit(source);
  return std::move(e.out);
}

double path_trust(const Route& route, const TrustMap& trust_of) {
  double pt = 1.0;
  for (std::size_t i = 1; i + 1 < route.hops.size(); ++i) {
    auto it = trust_of.find(route.hops[i]);
    if (it == trust_of.end()) {
      throw std::out_of_range("no trust value for node " + to_string(route.hops[i]));
    }
    pt *= it->second;
  }
  return pt;
}

bool more_trusted(const Route& a, const Route& b) {
  if (a.path_trust != b.path_trust) return a.path_trust > b.path_trust;
  if (a.hops.size() != b.hops.size()) return a.hops.size() < b.hops.size();
  return a.hops < b.hops;
}

void sort_route_table(std::vector<Route>& routes) {
  std::sort(routes.begin(), routes.end(), more_trusted);
}

std::optional<Route> smtr_select(const std::vector<Route>& routes, const SelectOptions& options) {
  if (routes.empty()) return std::nullopt;
  const Route* best = &routes.front();
  for (const auto& r : routes) {
    if (more_trusted(r, *best)) best = &r;
  }
  if (!(best->path_trust > options.floor)) return std::nullopt;
  return *best;
}

std::optional<Route> reselect_excluding(const Network& net, NodeId source, NodeId sink,
                                        const std::set<NodeId>& excluded, const TrustMap& trust_of,
                                        const SelectOptions& options, std::size_t hop_limit) {
  if (excluded.count(source) || excluded.count(sink)) {
    throw std::invalid_argument("source and sink cannot be excluded");
  }
  auto routes = enumerate_routes(net, source, sink, {hop_limit, excluded});
  for (auto& r : routes) r.path_trust = path_trust(r, trust_of);
  return smtr_select(routes, options);
}

namespace {

// Branch and bound over the same search tree as Enumerator. Trust values are
// <= 1, so a prefix's product bounds every completion; a BFS distance to the
// sink bounds the final hop count. DFS visits paths in lexicographic order,
// so a later path that ties on trust and length never wins.
struct BestSearch {
  const Network& net;
  NodeId sink;
  const std::set<NodeId>& excluded;
  const TrustMap& trust_of;
  std::size_t limit;
  std::map<NodeId, std::size_t> dist_to_sink;
  std::vector<NodeId> path;
  std::set<NodeId> on_path;
  std::optional<Route> best;

  double trust(NodeId id) const {
    auto it = trust_of.find(id);
    if (it == trust_of.end()) throw std::out_of_range("no trust value for node " + to_string(id));
    return it->second;
  }

  bool prune(double pt, std::size_t min_final_hops) const {
    if (min_final_hops > limit) return true;
    if (!best) return false;
    if (pt < best->path_trust) return true;
    if (pt == best->path_trust && min_final_hops >= best->hop_count()) return true;
    return false;
  }

  void visit(NodeId u, double pt) {
    const std::size_t hops = path.size() - 1;
    if (u == sink) {
      Route r{path, pt};
      if (!best || more_trusted(r, *best)) best = std::move(r);
      return;
    }
    for (NodeId v : net.neighbors(u, Liveness::LiveOnly)) {
      if (on_path.count(v) || excluded.count(v)) continue;
      auto d = dist_to_sink.find(v);
      if (d == dist_to_sink.end()) continue;  // cannot reach the sink
      const double next_pt = (v == sink) ? pt : pt * trust(v);
      if (prune(next_pt, hops + 1 + d->second)) continue;
      path.push_back(v);
      on_path.insert(v);
      visit(v, next_pt);
      on_path.erase(v);
      path.pop_back();
    }
  }
};

}  // namespace

std::optional<Route> smtr_search(const Network& net, NodeId source, NodeId sink,
                                 const std::set<NodeId>& excluded, const TrustMap& trust_of,
                                 const SelectOptions& options, std::size_t hop_limit) {
  check_endpoints(net, source, sink);
  if (excluded.count(source) || excluded.count(sink)) {
    throw std::invalid_argument("source and sink cannot be excluded");
  }
  if (!usable(net, source, excluded) || !usable(net, sink, excluded)) return std::nullopt;

  BestSearch s{net, sink, excluded, trust_of, effective_limit(net, hop_limit), {}, {source}, {source}, {}};
  // BFS from the sink over usable nodes; the source itself is never revisited.
  std::queue<NodeId> frontier;
  s.dist_to_sink[sink] = 0;
  frontier.push(sink);
  while (!frontier.empty()) {
    const NodeId u = frontier.front();
    frontier.pop();
    if (u == source) continue;
    for (NodeId v : net.neighbors(u, Liveness::LiveOnly)) {
      if (excluded.count(v) || s.dist_to_sink.count(v)) continue;
      s.dist_to_sink[v] = s.dist_to_sink[u] + 1;
      frontier.push(v);
    }
  }
  if (!s.dist_to_sink.count(source)) return std::nullopt;
  s.visit(source, 1.0);
  if (!s.best || !(s.best->path_trust > options.floor)) return std::nullopt;
  return s.best;
}

nlohmann::json routes_to_json(const std::vector<Route>& routes) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : routes) {
    nlohmann::json hops = nlohmann::json::array();
    for (NodeId h : r.hops) hops.push_back(h.value);
    out.push_back({{"hops", hops}, {"pt", r.path_trust}});
  }
  return out;
}

}  // namespace trustroute
