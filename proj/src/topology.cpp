#include "trustroute/topology.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <stdexcept>

namespace trustroute {

double distance(const Position& a, const Position& b) { return std::hypot(a.x - b.x, a.y - b.y); }

void Network::add_node(NodeState node) {
  if (contains(node.id)) throw std::invalid_argument("duplicate node id " + to_string(node.id));
  const NodeId id = node.id;
  auto pos = std::lower_bound(nodes_.begin(), nodes_.end(), id,
                              [](const NodeState& n, NodeId v) { return n.id < v; });
  nodes_.insert(pos, std::move(node));
  index_.clear();
  for (std::size_t i = 0; i < nodes_.size(); ++i) index_[nodes_[i].id] = i;
  adjacency_[id];
}

void Network::add_edge(NodeId a, NodeId b) {
  if (!contains(a) || !contains(b)) {
    throw std::invalid_argument("edge references unknown node " + to_string(contains(a) ? b : a));
  }
  if (a == b) throw std::invalid_argument("self-loop on node " + to_string(a));
  adjacency_[a].insert(b);
  adjacency_[b].insert(a);
}

const NodeState& Network::node(NodeId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw std::out_of_range("unknown node id " + to_string(id));
  return nodes_[it->second];
}

NodeState& Network::node(NodeId id) {
  auto it = index_.find(id);
  if (it == index_.end()) throw std::out_of_range("unknown node id " + to_string(id));
  return nodes_[it->second];
}

std::vector<NodeId> Network::ids() const {
  std::vector<NodeId> out;
  out.reserve(nodes_.size());
  for (const auto& n : nodes_) out.push_back(n.id);
  return out;
}

bool Network::has_edge(NodeId a, NodeId b) const {
  auto it = adjacency_.find(a);
  return it != adjacency_.end() && it->second.count(b) != 0;
}

std::vector<NodeId> Network::neighbors(NodeId id, Liveness live) const {
  auto it = adjacency_.find(id);
  if (it == adjacency_.end()) throw std::out_of_range("unknown node id " + to_string(id));
  std::vector<NodeId> out;
  out.reserve(it->second.size());
  for (NodeId n : it->second) {
    if (live == Liveness::LiveOnly && !alive(n)) continue;
    out.push_back(n);
  }
  return out;
}

std::vector<std::pair<NodeId, NodeId>> Network::edges() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  for (const auto& [a, row] : adjacency_) {
    for (NodeId b : row) {
      if (a < b) out.emplace_back(a, b);
    }
  }
  return out;
}

std::size_t Network::edge_count() const {
  std::size_t twice = 0;
  for (const auto& [a, row] : adjacency_) twice += row.size();
  return twice / 2;
}

bool Network::connected(NodeId from, NodeId to, const std::set<NodeId>& excluded) const {
  if (!contains(from) || !contains(to)) return false;
  if (!alive(from) || !alive(to) || excluded.count(from) || excluded.count(to)) return false;
  std::set<NodeId> seen{from};
  std::queue<NodeId> frontier;
  frontier.push(from);
  while (!frontier.empty()) {
    const NodeId u = frontier.front();
    frontier.pop();
    if (u == to) return true;
    for (NodeId v : neighbors(u, Liveness::LiveOnly)) {
      if (excluded.count(v) || !seen.insert(v).second) continue;
      frontier.push(v);
    }
  }
  return false;
}

std::vector<NodeId> neighbors(const Network& net, NodeId id, Liveness live) {
  return net.neighbors(id, live);
}

void connect_by_range(Network& net) {
  const auto& nodes = net.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < nodes.size(); ++j) {
      if (distance(nodes[i].position, nodes[j].position) <= net.radio_range()) {
        net.add_edge(nodes[i].id, nodes[j].id);
      }
    }
  }
}

Network build_random(std::size_t node_count, double area_radius, double radio_range,
                     std::uint64_t rng_seed, double initial_energy) {
  if (node_count < 2) throw std::invalid_argument("node_count must be >= 2");
  if (!(area_radius > 0.0) || !(radio_range > 0.0)) throw std::invalid_argument("radii must be > 0");

  Network net(radio_range, area_radius);
  Rng rng = Rng::derive(rng_seed, 0x746f706fULL);
  for (std::size_t i = 0; i < node_count; ++i) {
    // Inverse-CDF sampling of the radius keeps the density uniform over the disk.
    const double r = area_radius * std::sqrt(rng.uniform());
    const double theta = 2.0 * std::numbers::pi * rng.uniform();
    NodeState n;
    n.id = NodeId(static_cast<std::uint32_t>(i));
    n.position = {r * std::cos(theta), r * std::sin(theta)};
    n.energy = initial_energy;
    net.add_node(std::move(n));
  }
  connect_by_range(net);
  return net;
}

Network figure2_fixture(double initial_energy) {
  // Positions are cosmetic; only the adjacency below is normative.
  struct Placement {
    std::uint32_t id;
    Position pos;
  };
  const Placement placements[] = {
      {19, {0, 0}},     {14, {15, 30}},   {9, {35, 20}},    {6, {55, 22}},   {3, {78, 18}},
      {15, {22, -12}},  {10, {40, -28}},  {11, {62, -18}},  {16, {58, -2}},  {22, {12, -42}},
      {20, {30, -55}},  {17, {52, -58}},  {12, {76, -40}},  {7, {95, 0}},
  };
  Network net(30.0, 100.0);
  for (const auto& p : placements) {
    NodeState n;
    n.id = NodeId(p.id);
    n.position = p.pos;
    n.energy = initial_energy;
    net.add_node(std::move(n));
  }
  const std::vector<std::vector<std::uint32_t>> routes = {
      {19, 14, 9, 6, 3, 7}, {19, 9, 6, 3, 7},   {19, 15, 10, 11, 7},
      {19, 15, 11, 7},      {19, 15, 16, 7},    {19, 22, 20, 17, 12, 7},
  };
  for (const auto& r : routes) {
    for (std::size_t i = 0; i + 1 < r.size(); ++i) net.add_edge(NodeId(r[i]), NodeId(r[i + 1]));
  }
  return net;
}

std::string fixture_label(NodeId id) {
  if (id == kFixtureSource) return "S";
  if (id == kFixtureSink) return "D";
  return "N" + to_string(id);
}

nlohmann::json network_to_json(const Network& net) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& n : net.nodes()) {
    nodes.push_back({{"id", n.id.value},
                     {"x", n.position.x},
                     {"y", n.position.y},
                     {"energy", n.energy},
                     {"behavior", behavior_to_json(n.behavior)}});
  }
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [a, b] : net.edges()) edges.push_back({a.value, b.value});
  return {{"nodes", nodes},
          {"edges", edges},
          {"radio_range", net.radio_range()},
          {"area_radius", net.area_radius()}};
}

Network network_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("network must be an object");
  for (const char* key : {"nodes", "edges", "radio_range", "area_radius"}) {
    if (!j.contains(key)) throw std::invalid_argument(std::string("network: missing required key '") + key + "'");
  }
  Network net(j.at("radio_range").get<double>(), j.at("area_radius").get<double>());
  for (const auto& jn : j.at("nodes")) {
    NodeState n;
    n.id = NodeId(jn.at("id").get<std::uint32_t>());
    n.position = {jn.value("x", 0.0), jn.value("y", 0.0)};
    n.energy = jn.value("energy", 5.0);
    if (n.energy < 0.0) throw std::invalid_argument("node " + to_string(n.id) + ": negative energy");
    if (jn.contains("behavior")) n.behavior = behavior_from_json(jn.at("behavior"));
    net.add_node(std::move(n));
  }
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2) throw std::invalid_argument("network: each edge must be [u, v]");
    net.add_edge(NodeId(e[0].get<std::uint32_t>()), NodeId(e[1].get<std::uint32_t>()));
  }
  return net;
}

}  // namespace trustroute
