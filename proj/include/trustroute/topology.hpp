#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "trustroute/behavior.hpp"
#include "trustroute/trust.hpp"
#include "trustroute/types.hpp"

namespace trustroute {

struct Position {
  double x = 0.0;
  double y = 0.0;
};

double distance(const Position& a, const Position& b);

struct NodeState {
  NodeId id;
  Position position;
  double energy = 0.0;  // joules, never increases
  BehaviorProfile behavior = behavior::Benevolent{};
  std::map<NodeId, TrustRecord> trust_table;
  bool failed = false;  // externally killed (scripted failure)

  bool alive() const { return energy > 0.0 && !failed; }
};

enum class Liveness { All, LiveOnly };

/// Static node set with symmetric, irreflexive adjacency. Only per-node
/// energy, failure flag and trust tables change after construction.
class Network {
 public:
  Network() = default;
  Network(double radio_range, double area_radius)
      : radio_range_(radio_range), area_radius_(area_radius) {}

  void add_node(NodeState node);
  /// Adds the undirected edge {a, b}. Throws on unknown ids or a == b.
  void add_edge(NodeId a, NodeId b);

  bool contains(NodeId id) const { return index_.count(id) != 0; }
  const NodeState& node(NodeId id) const;
  NodeState& node(NodeId id);
  bool alive(NodeId id) const { return node(id).alive(); }

  /// Nodes sorted by id.
  const std::vector<NodeState>& nodes() const { return nodes_; }
  std::vector<NodeState>& nodes() { return nodes_; }
  std::vector<NodeId> ids() const;

  bool has_edge(NodeId a, NodeId b) const;
  /// Adjacency row of `id`, ascending. Throws std::out_of_range for unknown ids.
  std::vector<NodeId> neighbors(NodeId id, Liveness live = Liveness::All) const;
  /// Undirected edges as (smaller, larger) pairs, sorted.
  std::vector<std::pair<NodeId, NodeId>> edges() const;
  std::size_t edge_count() const;
  std::size_t size() const { return nodes_.size(); }

  double radio_range() const { return radio_range_; }
  double area_radius() const { return area_radius_; }

  /// Reachability over live nodes, ignoring `excluded`.
  bool connected(NodeId from, NodeId to, const std::set<NodeId>& excluded = {}) const;

 private:
  std::vector<NodeState> nodes_;
  std::map<NodeId, std::size_t> index_;
  std::map<NodeId, std::set<NodeId>> adjacency_;
  double radio_range_ = 0.0;
  double area_radius_ = 0.0;
};

/// Free-function form of Network::neighbors.
std::vector<NodeId> neighbors(const Network& net, NodeId id, Liveness live = Liveness::All);

/// `node_count` nodes uniform over a disk of `area_radius`, ids 0..n-1, and
/// an edge wherever two nodes lie within `radio_range` of each other.
Network build_random(std::size_t node_count, double area_radius, double radio_range,
                     std::uint64_t rng_seed, double initial_energy = 5.0);

/// Rebuilds edges from positions with the disk model (used after loading or
/// moving nodes).
void connect_by_range(Network& net);

/// The six-route example network. Node ids follow the example's labels:
/// source S is node 19, destination D is node 7, Nk is node k.
Network figure2_fixture(double initial_energy = 5.0);
inline constexpr NodeId kFixtureSource{19};
inline constexpr NodeId kFixtureSink{7};

/// "S", "D" or "N<k>" for fixture ids.
std::string fixture_label(NodeId id);

/// {nodes:[{id,x,y,energy,behavior}], edges:[[u,v]], radio_range, area_radius}
nlohmann::json network_to_json(const Network& net);
Network network_from_json(const nlohmann::json& j);

}  // namespace trustroute
