#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "trustroute/behavior.hpp"
#include "trustroute/exchange.hpp"
#include "trustroute/topology.hpp"
#include "trustroute/trust.hpp"

namespace trustroute {

/// First-order radio model: Tx = bits*(e_elec + e_amp*d^k), Rx = bits*e_elec.
struct RadioParams {
  double e_elec = 50e-9;    // J/bit
  double e_amp = 100e-12;   // J/bit/m^k
  double path_loss_exponent = 2.0;
  bool overhearing = true;  // watchdogs pay one Rx per observed forward
};

enum class RadioOp { Tx, Rx };

double energy_cost(RadioOp op, std::uint64_t bits, double distance_m, const RadioParams& params);

/// Which trust information the source uses to rank routes.
enum class Variant {
  NoTrust,     // uniform trust: fewest hops
  DirectOnly,  // own watchdog observations only, geometric-mean aggregation
  Combined,    // clamp(direct + indirect) with reputation exchange
};

enum class RouteMode { Sticky, PerPacket };

const char* variant_name(Variant v);
Variant variant_from_name(const std::string& name);

struct NetworkSpec {
  enum class Kind { Random, Fixture, Inline };
  Kind kind = Kind::Random;
  std::size_t node_count = 50;
  double area_radius = 100.0;
  double radio_range = 30.0;
  /// Random networks: redraw (seed, seed+1, ...) until source reaches sink.
  bool require_path = false;
  nlohmann::json inline_document;
};

/// Either one node or a fraction of the eligible (non-endpoint, unassigned) nodes.
struct BehaviorRule {
  std::optional<NodeId> node;
  double fraction = 0.0;
  BehaviorProfile behavior = behavior::Benevolent{};
};

struct ScheduledFailure {
  NodeId node;
  Seconds time = 0.0;
};

struct ScenarioConfig {
  NetworkSpec network;
  NodeId source;
  NodeId sink;
  Seconds duration = 100.0;
  Seconds packet_interval = 1.0;
  std::uint64_t packet_size = 500;         // bits
  std::uint64_t control_packet_size = 64;  // bits, reputation messages
  double initial_energy = 5.0;             // J
  Seconds hop_delay = 0.001;
  TrustParams trust;
  ExchangeScheme exchange;
  bool elect_initial_header = true;  // false when the scenario pins the header
  std::vector<BehaviorRule> behaviors;
  RadioParams energy_model;
  std::uint64_t rng_seed = 1;
  Variant variant = Variant::Combined;
  RouteMode route_mode = RouteMode::Sticky;
  bool promiscuous_watchdog = true;
  std::size_t hop_limit = 0;
  double pt_floor = 0.0;
  std::vector<ScheduledFailure> failures;

  /// Throws std::invalid_argument on violated invariants.
  void validate() const;
};

/// Schema problem in a scenario document; what() names the offending key.
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ScenarioConfig scenario_from_json(const nlohmann::json& doc);
nlohmann::json scenario_to_json(const ScenarioConfig& config);
/// Reads and parses a scenario file. Parse errors report line and column.
ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Topology + energies + behavior assignment + empty trust tables, all
/// determined by the config (and its rng_seed).
Network build_network(const ScenarioConfig& config);

/// Applies the behavior rules in order. Fraction rules pick
/// round(fraction * node_count) nodes among those still unassigned,
/// excluding source and sink.
void assign_behaviors(Network& net, const ScenarioConfig& config);

}  // namespace trustroute
