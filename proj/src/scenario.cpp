#include "trustroute/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace trustroute {

double energy_cost(RadioOp op, std::uint64_t bits, double distance_m, const RadioParams& params) {
  const double b = static_cast<double>(bits);
  if (op == RadioOp::Rx) return b * params.e_elec;
  const double k = params.path_loss_exponent;
  const double spread = (k == 2.0) ? distance_m * distance_m : std::pow(distance_m, k);
  return b * (params.e_elec + params.e_amp * spread);
}

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::NoTrust: return "no_trust";
    case Variant::DirectOnly: return "direct_only";
    case Variant::Combined: return "combined";
  }
  return "?";
}

Variant variant_from_name(const std::string& name) {
  if (name == "no_trust" || name == "notrust") return Variant::NoTrust;
  if (name == "direct_only" || name == "directonly") return Variant::DirectOnly;
  if (name == "combined") return Variant::Combined;
  throw std::invalid_argument("unknown variant '" + name + "' (expected no_trust, direct_only, combined)");
}

void ScenarioConfig::validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
  };
  require(duration > 0.0, "duration must be > 0");
  require(packet_interval > 0.0, "packet_interval must be > 0");
  require(packet_size > 0, "packet_size must be > 0");
  require(control_packet_size > 0, "control_packet_size must be > 0");
  require(initial_energy > 0.0, "initial_energy must be > 0");
  require(hop_delay >= 0.0, "hop_delay must be >= 0");
  require(source != sink, "source and sink must differ");
  require(energy_model.e_elec >= 0.0 && energy_model.e_amp >= 0.0 && energy_model.path_loss_exponent >= 0.0,
          "energy_model parameters must be >= 0");
  require(exchange.rotation_period >= 0.0, "exchange.rotation_period must be >= 0");
  require(pt_floor >= 0.0 && pt_floor < 1.0, "pt_floor must lie in [0,1)");
  trust.validate();
  for (const auto& rule : behaviors) {
    trustroute::validate(rule.behavior);
    require(rule.fraction >= 0.0 && rule.fraction <= 1.0, "behavior fraction must lie in [0,1]");
  }
  if (network.kind == NetworkSpec::Kind::Random) {
    require(network.node_count >= 2, "network.node_count must be >= 2");
    require(network.area_radius > 0.0 && network.radio_range > 0.0, "network radii must be > 0");
  }
}

namespace {

const nlohmann::json& required(const nlohmann::json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ScenarioError("missing required key '" + where + key + "'");
  return obj.at(key);
}

double number(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number()) throw ScenarioError("key '" + key + "' must be a number");
  return v.get<double>();
}

std::uint64_t count(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    throw ScenarioError("key '" + key + "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

NodeId node_id(const nlohmann::json& v, const std::string& key) {
  return NodeId(static_cast<std::uint32_t>(count(v, key)));
}

template <class T, class Read>
void optional_field(const nlohmann::json& obj, const char* key, T& field, Read read) {
  if (obj.contains(key)) field = read(obj.at(key), std::string(key));
}

NetworkSpec parse_network(const nlohmann::json& j) {
  NetworkSpec spec;
  if (!j.is_object()) throw ScenarioError("key 'network' must be an object");
  const std::string kind = j.value("kind", std::string("random"));
  if (kind == "fixture") {
    spec.kind = NetworkSpec::Kind::Fixture;
  } else if (kind == "inline") {
    spec.kind = NetworkSpec::Kind::Inline;
    spec.inline_document = required(j, "topology", "network.");
  } else if (kind == "random") {
    spec.kind = NetworkSpec::Kind::Random;
    optional_field(j, "node_count", spec.node_count, count);
    optional_field(j, "area_radius", spec.area_radius, number);
    optional_field(j, "radio_range", spec.radio_range, number);
    if (j.contains("require_path")) spec.require_path = j.at("require_path").get<bool>();
  } else {
    throw ScenarioError("key 'network.kind' must be one of random, fixture, inline");
  }
  return spec;
}

ExchangeScheme parse_exchange(const nlohmann::json& j, bool& elect) {
  ExchangeScheme s;
  if (!j.is_object()) throw ScenarioError("key 'exchange' must be an object");
  const std::string kind = j.value("kind", std::string("header"));
  if (kind == "flat") {
    s.kind = SchemeKind::Flat;
  } else if (kind == "header") {
    s.kind = SchemeKind::Header;
  } else {
    throw ScenarioError("key 'exchange.kind' must be flat or header");
  }
  if (j.contains("header") && !j.at("header").is_null()) {
    s.header = node_id(j.at("header"), "exchange.header");
    elect = false;
  }
  optional_field(j, "rotation_period", s.rotation_period, number);
  return s;
}

RadioParams parse_radio(const nlohmann::json& j) {
  RadioParams r;
  if (!j.is_object()) throw ScenarioError("key 'energy_model' must be an object");
  optional_field(j, "e_elec", r.e_elec, number);
  optional_field(j, "e_amp", r.e_amp, number);
  optional_field(j, "path_loss_exponent", r.path_loss_exponent, number);
  if (j.contains("overhearing")) r.overhearing = j.at("overhearing").get<bool>();
  return r;
}

BehaviorRule parse_rule(const nlohmann::json& j) {
  BehaviorRule rule;
  if (!j.is_object()) throw ScenarioError("each entry of 'behaviors' must be an object");
  rule.behavior = behavior_from_json(required(j, "behavior", "behaviors[]."));
  if (j.contains("node")) {
    rule.node = node_id(j.at("node"), "behaviors[].node");
  } else if (j.contains("fraction")) {
    rule.fraction = number(j.at("fraction"), "behaviors[].fraction");
  } else {
    throw ScenarioError("missing required key 'behaviors[].node' or 'behaviors[].fraction'");
  }
  return rule;
}

// 1-based line of the first occurrence of "key" in the text, if any.
std::optional<std::size_t> line_of_key(const std::string& text, const std::string& message) {
  std::string key;
  auto open = message.find('\'');
  auto close = open == std::string::npos ? open : message.find('\'', open + 1);
  if (close != std::string::npos) {
    key = message.substr(open + 1, close - open - 1);
  } else {
    key = message.substr(0, message.find(' '));  // invariant messages lead with the field name
  }
  if (auto dot = key.rfind('.'); dot != std::string::npos) key = key.substr(dot + 1);
  if (auto br = key.find('['); br != std::string::npos) key = key.substr(0, br);
  const auto pos = text.find("\"" + key + "\"");
  if (pos == std::string::npos) return std::nullopt;
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(pos), '\n'));
}

}  // namespace

ScenarioConfig scenario_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ScenarioError("scenario must be a JSON object");
  ScenarioConfig c;
  try {
    c.network = parse_network(required(doc, "network", ""));
    c.source = node_id(required(doc, "source", ""), "source");
    c.sink = node_id(required(doc, "sink", ""), "sink");
    c.duration = number(required(doc, "duration", ""), "duration");
    optional_field(doc, "packet_interval", c.packet_interval, number);
    optional_field(doc, "packet_size", c.packet_size, count);
    optional_field(doc, "control_packet_size", c.control_packet_size, count);
    optional_field(doc, "initial_energy", c.initial_energy, number);
    optional_field(doc, "hop_delay", c.hop_delay, number);
    optional_field(doc, "rng_seed", c.rng_seed, count);
    optional_field(doc, "hop_limit", c.hop_limit, count);
    optional_field(doc, "pt_floor", c.pt_floor, number);
    if (doc.contains("trust")) c.trust = trust_params_from_json(doc.at("trust"));
    if (doc.contains("exchange")) c.exchange = parse_exchange(doc.at("exchange"), c.elect_initial_header);
    if (doc.contains("energy_model")) c.energy_model = parse_radio(doc.at("energy_model"));
    if (doc.contains("variant")) c.variant = variant_from_name(doc.at("variant").get<std::string>());
    if (doc.contains("route_mode")) {
      const auto mode = doc.at("route_mode").get<std::string>();
      if (mode == "sticky") {
        c.route_mode = RouteMode::Sticky;
      } else if (mode == "per_packet") {
        c.route_mode = RouteMode::PerPacket;
      } else {
        throw ScenarioError("key 'route_mode' must be sticky or per_packet");
      }
    }
    if (doc.contains("promiscuous_watchdog")) c.promiscuous_watchdog = doc.at("promiscuous_watchdog").get<bool>();
    if (doc.contains("behaviors")) {
      for (const auto& r : doc.at("behaviors")) c.behaviors.push_back(parse_rule(r));
    }
    if (doc.contains("failures")) {
      for (const auto& f : doc.at("failures")) {
        c.failures.push_back({node_id(required(f, "node", "failures[]."), "failures[].node"),
                              number(required(f, "time", "failures[]."), "failures[].time")});
      }
    }
    c.validate();
  } catch (const ScenarioError&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    throw ScenarioError(std::string("malformed scenario: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(e.what());
  }
  return c;
}

nlohmann::json scenario_to_json(const ScenarioConfig& c) {
  nlohmann::json net;
  switch (c.network.kind) {
    case NetworkSpec::Kind::Fixture: net = {{"kind", "fixture"}}; break;
    case NetworkSpec::Kind::Inline: net = {{"kind", "inline"}, {"topology", c.network.inline_document}}; break;
    case NetworkSpec::Kind::Random:
      net = {{"kind", "random"},
             {"node_count", c.network.node_count},
             {"area_radius", c.network.area_radius},
             {"radio_range", c.network.radio_range},
             {"require_path", c.network.require_path}};
      break;
  }
  nlohmann::json behaviors = nlohmann::json::array();
  for (const auto& r : c.behaviors) {
    nlohmann::json jr = {{"behavior", behavior_to_json(r.behavior)}};
    if (r.node) {
      jr["node"] = r.node->value;
    } else {
      jr["fraction"] = r.fraction;
    }
    behaviors.push_back(jr);
  }
  nlohmann::json failures = nlohmann::json::array();
  for (const auto& f : c.failures) failures.push_back({{"node", f.node.value}, {"time", f.time}});
  nlohmann::json exchange = {{"kind", scheme_name(c.exchange.kind)}, {"rotation_period", c.exchange.rotation_period}};
  if (!c.elect_initial_header) exchange["header"] = c.exchange.header.value;
  return {{"network", net},
          {"source", c.source.value},
          {"sink", c.sink.value},
          {"duration", c.duration},
          {"packet_interval", c.packet_interval},
          {"packet_size", c.packet_size},
          {"control_packet_size", c.control_packet_size},
          {"initial_energy", c.initial_energy},
          {"hop_delay", c.hop_delay},
          {"trust", to_json(c.trust)},
          {"exchange", exchange},
          {"behaviors", behaviors},
          {"energy_model",
           {{"e_elec", c.energy_model.e_elec},
            {"e_amp", c.energy_model.e_amp},
            {"path_loss_exponent", c.energy_model.path_loss_exponent},
            {"overhearing", c.energy_model.overhearing}}},
          {"rng_seed", c.rng_seed},
          {"variant", variant_name(c.variant)},
          {"route_mode", c.route_mode == RouteMode::Sticky ? "sticky" : "per_packet"},
          {"promiscuous_watchdog", c.promiscuous_watchdog},
          {"hop_limit", c.hop_limit},
          {"pt_floor", c.pt_floor},
          {"failures", failures}};
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError(path.string() + ": cannot open scenario file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto offset = std::min<std::size_t>(e.byte, text.size());
    const auto before = text.substr(0, offset);
    const auto line = 1 + std::count(before.begin(), before.end(), '\n');
    const auto last_nl = before.rfind('\n');
    const auto column = offset - (last_nl == std::string::npos ? 0 : last_nl + 1);
    throw ScenarioError(path.string() + ":" + std::to_string(line) + ":" + std::to_string(column) +
                        ": JSON parse error");
  }
  try {
    return scenario_from_json(doc);
  } catch (const ScenarioError& e) {
    std::string where = path.string();
    if (auto line = line_of_key(text, e.what())) where += ":" + std::to_string(*line);
    throw ScenarioError(where + ": " + e.what());
  }
}

void assign_behaviors(Network& net, const ScenarioConfig& config) {
  std::set<NodeId> assigned;
  std::uint64_t rule_index = 0;
  for (const auto& rule : config.behaviors) {
    ++rule_index;
    if (rule.node) {
      if (!net.contains(*rule.node)) {
        throw ScenarioError("behavior rule references unknown node " + to_string(*rule.node));
      }
      net.node(*rule.node).behavior = rule.behavior;
      assigned.insert(*rule.node);
      continue;
    }
    std::vector<NodeId> pool;
    for (NodeId id : net.ids()) {
      if (id == config.source || id == config.sink || assigned.count(id)) continue;
      pool.push_back(id);
    }
    auto want = static_cast<std::size_t>(std::llround(rule.fraction * static_cast<double>(net.size())));
    want = std::min(want, pool.size());
    Rng rng = Rng::derive(config.rng_seed, 0x62656876ULL + rule_index);
    for (std::size_t i = 0; i < want; ++i) {
      const auto j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
      std::swap(pool[i], pool[j]);
      net.node(pool[i]).behavior = rule.behavior;
      assigned.insert(pool[i]);
    }
  }
}

Network build_network(const ScenarioConfig& config) {
  Network net;
  switch (config.network.kind) {
    case NetworkSpec::Kind::Fixture:
      net = figure2_fixture(config.initial_energy);
      break;
    case NetworkSpec::Kind::Inline:
      net = network_from_json(config.network.inline_document);
      break;
    case NetworkSpec::Kind::Random: {
      const auto& spec = config.network;
      std::uint64_t seed = config.rng_seed;
      for (int attempt = 0;; ++attempt, ++seed) {
        net = build_random(spec.node_count, spec.area_radius, spec.radio_range, seed, config.initial_energy);
        if (!spec.require_path || !net.contains(config.source) || !net.contains(config.sink) ||
            net.connected(config.source, config.sink)) {
          break;
        }
        if (attempt == 1000) throw ScenarioError("no connected placement found in 1000 draws");
      }
      break;
    }
  }
  if (!net.contains(config.source)) throw ScenarioError("source node " + to_string(config.source) + " does not exist");
  if (!net.contains(config.sink)) throw ScenarioError("sink node " + to_string(config.sink) + " does not exist");
  assign_behaviors(net, config);
  for (auto& n : net.nodes()) {
    for (NodeId nb : net.neighbors(n.id)) n.trust_table.emplace(nb, TrustRecord::fresh(config.trust));
  }
  return net;
}

}  // namespace trustroute
