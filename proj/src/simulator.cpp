#include "trustroute/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <spdlog/spdlog.h>

namespace trustroute {

namespace {
Event make_event(Seconds t, EventKind kind, NodeId node) {
  Event e;
  e.time = t;
  e.kind = kind;
  e.node = node;
  return e;
}
}  // namespace

bool EventOrder::operator()(const Event& a, const Event& b) const {
  if (a.time != b.time) return a.time > b.time;
  if (a.kind != b.kind) return a.kind > b.kind;
  if (a.node != b.node) return a.node > b.node;
  return a.seq > b.seq;
}

void EventQueue::push(Event e) {
  e.seq = next_seq_++;
  heap_.push(std::move(e));
}

Event EventQueue::pop() {
  Event e = heap_.top();
  heap_.pop();
  return e;
}

TrustRecord& watchdog_observe(Network& net, NodeId upstream, NodeId watched, ForwardDecision outcome,
                              const TrustParams& params) {
  if (!net.has_edge(upstream, watched)) {
    throw std::invalid_argument("watchdog: node " + to_string(watched) + " is not a one-hop neighbor of " +
                                to_string(upstream));
  }
  auto [it, inserted] = net.node(upstream).trust_table.try_emplace(watched, TrustRecord::fresh(params));
  record_observation(it->second, outcome == ForwardDecision::Forward);
  return it->second;
}

Simulator::Simulator(const ScenarioConfig& config) : Simulator(config, build_network(config)) {}

Simulator::Simulator(const ScenarioConfig& config, Network network)
    : config_(config), net_(std::move(network)), exchange_(config.exchange, config.trust) {
  config_.validate();
  if (!net_.contains(config_.source) || !net_.contains(config_.sink)) {
    throw std::invalid_argument("source or sink does not exist");
  }
  if (!net_.alive(config_.source) || !net_.alive(config_.sink)) {
    throw std::invalid_argument("source or sink is dead at start");
  }
  if (!net_.connected(config_.source, config_.sink)) {
    throw std::invalid_argument("source " + to_string(config_.source) + " cannot reach sink " +
                                to_string(config_.sink));
  }

  for (const auto& n : net_.nodes()) {
    rngs_.emplace(n.id, Rng::derive(config_.rng_seed, n.id.value));
    initial_energy_[n.id] = n.energy;
    metrics_.initial_energy_total += n.energy;
  }

  exchange_.set_message_hook([this](NodeId from, NodeId to) { transmit(from, to, config_.control_packet_size); });
  if (config_.exchange.kind == SchemeKind::Header && config_.elect_initial_header) {
    exchange_.set_scheme(rotate_header(exchange_.scheme(), net_, 0.0));
  }

  for (std::uint64_t k = 0;; ++k) {
    const Seconds t = static_cast<double>(k) * config_.packet_interval;
    if (t >= config_.duration) break;
    schedule(make_event(t, EventKind::PacketGen, config_.source));
  }
  for (std::uint64_t k = 1;; ++k) {
    const Seconds t = static_cast<double>(k) * config_.trust.update_period;
    if (t > config_.duration) break;
    schedule(make_event(t, EventKind::TrustUpdate, config_.source));
  }
  if (config_.exchange.kind == SchemeKind::Header && config_.exchange.rotation_period > 0.0) {
    for (std::uint64_t k = 1;; ++k) {
      const Seconds t = static_cast<double>(k) * config_.exchange.rotation_period;
      if (t > config_.duration) break;
      schedule(make_event(t, EventKind::HeaderRotation, config_.source));
    }
  }
  for (const auto& f : config_.failures) fail_node(f.node, f.time);
}

void Simulator::schedule(Event e) { queue_.push(std::move(e)); }

void Simulator::fail_node(NodeId node, Seconds at) {
  if (!net_.contains(node)) throw std::invalid_argument("cannot fail unknown node " + to_string(node));
  if (at < now_) throw std::invalid_argument("failure time lies in the past");
  Event e = make_event(at, EventKind::NodeDeath, node);
  e.scripted = true;
  schedule(e);
}

void Simulator::run_until(Seconds t) {
  while (!queue_.empty() && queue_.top().time <= t) {
    const Event e = queue_.pop();
    now_ = e.time;
    dispatch(e);
  }
  now_ = std::max(now_, t);
}

void Simulator::dispatch(const Event& e) {
  switch (e.kind) {
    case EventKind::NodeDeath: on_node_death(e); break;
    case EventKind::HeaderRotation: on_header_rotation(e); break;
    case EventKind::TrustUpdate: on_trust_update(e); break;
    case EventKind::PacketGen: on_packet_gen(e); break;
    case EventKind::Forward: on_forward(e); break;
    case EventKind::WatchdogVerdict: on_verdict(e); break;
  }
}

void Simulator::consume(NodeId id, double joules) {
  NodeState& n = net_.node(id);
  if (!n.alive() || joules <= 0.0) return;
  const double spent = std::min(joules, n.energy);
  n.energy -= spent;
  metrics_.total_energy += spent;
  if (n.energy <= 0.0) {
    n.energy = 0.0;
    if (!metrics_.first_death_time) metrics_.first_death_time = now_;
    schedule(make_event(now_, EventKind::NodeDeath, id));
  }
}

void Simulator::transmit(NodeId from, NodeId to, std::uint64_t bits) {
  const double d = distance(net_.node(from).position, net_.node(to).position);
  consume(from, energy_cost(RadioOp::Tx, bits, d, config_.energy_model));
  consume(to, energy_cost(RadioOp::Rx, bits, 0.0, config_.energy_model));
}

TrustMap Simulator::trust_view() const {
  TrustMap view;
  const NodeState& self = net_.node(config_.source);
  const double prior = config_.trust.initial_trust;
  for (const auto& n : net_.nodes()) {
    if (n.id == config_.source) continue;
    double t = prior;
    auto rec = self.trust_table.find(n.id);
    switch (config_.variant) {
      case Variant::NoTrust:
        t = 1.0;
        break;
      case Variant::DirectOnly:
        if (rec != self.trust_table.end()) {
          const double metrics[] = {rec->second.direct};
          t = geometric_mean(metrics);
        }
        break;
      case Variant::Combined:
        if (rec != self.trust_table.end()) {
          t = rec->second.total;
        } else if (auto it = remote_indirect_.find(n.id); it != remote_indirect_.end()) {
          t = it->second;
        }
        break;
    }
    view[n.id] = t;
  }
  return view;
}

std::optional<Route> Simulator::select_route() {
  std::set<NodeId> excluded;
  for (const auto& n : net_.nodes()) {
    if (!n.alive() && n.id != config_.source && n.id != config_.sink) excluded.insert(n.id);
  }
  return smtr_search(net_, config_.source, config_.sink, excluded, trust_view(), {config_.pt_floor},
                     config_.hop_limit);
}

void Simulator::invalidate_route_if(const Route& used) {
  if (route_ && route_->hops == used.hops) route_valid_ = false;
}

void Simulator::sample(Seconds t) {
  IntervalSample s;
  s.time = t;
  s.pdr = metrics_.generated == 0 ? 0.0
                                  : static_cast<double>(metrics_.delivered) / static_cast<double>(metrics_.generated);
  s.total_energy = metrics_.total_energy;
  for (const auto& n : net_.nodes()) {
    if (n.alive()) ++s.live_nodes;
    metrics_.energy_trace[n.id].push_back(n.energy);
  }
  if (route_ && route_valid_) s.chosen_route_pt = path_trust(*route_, trust_view());
  metrics_.intervals.push_back(s);
}

void Simulator::on_packet_gen(const Event& e) {
  if (!net_.alive(config_.source)) {
    sample(e.time);
    return;
  }
  ++metrics_.generated;

  if (config_.route_mode == RouteMode::PerPacket || !route_valid_ || !route_) {
    auto chosen = select_route();
    const bool changed = chosen.has_value() != route_.has_value() || (chosen && route_ && chosen->hops != route_->hops);
    route_ = std::move(chosen);
    route_valid_ = route_.has_value();
    if (changed && route_) {
      metrics_.route_history.push_back({e.time, *route_});
      spdlog::debug("t={} route changed, pt={}", e.time, route_->path_trust);
    }
  }

  if (!route_) {
    ++metrics_.dropped;
    ++metrics_.no_route;
    sample(e.time);
    return;
  }

  const std::uint64_t id = next_packet_++;
  packets_[id] = Packet{*route_};
  const NodeId first = route_->hops[1];
  transmit(config_.source, first, config_.packet_size);
  Event fwd = make_event(e.time + config_.hop_delay, EventKind::Forward, first);
  fwd.packet = id;
  fwd.hop_index = 1;
  schedule(fwd);
  sample(e.time);
}

void Simulator::on_forward(const Event& e) {
  auto it = packets_.find(e.packet);
  if (it == packets_.end()) return;
  const Route route = it->second.route;
  const NodeId v = route.hops[e.hop_index];
  const NodeId upstream = route.hops[e.hop_index - 1];

  auto drop = [&] {
    ++metrics_.dropped;
    packets_.erase(it);
    invalidate_route_if(route);
  };

  // The Rx cost was charged when the upstream node transmitted.
  if (!net_.alive(v)) {
    drop();
    return;
  }
  if (v == config_.sink) {
    ++metrics_.delivered;
    packets_.erase(it);
    return;
  }

  const ForwardDecision decision = decide_forward(net_.node(v).behavior, e.time, rngs_.at(v));
  Event verdict = make_event(e.time, EventKind::WatchdogVerdict, v);
  verdict.upstream = upstream;
  verdict.outcome = decision;
  schedule(verdict);

  if (decision == ForwardDecision::Drop) {
    drop();
    return;
  }
  const NodeId next = route.hops[e.hop_index + 1];
  transmit(v, next, config_.packet_size);
  Event fwd = make_event(e.time + config_.hop_delay, EventKind::Forward, next);
  fwd.packet = e.packet;
  fwd.hop_index = e.hop_index + 1;
  schedule(fwd);
}

void Simulator::on_verdict(const Event& e) {
  const NodeId watched = e.node;
  std::vector<NodeId> witnesses;
  if (net_.alive(e.upstream)) witnesses.push_back(e.upstream);
  if (config_.promiscuous_watchdog) {
    for (NodeId w : net_.neighbors(watched, Liveness::LiveOnly)) {
      if (w != e.upstream && net_.has_edge(w, e.upstream)) witnesses.push_back(w);
    }
  }
  for (NodeId w : witnesses) {
    watchdog_observe(net_, w, watched, e.outcome, config_.trust);
    if (e.outcome == ForwardDecision::Forward && config_.energy_model.overhearing) {
      consume(w, energy_cost(RadioOp::Rx, config_.packet_size, 0.0, config_.energy_model));
    }
  }
}

void Simulator::ensure_header() {
  if (config_.exchange.kind != SchemeKind::Header) return;
  const NodeId h = exchange_.scheme().header;
  if (net_.contains(h) && net_.alive(h)) return;
  exchange_.set_scheme(rotate_header(exchange_.scheme(), net_, now_));
  spdlog::debug("t={} header {} unavailable, elected {}", now_, to_string(h), to_string(exchange_.scheme().header));
}

void Simulator::refresh_indirect() {
  ensure_header();
  exchange_.collect_reports(net_);

  const NodeId self = config_.source;
  std::set<NodeId> to_penalize;
  std::map<NodeId, double> gathered;
  std::set<NodeId> informed;
  for (const auto& n : net_.nodes()) {
    if (n.id == self || !n.alive()) continue;
    ReputationExchange::Gathered g;
    try {
      g = exchange_.gather_indirect(self, n.id, net_);
    } catch (const HeaderUnavailable&) {
      ensure_header();
      g = exchange_.gather_indirect(self, n.id, net_);
    }
    if (!net_.alive(self)) return;
    to_penalize.insert(g.rejected.begin(), g.rejected.end());
    gathered[n.id] = indirect_trust(g.recommendations);
    if (!g.recommendations.empty()) informed.insert(n.id);
  }

  auto& table = net_.node(self).trust_table;
  for (NodeId r : to_penalize) {
    auto rec = table.find(r);
    if (rec == table.end()) continue;
    rec->second.direct = std::max(0.0, rec->second.direct - config_.trust.filter_penalty);
  }
  for (const auto& [subject, it_value] : gathered) {
    auto rec = table.find(subject);
    if (rec != table.end()) {
      rec->second.indirect = it_value;
      rec->second.total = total_trust(rec->second.direct, rec->second.indirect);
    } else if (informed.count(subject)) {
      // Beyond watchdog range the aged indirect evidence stands alone.
      auto [slot, inserted] = remote_indirect_.try_emplace(subject, config_.trust.initial_trust);
      slot->second = age_trust(slot->second, it_value, config_.trust);
    }
  }
  for (auto& [id, rec] : table) rec.total = total_trust(rec.direct, rec.indirect);
}

void Simulator::on_trust_update(const Event& e) {
  for (auto& n : net_.nodes()) {
    if (!n.alive()) continue;
    for (auto& [id, rec] : n.trust_table) periodic_update(rec, e.time, config_.trust);
  }
  if (config_.variant == Variant::Combined && net_.alive(config_.source)) refresh_indirect();
}

void Simulator::on_header_rotation(const Event& e) {
  if (config_.variant != Variant::Combined) return;
  exchange_.set_scheme(rotate_header(exchange_.scheme(), net_, e.time));
}

void Simulator::on_node_death(const Event& e) {
  NodeState& n = net_.node(e.node);
  if (e.scripted) n.failed = true;
  if (route_ && std::find(route_->hops.begin(), route_->hops.end(), e.node) != route_->hops.end()) {
    route_valid_ = false;
  }
  spdlog::debug("t={} node {} down", e.time, to_string(e.node));
}

RunMetrics Simulator::finish() {
  if (!finished_) {
    run_until(config_.duration);
    finished_ = true;
    metrics_.in_flight = packets_.size();
    metrics_.pdr = metrics_.generated == 0
                       ? 0.0
                       : static_cast<double>(metrics_.delivered) / static_cast<double>(metrics_.generated);
    metrics_.ledger = exchange_.ledger();
    const TrustMap view = trust_view();
    for (const auto& n : net_.nodes()) {
      NodeMetrics nm;
      nm.energy_used = initial_energy_.at(n.id) - n.energy;
      auto v = view.find(n.id);
      nm.final_total_trust = v == view.end() ? 1.0 : v->second;
      metrics_.per_node[n.id] = nm;
    }
  }
  return metrics_;
}

RunMetrics run(const ScenarioConfig& config) {
  Simulator sim(config);
  return sim.finish();
}

}  // namespace trustroute
