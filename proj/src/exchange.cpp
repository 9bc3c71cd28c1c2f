#include "trustroute/exchange.hpp"

#include <algorithm>

namespace trustroute {

const char* scheme_name(SchemeKind kind) { return kind == SchemeKind::Flat ? "flat" : "header"; }

const char* scope_name(Scope scope) {
  switch (scope) {
    case Scope::OnePair: return "one_pair";
    case Scope::OneToAll: return "one_to_all";
    case Scope::AllToAll: return "all_to_all";
    case Scope::ReportPhase: return "report_phase";
  }
  return "?";
}

MessageLedger& MessageLedger::operator+=(const MessageLedger& other) {
  reputation_request += other.reputation_request;
  reputation_reply += other.reputation_reply;
  header_report += other.header_report;
  return *this;
}

std::uint64_t predicted_cost(SchemeKind kind, std::uint64_t n, Scope scope) {
  if (n < 3) throw std::invalid_argument("group size must be >= 3");
  if (kind == SchemeKind::Flat) {
    switch (scope) {
      case Scope::OnePair: return 2 * (n - 2);
      case Scope::OneToAll: return 2 * (n - 1) * (n - 2);
      case Scope::AllToAll: return 2 * n * (n - 1) * (n - 2);
      case Scope::ReportPhase: return 0;
    }
  }
  switch (scope) {
    case Scope::ReportPhase: return n - 1;
    case Scope::OnePair: return 2;
    case Scope::OneToAll: return 2 * (n - 2);
    case Scope::AllToAll: return (2 * n - 3) * (n - 1);
  }
  return 0;
}

NodeId elect_header(const Network& net) {
  const NodeState* best = nullptr;
  for (const auto& n : net.nodes()) {  // ascending id, so strict > keeps the smallest on ties
    if (!n.alive()) continue;
    if (!best || n.energy > best->energy) best = &n;
  }
  if (!best) throw std::runtime_error("no live node can serve as header");
  return best->id;
}

ExchangeScheme rotate_header(const ExchangeScheme& scheme, const Network& net, Seconds /*now*/) {
  ExchangeScheme next = scheme;
  next.header = elect_header(net);
  return next;
}

ReputationExchange::ReputationExchange(ExchangeScheme scheme, TrustParams params)
    : scheme_(scheme), params_(params) {}

void ReputationExchange::send(NodeId from, NodeId to) {
  if (hook_) hook_(from, to);
}

std::optional<double> ReputationExchange::report_value(const NodeState& reporter, NodeId subject) {
  auto it = reporter.trust_table.find(subject);
  if (it == reporter.trust_table.end() || !it->second.has_evidence()) return std::nullopt;
  return decide_recommend(reporter.behavior, it->second.direct);
}

std::optional<double> ReputationExchange::aggregate(NodeId subject) const {
  auto it = aggregates_.find(subject);
  if (it == aggregates_.end()) return std::nullopt;
  return it->second.value;
}

void ReputationExchange::collect_reports(const Network& net) {
  if (scheme_.kind != SchemeKind::Header) return;
  const NodeId header = scheme_.header;
  if (!net.contains(header) || !net.alive(header)) throw HeaderUnavailable(header);

  std::map<NodeId, std::vector<std::pair<NodeId, double>>> by_subject;
  for (const auto& reporter : net.nodes()) {
    if (!reporter.alive()) continue;
    if (reporter.id != header) {
      ++ledger_.header_report;
      send(reporter.id, header);
    }
    for (const auto& [subject, rec] : reporter.trust_table) {
      if (auto v = report_value(reporter, subject)) by_subject[subject].emplace_back(reporter.id, *v);
    }
  }

  aggregates_.clear();
  for (auto& [subject, reports] : by_subject) {
    auto filtered = filter_recommendations(reports, params_);
    if (filtered.kept.empty()) continue;
    double sum = 0.0;
    for (const auto& kv : filtered.kept) sum += kv.second;
    aggregates_[subject] = Aggregate{sum / static_cast<double>(filtered.kept.size()),
                                     std::move(filtered.rejected)};
  }
}

ReputationExchange::Gathered ReputationExchange::gather_indirect(NodeId evaluator, NodeId subject,
                                                                 const Network& net) {
  if (evaluator == subject) throw std::invalid_argument("evaluator and subject must differ");
  return scheme_.kind == SchemeKind::Flat ? gather_flat(evaluator, subject, net)
                                          : gather_header(evaluator, subject, net);
}

ReputationExchange::Gathered ReputationExchange::gather_flat(NodeId evaluator, NodeId subject,
                                                             const Network& net) {
  const NodeState& self = net.node(evaluator);
  auto trust_in = [&](NodeId j) {
    auto it = self.trust_table.find(j);
    return it == self.trust_table.end() ? TrustRecord::fresh(params_).total : it->second.total;
  };

  std::vector<std::pair<NodeId, double>> reports;
  for (NodeId j : net.neighbors(evaluator, Liveness::LiveOnly)) {
    if (j == subject || trust_in(j) < params_.threshold_recommender) continue;
    ++ledger_.reputation_request;
    send(evaluator, j);
    ++ledger_.reputation_reply;
    send(j, evaluator);
    if (auto v = report_value(net.node(j), subject)) reports.emplace_back(j, *v);
  }

  Gathered out;
  if (reports.empty()) return out;
  auto filtered = filter_recommendations(reports, params_);
  for (const auto& [j, value] : filtered.kept) {
    const std::size_t group = net.has_edge(j, subject) ? 0 : 1;
    out.recommendations.groups[group].push_back(Recommendation{j, value, trust_in(j)});
  }
  out.rejected = std::move(filtered.rejected);
  return out;
}

ReputationExchange::Gathered ReputationExchange::gather_header(NodeId evaluator, NodeId subject,
                                                               const Network& net) {
  const NodeId header = scheme_.header;
  if (!net.contains(header) || !net.alive(header)) throw HeaderUnavailable(header);
  if (evaluator != header) {
    ++ledger_.reputation_request;
    send(evaluator, header);
    ++ledger_.reputation_reply;
    send(header, evaluator);
  }
  Gathered out;
  auto it = aggregates_.find(subject);
  if (it == aggregates_.end()) return out;
  out.recommendations.groups[2].push_back(Recommendation{header, it->second.value, 1.0});
  out.rejected = it->second.rejected;
  return out;
}

MessageLedger simulate_cost(SchemeKind kind, std::uint64_t n, Scope scope) {
  if (n < 3) throw std::invalid_argument("group size must be >= 3");
  Network group(1.0, 1.0);
  for (std::uint32_t i = 0; i < n; ++i) {
    NodeState node;
    node.id = NodeId(i);
    node.energy = 1.0;
    group.add_node(std::move(node));
  }
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = i + 1; j < n; ++j) group.add_edge(NodeId(i), NodeId(j));
  }

  TrustParams params;
  params.threshold_recommender = 0.0;
  ExchangeScheme scheme{kind, NodeId(0), 0.0};
  if (kind == SchemeKind::Header) scheme = rotate_header(scheme, group, 0.0);
  ReputationExchange exchange(scheme, params);
  const NodeId header = exchange.scheme().header;

  auto subjects_of = [&](NodeId evaluator) {
    std::vector<NodeId> out;
    for (NodeId s : group.ids()) {
      if (s == evaluator) continue;
      if (kind == SchemeKind::Header && s == header) continue;
      out.push_back(s);
    }
    return out;
  };
  auto evaluators = [&]() {
    std::vector<NodeId> out;
    for (NodeId e : group.ids()) {
      if (kind == SchemeKind::Header && e == header) continue;
      out.push_back(e);
    }
    return out;
  };

  const NodeId first = evaluators().front();
  switch (scope) {
    case Scope::ReportPhase:
      exchange.collect_reports(group);
      break;
    case Scope::OnePair:
      exchange.gather_indirect(first, subjects_of(first).front(), group);
      break;
    case Scope::OneToAll:
      for (NodeId s : subjects_of(first)) exchange.gather_indirect(first, s, group);
      break;
    case Scope::AllToAll:
      exchange.collect_reports(group);
      for (NodeId e : evaluators()) {
        for (NodeId s : subjects_of(e)) exchange.gather_indirect(e, s, group);
      }
      break;
  }
  return exchange.ledger();
}

}  // namespace trustroute
