#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "trustroute/topology.hpp"
#include "trustroute/trust.hpp"

namespace trustroute {

enum class SchemeKind { Flat, Header };

struct ExchangeScheme {
  SchemeKind kind = SchemeKind::Header;
  NodeId header{0};
  /// Seconds between header rotations; 0 keeps the header fixed.
  Seconds rotation_period = 0.0;
};

enum class Scope { OnePair, OneToAll, AllToAll, ReportPhase };

const char* scheme_name(SchemeKind kind);
const char* scope_name(Scope scope);

struct MessageLedger {
  std::uint64_t reputation_request = 0;
  std::uint64_t reputation_reply = 0;
  std::uint64_t header_report = 0;

  std::uint64_t total() const { return reputation_request + reputation_reply + header_report; }
  MessageLedger& operator+=(const MessageLedger& other);
};

/// Closed-form packet counts for a group of n >= 3 nodes. Flat has no report
/// phase (0). Header AllToAll includes the report phase; OnePair and OneToAll
/// do not. Throws std::invalid_argument for n < 3.
std::uint64_t predicted_cost(SchemeKind kind, std::uint64_t n, Scope scope);

/// Raised when the header scheme needs a header that is no longer alive.
class HeaderUnavailable : public std::runtime_error {
 public:
  explicit HeaderUnavailable(NodeId header)
      : std::runtime_error("header node " + to_string(header) + " is dead; rotate the header"),
        header_(header) {}
  NodeId header() const { return header_; }

 private:
  NodeId header_;
};

/// Live node with the most residual energy (ties: smallest id). Throws
/// std::runtime_error when no node is alive.
NodeId elect_header(const Network& net);

/// New scheme whose header is elect_header(net); aggregates stay with the
/// exchange object, so handover costs nothing.
ExchangeScheme rotate_header(const ExchangeScheme& scheme, const Network& net, Seconds now);

/// Reputation dissemination for one simulation context: flat pairwise
/// requests or header aggregation, with every packet counted in the ledger.
class ReputationExchange {
 public:
  using MessageHook = std::function<void(NodeId from, NodeId to)>;

  struct Gathered {
    RecommendationSet recommendations;
    std::vector<NodeId> rejected;  // recommenders flagged by the deviation filter
  };

  ReputationExchange(ExchangeScheme scheme, TrustParams params);

  const ExchangeScheme& scheme() const { return scheme_; }
  void set_scheme(const ExchangeScheme& scheme) { scheme_ = scheme; }
  const MessageLedger& ledger() const { return ledger_; }
  void set_message_hook(MessageHook hook) { hook_ = std::move(hook); }

  /// Header scheme: every live non-header node sends one report; the header
  /// rebuilds its per-subject aggregates. No-op under Flat.
  void collect_reports(const Network& net);

  /// Indirect-trust evidence about `subject` as seen by `evaluator`.
  Gathered gather_indirect(NodeId evaluator, NodeId subject, const Network& net);

  /// Value `reporter` would send about `subject`, or nullopt when it has no
  /// first-hand evidence about it.
  static std::optional<double> report_value(const NodeState& reporter, NodeId subject);

  /// Header's current aggregate for `subject`, if any.
  std::optional<double> aggregate(NodeId subject) const;

 private:
  struct Aggregate {
    double value = 0.0;
    std::vector<NodeId> rejected;
  };

  void send(NodeId from, NodeId to);
  Gathered gather_flat(NodeId evaluator, NodeId subject, const Network& net);
  Gathered gather_header(NodeId evaluator, NodeId subject, const Network& net);

  ExchangeScheme scheme_;
  TrustParams params_;
  MessageLedger ledger_;
  MessageHook hook_;
  std::map<NodeId, Aggregate> aggregates_;
};

/// Runs the exchange protocol on a fully connected group of n nodes, with
/// recommender thresholding disabled, for the given scope and returns the
/// packets actually sent.
MessageLedger simulate_cost(SchemeKind kind, std::uint64_t n, Scope scope);

}  // namespace trustroute
