#include "trustroute/metrics.hpp"

#include <fmt/format.h>

namespace trustroute {

std::string format_number(double v) { return fmt::format("{}", v); }

nlohmann::json summary_json(const RunMetrics& m) {
  nlohmann::json per_node = nlohmann::json::object();
  for (const auto& [id, nm] : m.per_node) {
    per_node[to_string(id)] = {{"energy_used", nm.energy_used}, {"final_total_trust", nm.final_total_trust}};
  }
  nlohmann::json history = nlohmann::json::array();
  for (const auto& change : m.route_history) {
    nlohmann::json hops = nlohmann::json::array();
    for (NodeId h : change.route.hops) hops.push_back(h.value);
    history.push_back({{"time", change.time}, {"hops", hops}, {"pt", change.route.path_trust}});
  }
  nlohmann::json out = {
      {"generated", m.generated},
      {"delivered", m.delivered},
      {"dropped", m.dropped},
      {"in_flight", m.in_flight},
      {"no_route", m.no_route},
      {"pdr", m.pdr},
      {"total_energy", m.total_energy},
      {"first_death_time", nullptr},
      {"ledger",
       {{"reputation_request", m.ledger.reputation_request},
        {"reputation_reply", m.ledger.reputation_reply},
        {"header_report", m.ledger.header_report},
        {"total", m.ledger.total()}}},
      {"per_node", per_node},
      {"route_history", history},
  };
  if (m.first_death_time) out["first_death_time"] = *m.first_death_time;
  return out;
}

std::string intervals_csv(const RunMetrics& m) {
  std::string out = "time,pdr,total_energy,live_nodes,chosen_route_pt\n";
  for (const auto& s : m.intervals) {
    out += fmt::format("{},{},{},{},{}\n", format_number(s.time), format_number(s.pdr),
                       format_number(s.total_energy), s.live_nodes,
                       s.chosen_route_pt ? format_number(*s.chosen_route_pt) : std::string());
  }
  return out;
}

}  // namespace trustroute
