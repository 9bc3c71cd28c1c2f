#include "trustroute/report.hpp"

#include <algorithm>
#include <future>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

#include "trustroute/exchange.hpp"
#include "trustroute/routing.hpp"
#include "trustroute/simulator.hpp"

namespace trustroute {

CompareResult compare_variants(const ScenarioConfig& base, std::span<const Variant> variants,
                               std::span<const std::uint64_t> seeds, unsigned threads) {
  if (variants.size() < 2) throw std::invalid_argument("compare needs at least two variants");
  if (seeds.empty()) throw std::invalid_argument("compare needs at least one seed");

  CompareResult result;
  for (Variant v : variants) {
    for (std::uint64_t s : seeds) result.cells.push_back({v, s, {}});
  }

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  std::size_t next = 0;
  while (next < result.cells.size()) {
    std::vector<std::future<void>> batch;
    for (unsigned w = 0; w < threads && next < result.cells.size(); ++w, ++next) {
      CompareCell* cell = &result.cells[next];
      batch.push_back(std::async(std::launch::async, [cell, &base] {
        ScenarioConfig cfg = base;
        cfg.rng_seed = cell->seed;
        cfg.variant = cell->variant;
        cell->metrics = run(cfg);
      }));
    }
    for (auto& f : batch) f.get();
  }

  for (Variant v : variants) {
    VariantSummary s;
    double death_sum = 0.0;
    std::size_t runs = 0, deaths = 0;
    for (const auto& c : result.cells) {
      if (c.variant != v) continue;
      ++runs;
      s.mean_pdr += c.metrics.pdr;
      s.mean_energy += c.metrics.total_energy;
      if (c.metrics.first_death_time) {
        ++deaths;
        death_sum += *c.metrics.first_death_time;
      }
    }
    s.mean_pdr /= static_cast<double>(runs);
    s.mean_energy /= static_cast<double>(runs);
    if (deaths > 0) s.mean_first_death = death_sum / static_cast<double>(deaths);
    result.summary[v] = s;
  }
  return result;
}

std::string compare_csv(const CompareResult& result) {
  std::string out = "variant,seed,pdr,energy,first_death\n";
  for (const auto& c : result.cells) {
    const auto& m = c.metrics;
    out += fmt::format("{},{},{},{},{}\n", variant_name(c.variant), c.seed, format_number(m.pdr),
                       format_number(m.total_energy),
                       m.first_death_time ? format_number(*m.first_death_time) : std::string());
  }
  std::vector<Variant> order;
  for (const auto& c : result.cells) {
    if (std::find(order.begin(), order.end(), c.variant) == order.end()) order.push_back(c.variant);
  }
  for (Variant v : order) {
    const auto& s = result.summary.at(v);
    out += fmt::format("{},mean,{},{},{}\n", variant_name(v), format_number(s.mean_pdr),
                       format_number(s.mean_energy),
                       s.mean_first_death ? format_number(*s.mean_first_death) : std::string());
  }
  return out;
}

std::string costs_csv(std::uint64_t n_min, std::uint64_t n_max) {
  if (n_min < 3 || n_max < n_min) throw std::invalid_argument("need 3 <= n_min <= n_max");
  std::string out = "n,scheme,scope,predicted,simulated\n";
  const Scope flat_scopes[] = {Scope::OnePair, Scope::OneToAll, Scope::AllToAll};
  const Scope header_scopes[] = {Scope::ReportPhase, Scope::OnePair, Scope::OneToAll, Scope::AllToAll};
  for (std::uint64_t n = n_min; n <= n_max; ++n) {
    for (Scope s : flat_scopes) {
      out += fmt::format("{},{},{},{},{}\n", n, scheme_name(SchemeKind::Flat), scope_name(s),
                         predicted_cost(SchemeKind::Flat, n, s), simulate_cost(SchemeKind::Flat, n, s).total());
    }
    for (Scope s : header_scopes) {
      out += fmt::format("{},{},{},{},{}\n", n, scheme_name(SchemeKind::Header), scope_name(s),
                         predicted_cost(SchemeKind::Header, n, s), simulate_cost(SchemeKind::Header, n, s).total());
    }
  }
  return out;
}

nlohmann::json route_table(const ScenarioConfig& config, const std::set<NodeId>& excluded, Seconds at) {
  Network net = build_network(config);
  TrustMap view;
  if (net.connected(config.source, config.sink)) {
    Simulator sim(config, net);
    if (at > 0.0) sim.run_until(at);
    net = sim.network();
    view = sim.trust_view();
  } else {
    for (NodeId id : net.ids()) view[id] = config.trust.initial_trust;
  }
  for (NodeId id : excluded) {
    if (id == config.source || id == config.sink) throw std::invalid_argument("cannot exclude source or sink");
    if (!net.contains(id)) throw std::invalid_argument("cannot exclude unknown node " + to_string(id));
  }
  EnumerateOptions options;
  options.excluded = excluded;
  options.hop_limit = config.hop_limit;
  auto routes = enumerate_routes(net, config.source, config.sink, options);
  for (auto& r : routes) r.path_trust = path_trust(r, view);
  sort_route_table(routes);
  return routes_to_json(routes);
}

}  // namespace trustroute
