#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "trustroute/metrics.hpp"
#include "trustroute/scenario.hpp"

namespace trustroute {

struct CompareCell {
  Variant variant = Variant::Combined;
  std::uint64_t seed = 0;
  RunMetrics metrics;
};

struct VariantSummary {
  double mean_pdr = 0.0;
  double mean_energy = 0.0;
  std::optional<double> mean_first_death;  // over runs in which a node died
};

struct CompareResult {
  std::vector<CompareCell> cells;  // variant-major, in the order requested
  std::map<Variant, VariantSummary> summary;
};

/// Runs every (variant, seed) cell. Within a seed all variants share the
/// network and behavior assignment; only the routing variant differs.
/// Cells run concurrently on up to `threads` workers (0: hardware concurrency).
CompareResult compare_variants(const ScenarioConfig& base, std::span<const Variant> variants,
                               std::span<const std::uint64_t> seeds, unsigned threads = 0);

/// variant,seed,pdr,energy,first_death then one "mean" row per variant.
std::string compare_csv(const CompareResult& result);

/// n,scheme,scope,predicted,simulated for every n in [n_min, n_max].
std::string costs_csv(std::uint64_t n_min, std::uint64_t n_max);

/// RouteTable for the scenario's source and sink, with path trust from the
/// source's view after simulating up to `at` seconds (0: initial trust).
nlohmann::json route_table(const ScenarioConfig& config, const std::set<NodeId>& excluded, Seconds at = 0.0);

}  // namespace trustroute
