// trustroute: command-line front end for the trust-aware routing simulator.
//
//   trustroute run      --scenario FILE [--seed N] [--variant NAME] [--out DIR]
//   trustroute compare  --scenario FILE [--seed N]... [--variant NAME]... [--out DIR]
//   trustroute routes   --scenario FILE [--exclude ID]... [--at SECONDS] [--hop-limit N]
//   trustroute costs    --n-min N --n-max N
//
// Exit codes: 0 ok, 2 usage or scenario schema error, 3 runtime failure.
// TRUSTROUTE_LOG selects the log level (trace, debug, info, warn, error, off).

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "trustroute/report.hpp"
#include "trustroute/scenario.hpp"
#include "trustroute/simulator.hpp"

namespace fs = std::filesystem;
using namespace trustroute;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("trustroute");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("TRUSTROUTE_LOG")) {
    spdlog::set_level(spdlog::level::from_str(env));
  }
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();

  CLI::App app{"Trust-aware routing simulator for wireless sensor networks"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> variant_names;
  std::vector<std::uint32_t> excluded_ids;
  std::string out_dir = ".";
  double at = 0.0;
  std::uint64_t n_min = 3, n_max = 20;

  auto* run_cmd = app.add_subcommand("run", "Run one scenario and write summary.json + intervals.csv");
  run_cmd->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  run_cmd->add_option("--seed", seeds, "Override rng_seed");
  run_cmd->add_option("--variant", variant_names, "Override the routing variant");
  run_cmd->add_option("--out", out_dir, "Output directory");

  auto* compare_cmd = app.add_subcommand("compare", "Run every (variant, seed) pair and emit a comparison CSV");
  compare_cmd->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  compare_cmd->add_option("--seed", seeds, "Seed (repeatable); defaults to the scenario's rng_seed");
  compare_cmd->add_option("--variant", variant_names, "no_trust, direct_only or combined (repeatable)");
  compare_cmd->add_option("--out", out_dir, "Output directory");

  auto* routes_cmd = app.add_subcommand("routes", "Print the route table for the scenario's source and sink");
  routes_cmd->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  routes_cmd->add_option("--exclude", excluded_ids, "Node id to remove (repeatable)");
  routes_cmd->add_option("--at", at, "Simulate up to this time before ranking routes");
  std::size_t hop_limit = 0;
  routes_cmd->add_option("--hop-limit", hop_limit, "Skip routes longer than this (large graphs have very many)");

  auto* costs_cmd = app.add_subcommand("costs", "Predicted vs simulated reputation-exchange packet counts");
  costs_cmd->add_option("--n-min", n_min, "Smallest group size (>= 3)");
  costs_cmd->add_option("--n-max", n_max, "Largest group size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*costs_cmd) {
      if (n_min < 3 || n_max < n_min) {
        std::cerr << "costs: need 3 <= --n-min <= --n-max\n";
        return kExitUsage;
      }
      std::cout << costs_csv(n_min, n_max);
      return 0;
    }

    ScenarioConfig config = load_scenario(scenario_path);

    if (*run_cmd) {
      if (seeds.size() > 1 || variant_names.size() > 1) {
        std::cerr << "run: at most one --seed and one --variant\n";
        return kExitUsage;
      }
      if (!seeds.empty()) config.rng_seed = seeds.front();
      if (!variant_names.empty()) config.variant = variant_from_name(variant_names.front());
      const RunMetrics m = run(config);
      const std::string summary = summary_json(m).dump(2) + "\n";
      write_file(fs::path(out_dir) / "summary.json", summary);
      write_file(fs::path(out_dir) / "intervals.csv", intervals_csv(m));
      std::cout << summary;
      return 0;
    }

    if (*compare_cmd) {
      std::vector<Variant> variants;
      if (variant_names.empty()) variant_names = {"no_trust", "direct_only", "combined"};
      for (const auto& name : variant_names) variants.push_back(variant_from_name(name));
      if (variants.size() < 2) {
        std::cerr << "compare: need at least two variants\n";
        return kExitUsage;
      }
      if (seeds.empty()) seeds.push_back(config.rng_seed);
      const std::string csv = compare_csv(compare_variants(config, variants, seeds));
      write_file(fs::path(out_dir) / "compare.csv", csv);
      std::cout << csv;
      return 0;
    }

    if (*routes_cmd) {
      std::set<NodeId> excluded;
      for (auto id : excluded_ids) excluded.insert(NodeId(id));
      if (hop_limit > 0) config.hop_limit = hop_limit;
      std::cout << route_table(config, excluded, at).dump(2) << "\n";
      return 0;
    }
  } catch (const ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
