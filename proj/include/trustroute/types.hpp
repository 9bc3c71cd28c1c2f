#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <random>
#include <string>

namespace trustroute {

/// Identifier of a sensor node. Unique within a network and stable for a run.
struct NodeId {
  std::uint32_t value = 0;

  constexpr NodeId() = default;
  constexpr explicit NodeId(std::uint32_t v) : value(v) {}

  friend constexpr auto operator<=>(NodeId, NodeId) = default;
};

inline std::string to_string(NodeId id) { return std::to_string(id.value); }

/// Simulation time in seconds.
using Seconds = double;

// splitmix64 finalizer, used to derive independent stream seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seeded random stream. Output is bit-identical across platforms: the
/// engine is mt19937_64 and the real conversion is done here rather than
/// through std::uniform_real_distribution.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Stream `stream` derived from a master seed (e.g. one per node).
  static Rng derive(std::uint64_t master, std::uint64_t stream) {
    return Rng(mix_seed(mix_seed(master) ^ mix_seed(stream + 0x5851f42d4c957f2dULL)));
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound) {
    // Lemire-style rejection keeps the result unbiased.
    const std::uint64_t limit = std::uint64_t(-1) - (std::uint64_t(-1) % bound);
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return x % bound;
  }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace trustroute

template <>
struct std::hash<trustroute::NodeId> {
  std::size_t operator()(trustroute::NodeId id) const noexcept {
    return std::hash<std::uint32_t>{}(id.value);
  }
};
