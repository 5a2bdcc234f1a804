/// \file generator.hpp
/// Seeded random instances for tests, benchmarks and the `gen` subcommand.

#pragma once

#include <cstdint>
#include <optional>

#include "oss/model.hpp"

namespace oss {

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

struct GeneratorOptions {
  InstanceKind kind = InstanceKind::boolean;
  std::size_t nodes = 8;
  std::size_t branching = 2;  ///< maximum children per node
  std::uint64_t seed = 0;
  std::int64_t cost_min = 1;
  std::int64_t cost_max = 5;
  double budget_fraction = 0.5;
  std::uint32_t max_obs_per_node = 1;
  double hypothesis_probability = 0.7;
  double measurable_probability = 0.6;
  /// Caps the number of measurable nodes (keeps brute-force oracles tractable).
  std::optional<std::size_t> max_measurable;
  /// Independent nodes with heterogeneous costs, mirroring a knapsack instance.
  bool knapsack = false;

  // boolean
  Range prior{0.05, 0.6};
  Range alpha{0.3, 0.95};
  Range beta{0.01, 0.4};
  Range theta{0.0, 0.3};
  double zeta_max = 0.0;

  // gaussian
  Range edge_weight{0.4, 1.4};
  double negative_edge_probability = 0.3;
  Range sigma2{0.5, 2.0};
  Range obs_precision{0.5, 4.0};
  RewardRange reward_range{0.1, 100.0};
};

/// Deterministic in `opts`. Throws std::invalid_argument on bad ranges.
Instance generate_instance(const GeneratorOptions& opts);

}  // namespace oss
