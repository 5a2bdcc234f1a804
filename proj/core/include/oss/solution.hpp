/// \file solution.hpp
/// Solver results and their JSON documents.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "oss/model.hpp"

namespace oss {

inline constexpr int kFormatVersion = 1;

struct Solution {
  InstanceKind kind = InstanceKind::boolean;
  ObservationPlan plan;
  std::int64_t time_used = 0;
  double predicted_reward = 0.0;
  std::optional<double> exact_reward;
  double delta_u_bound = 0.0;
  /// Grid steps actually used, e.g. {"eps_p", 0.01}.
  std::vector<std::pair<std::string, double>> grids_used;
  std::size_t root_table_cells = 0;
  std::int64_t solver_millis = 0;
};

/// Exact expected reward of one plan.
struct SubsetEval {
  ObservationPlan plan;
  std::int64_t time = 0;
  double exact_reward = 0.0;
};

struct WriteOptions {
  /// Writes solver_millis as 0 so repeated runs produce identical bytes.
  bool omit_timing = false;
};

std::string solution_to_json(const Solution& s, WriteOptions opts = {});
Solution solution_from_json(std::string_view text);

std::string subset_eval_to_json(const SubsetEval& e);
SubsetEval subset_eval_from_json(std::string_view text);

}  // namespace oss
