#include <optional>

#include "oracle_internal.hpp"
#include "oss/error.hpp"
#include "oss/oracle.hpp"

namespace oss {

SubsetEval eval_exact(const Instance& inst, const ObservationPlan& plan,
                      const OracleLimits& limits) {
  return inst.kind() == InstanceKind::boolean ? boss_eval_exact(inst, plan, limits)
                                              : goss_eval_exact(inst, plan, limits);
}

SubsetEval brute_force_optimum(const Instance& inst, const OracleLimits& limits) {
  std::vector<NodeId> measurable;
  std::uint64_t plans = 1;
  for (const Node& node : inst.nodes()) {
    if (!node.measurable) continue;
    measurable.push_back(node.id);
    plans *= inst.max_obs_per_node() + 1ULL;
    if (plans > limits.max_plans) {
      throw GuardError("brute force: more than " + std::to_string(limits.max_plans) + " plans");
    }
  }

  std::optional<detail::BooleanJoint> joint;
  if (inst.kind() == InstanceKind::boolean) joint.emplace(inst, limits);
  auto score = [&](const ObservationPlan& plan) {
    if (joint) {
      if (plan.total_observations() > limits.boolean_max_observations) {
        throw GuardError("brute force: plan exceeds the boolean observation guard");
      }
      return detail::boolean_expected_reward(inst, *joint, plan);
    }
    return goss_eval_exact(inst, plan, limits).exact_reward;
  };

  std::optional<SubsetEval> best;
  std::vector<std::uint32_t> counts(measurable.size(), 0);
  ObservationPlan plan;
  std::int64_t time = 0;
  while (true) {
    if (time <= inst.budget()) {
      const double reward = score(plan);
      if (!best || reward > best->exact_reward ||
          (reward == best->exact_reward && plan < best->plan)) {
        best = SubsetEval{plan, time, reward};
      }
    }
    // Odometer over per-node counts.
    std::size_t i = 0;
    for (; i < measurable.size(); ++i) {
      const std::int64_t cost = inst.node(measurable[i]).cost;
      if (counts[i] < inst.max_obs_per_node()) {
        ++counts[i];
        time += cost;
        plan.set(measurable[i], counts[i]);
        break;
      }
      time -= cost * counts[i];
      counts[i] = 0;
      plan.set(measurable[i], 0);
    }
    if (i == measurable.size()) break;
  }
  return *best;
}

}  // namespace oss
