#include "fixtures.hpp"

#include "oss/oracle.hpp"

namespace oss::testing {

std::filesystem::path fixture_path(const std::string& name) {
  return std::filesystem::path(OSS_FIXTURE_DIR) / name;
}

Node boolean_node(std::uint32_t id, std::optional<std::uint32_t> parent, BooleanParams params,
                  bool hypothesis, bool measurable, std::int64_t cost) {
  Node n;
  n.id = NodeId(id);
  if (parent) n.parent = NodeId(*parent);
  n.hypothesis = hypothesis;
  n.measurable = measurable;
  n.cost = cost;
  n.params = params;
  return n;
}

Node gaussian_node(std::uint32_t id, std::optional<std::uint32_t> parent, GaussianParams params,
                   bool hypothesis, bool measurable, std::int64_t cost) {
  Node n;
  n.id = NodeId(id);
  if (parent) n.parent = NodeId(*parent);
  n.hypothesis = hypothesis;
  n.measurable = measurable;
  n.cost = cost;
  n.params = params;
  return n;
}

Instance single_boolean_root(double prior, double theta, std::int64_t cost, std::int64_t budget) {
  Instance::Spec s;
  s.budget = budget;
  s.nodes.push_back(boolean_node(1, std::nullopt, {prior, prior, theta, 0.0}, true, true, cost));
  return Instance(std::move(s));
}

Instance two_independent_hypotheses(std::int64_t budget) {
  Instance::Spec s;
  s.budget = budget;
  s.nodes.push_back(boolean_node(1, std::nullopt, {0.6, 0.6, 0.0, 0.0}, true, true, 1));
  s.nodes.push_back(boolean_node(2, 1, {0.5, 0.5, 0.0, 0.0}, true, true, 1));
  return Instance(std::move(s));
}

Instance boolean_pair() {
  Instance::Spec s;
  s.budget = 1;
  s.nodes.push_back(boolean_node(1, std::nullopt, {0.6, 0.6, 1.0, 0.0}, true, false, 0));
  s.nodes.push_back(boolean_node(2, 1, {0.7, 0.2, 0.0, 0.0}, true, true, 1));
  return Instance(std::move(s));
}

Instance gaussian_chain(std::size_t n, std::int64_t budget, RewardRange range) {
  Instance::Spec s;
  s.kind = InstanceKind::gaussian;
  s.budget = budget;
  s.reward_range = range;
  for (std::uint32_t i = 1; i <= n; ++i) {
    std::optional<std::uint32_t> parent;
    if (i > 1) parent = i - 1;
    s.nodes.push_back(gaussian_node(i, parent, {1.0, 1.0, i == 1 ? 0.0 : 1.0, std::nullopt}, true,
                                    i > 1, 1));
  }
  return Instance(std::move(s));
}

Instance knapsack_instance(const std::vector<std::int64_t>& costs,
                           const std::vector<double>& priors, std::int64_t budget) {
  Instance::Spec s;
  s.budget = budget;
  for (std::uint32_t i = 1; i <= costs.size(); ++i) {
    std::optional<std::uint32_t> parent;
    if (i > 1) parent = 1;
    const double prior = priors[i - 1];
    s.nodes.push_back(boolean_node(i, parent, {prior, prior, 0.0, 0.0}, true, true, costs[i - 1]));
  }
  return Instance(std::move(s));
}

Instance random_instance(InstanceKind kind, std::mt19937_64& rng, std::size_t n_min,
                         std::size_t n_max, double zeta_max) {
  GeneratorOptions o;
  o.kind = kind;
  o.nodes = std::uniform_int_distribution<std::size_t>(n_min, n_max)(rng);
  o.branching = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
  o.seed = rng();
  o.budget_fraction = std::uniform_real_distribution<double>(0.2, 0.8)(rng);
  o.zeta_max = zeta_max;
  o.max_obs_per_node = std::uniform_int_distribution<std::uint32_t>(1, 2)(rng);
  o.max_measurable = 7;
  return generate_instance(o);
}

ObservationPlan random_plan(const Instance& inst, std::mt19937_64& rng) {
  ObservationPlan plan;
  for (const Node& node : inst.nodes()) {
    const std::uint32_t cap = inst.max_observations(node.id);
    if (cap == 0) continue;
    plan.set(node.id, std::uniform_int_distribution<std::uint32_t>(0, cap)(rng));
  }
  return plan;
}

Instance with_auto_range(const Instance& inst) {
  const PrecisionSpan span = gaussian_precision_span(inst);
  auto spec = inst.spec();
  spec.reward_range = {0.1 * span.min_precision, 2.0 * span.max_precision};
  return Instance(std::move(spec));
}

}  // namespace oss::testing
