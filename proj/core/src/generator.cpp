#include "oss/generator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace oss {

namespace {

// std::mt19937_64 output is fixed by the standard; the distributions are not,
// so draws are derived from raw engine output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(Range r) { return r.lo + (r.hi - r.lo) * unit(); }
  bool bernoulli(double p) { return unit() < p; }
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(engine_() % span);
  }

 private:
  std::mt19937_64 engine_;
};

void check_range(Range r, double lo, double hi, const char* name) {
  if (!(r.lo <= r.hi) || r.lo < lo || r.hi > hi) {
    throw std::invalid_argument(std::string("invalid range for ") + name);
  }
}

}  // namespace

Instance generate_instance(const GeneratorOptions& opts) {
  if (opts.nodes < 1) throw std::invalid_argument("nodes must be >= 1");
  if (opts.branching < 1) throw std::invalid_argument("branching must be >= 1");
  if (opts.cost_min < 0 || opts.cost_max < opts.cost_min) {
    throw std::invalid_argument("invalid cost range");
  }
  if (!(opts.budget_fraction >= 0.0) || !std::isfinite(opts.budget_fraction)) {
    throw std::invalid_argument("budget fraction must be >= 0");
  }
  if (opts.max_obs_per_node < 1) throw std::invalid_argument("max_obs_per_node must be >= 1");
  check_range({opts.hypothesis_probability, opts.hypothesis_probability}, 0, 1,
              "hypothesis probability");
  check_range({opts.measurable_probability, opts.measurable_probability}, 0, 1,
              "measurable probability");
  if (opts.kind == InstanceKind::boolean) {
    check_range(opts.prior, 0, 1, "prior");
    check_range(opts.alpha, 0, 1, "alpha");
    check_range(opts.beta, 0, 1, "beta");
    check_range(opts.theta, 0, 1, "theta");
    check_range({opts.zeta_max, opts.zeta_max}, 0, 1, "zeta_max");
  } else {
    check_range(opts.edge_weight, 0, std::numeric_limits<double>::max(), "edge weight");
    check_range(opts.sigma2, std::numeric_limits<double>::min(),
                std::numeric_limits<double>::max(), "sigma2");
    check_range(opts.obs_precision, 0, std::numeric_limits<double>::max(), "obs precision");
    check_range({opts.negative_edge_probability, opts.negative_edge_probability}, 0, 1,
                "negative edge probability");
  }

  Rng rng(opts.seed);
  Instance::Spec spec;
  spec.kind = opts.kind;
  spec.max_obs_per_node = opts.max_obs_per_node;
  spec.zeta_max = opts.zeta_max;
  spec.reward_range = opts.reward_range;

  std::vector<std::size_t> child_count(opts.nodes, 0);
  std::size_t measurable = 0;
  std::int64_t measurable_cost = 0;
  for (std::size_t i = 0; i < opts.nodes; ++i) {
    Node node;
    node.id = NodeId(static_cast<std::uint32_t>(i + 1));
    if (i > 0) {
      std::vector<std::size_t> open;
      for (std::size_t j = 0; j < i; ++j) {
        if (child_count[j] < opts.branching) open.push_back(j);
      }
      const auto pick = open[static_cast<std::size_t>(rng.integer(0, open.size() - 1))];
      ++child_count[pick];
      node.parent = NodeId(static_cast<std::uint32_t>(pick + 1));
    }
    node.hypothesis = opts.knapsack || rng.bernoulli(opts.hypothesis_probability);
    const bool may_measure =
        opts.kind == InstanceKind::gaussian || node.hypothesis;  // X_M within X_H for boolean
    const bool capped = opts.max_measurable && measurable >= *opts.max_measurable;
    node.measurable = may_measure && !capped && rng.bernoulli(opts.measurable_probability);
    node.cost = rng.integer(opts.cost_min, opts.cost_max);
    if (node.measurable) {
      ++measurable;
      measurable_cost += node.cost;
    }

    if (opts.kind == InstanceKind::boolean) {
      BooleanParams p;
      if (!node.parent || opts.knapsack) {
        p.alpha = p.beta = rng.uniform(opts.prior);
      } else {
        p.alpha = rng.uniform(opts.alpha);
        p.beta = rng.uniform(opts.beta);
      }
      if (node.measurable) {
        p.theta = rng.uniform(opts.theta);
        p.zeta = rng.uniform({0.0, opts.zeta_max});
      }
      node.params = p;
    } else {
      GaussianParams p;
      if (node.parent && !opts.knapsack) {
        p.a = rng.uniform(opts.edge_weight);
        if (rng.bernoulli(opts.negative_edge_probability)) p.a = -p.a;
      }
      p.sigma2 = rng.uniform(opts.sigma2);
      if (node.measurable) p.theta = rng.uniform(opts.obs_precision);
      node.params = p;
    }
    spec.nodes.push_back(std::move(node));
  }

  if (std::none_of(spec.nodes.begin(), spec.nodes.end(),
                   [](const Node& n) { return n.hypothesis; })) {
    spec.nodes.front().hypothesis = true;
  }
  spec.budget = std::llround(opts.budget_fraction * static_cast<double>(measurable_cost));
  return Instance(std::move(spec));
}

}  // namespace oss
