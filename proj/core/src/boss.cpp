#include "oss/boss.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "oss/error.hpp"
#include "oss/operators.hpp"
#include "tree_compiler.hpp"

namespace oss {

BossGrids::BossGrids(double eps_p, double eps_f, double eps_g, double eps_r)
    : p_(GridSpec::uniform(eps_p)),
      f_(GridSpec::uniform(eps_f)),
      g_(GridSpec::uniform(eps_g)),
      r_(GridSpec::uniform(eps_r)) {}

BossGrids BossGrids::recipe(const Instance& inst, double epsilon) {
  OSS_EXPECTS(epsilon > 0.0 && epsilon < 1.0, "epsilon must lie in (0, 1)");
  const auto stats = tree_stats(inst);
  const double h = static_cast<double>(std::max<std::size_t>(stats.h, 1));
  const double n = static_cast<double>(stats.n);
  return BossGrids(epsilon / (3.0 * h), epsilon / (6.0 * n), epsilon / (6.0 * n), epsilon / 3.0);
}

BossQuality boss_psi_leaf(double p, std::uint32_t m, const BooleanParams& node, bool hypothesis) {
  double unused = 0.0;
  return boss_psi_internal(p, m, node, hypothesis, {}, {}, std::span<double>(&unused, 0));
}

BossQuality boss_psi_internal(double p, std::uint32_t m, const BooleanParams& node,
                              bool hypothesis, std::span<const BooleanEdge> edges,
                              std::span<const BossQuality> children, std::span<double> child_p,
                              MessageRule rule) {
  const std::size_t k = children.size();
  OSS_EXPECTS(edges.size() == k && child_p.size() == k, "boss_psi_internal: arity mismatch");

  // Likelihood of all-negative readings at this node given X = 1 / X = 0.
  const double own_f = std::pow(node.theta, static_cast<double>(m));
  const double own_g = std::pow(1.0 - node.zeta, static_cast<double>(m));

  auto f_prime = [&](std::size_t i) { return lerp(children[i].f, children[i].g, edges[i].alpha); };
  auto g_prime = [&](std::size_t i) { return lerp(children[i].f, children[i].g, edges[i].beta); };

  BossQuality q{own_f, own_g, 0.0};
  for (std::size_t i = 0; i < k; ++i) {
    q.f *= f_prime(i);
    q.g *= g_prime(i);
  }

  if (hypothesis) {
    const double denom = lerp(q.f, q.g, p);
    q.r = denom > 0.0 ? p * q.f / denom : 0.0;
  }
  for (std::size_t i = 0; i < k; ++i) q.r = std::max(q.r, children[i].r);

  for (std::size_t i = 0; i < k; ++i) {
    double a = own_f;
    double b = own_g;
    for (std::size_t j = 0; j < k; ++j) {
      if (j == i) continue;
      a *= f_prime(j);
      b *= g_prime(j);
    }
    const double denom = lerp(a, b, p);
    if (!(denom > 0.0)) {
      child_p[i] = 0.0;
    } else if (rule == MessageRule::consistent) {
      child_p[i] = (edges[i].alpha * p * a + edges[i].beta * (1.0 - p) * b) / denom;
    } else {
      child_p[i] = lerp(edges[i].alpha, edges[i].beta, p * a) / denom;
    }
  }
  return q;
}

namespace {

struct BossTraits {
  using Quality = BossQuality;
  static constexpr std::size_t kInside = 2;

  const Instance& inst;
  const BossGrids* grids_;  // null when only evaluating plans
  MessageRule rule;
  std::vector<std::vector<BooleanEdge>> edges;

  BossTraits(const Instance& i, const BossGrids* g, MessageRule r)
      : inst(i), grids_(g), rule(r), edges(i.size()) {
    for (const Node& node : inst.nodes()) {
      for (NodeId c : inst.children(node.id)) {
        const auto& cp = inst.boolean(c);
        edges[node.id.index()].push_back({cp.alpha, cp.beta});
      }
    }
  }

  std::vector<GridSpec> grids() const { return {grids_->p(), grids_->f(), grids_->g(), grids_->r()}; }
  Quality child_quality(const std::array<double, 2>& in) const { return {in[0], in[1], 0.0}; }
  Quality local(NodeId s, double p, std::uint32_t m, std::span<const Quality> kids,
                std::span<double> child_p) const {
    const Node& node = inst.node(s);
    return boss_psi_internal(p, m, inst.boolean(s), node.hypothesis, edges[s.index()], kids,
                             child_p, rule);
  }
  std::array<double, 2> inside(const Quality& q) const { return {q.f, q.g}; }
  double r(const Quality& q) const { return q.r; }
  double fold_r(double acc, double child_r) const { return std::max(acc, child_r); }
};

void require_boolean(const Instance& inst) {
  OSS_EXPECTS(inst.kind() == InstanceKind::boolean, "boolean solver needs a boolean instance");
}

}  // namespace

BossPlanEvaluation boss_evaluate_plan(const Instance& inst, const ObservationPlan& plan,
                                      MessageRule rule) {
  require_boolean(inst);
  inst.plan_time(plan);  // validates the plan
  BossTraits traits(inst, nullptr, rule);

  BossPlanEvaluation out;
  out.nodes.resize(inst.size());
  std::vector<BossQuality> kids;
  std::vector<double> child_p;
  auto gather = [&](NodeId s) {
    kids.clear();
    for (NodeId c : inst.children(s)) kids.push_back(out.nodes[c.index()].q);
    child_p.assign(kids.size(), 0.0);
  };

  // f and g do not depend on p.
  for (NodeId s : inst.postorder()) {
    gather(s);
    out.nodes[s.index()].q = traits.local(s, 0.0, plan.count(s), kids, child_p);
  }
  out.nodes[kRoot.index()].p = inst.boolean(kRoot).alpha;
  for (NodeId s : inst.preorder()) {
    gather(s);
    traits.local(s, out.nodes[s.index()].p, plan.count(s), kids, child_p);
    const auto cs = inst.children(s);
    for (std::size_t i = 0; i < cs.size(); ++i) out.nodes[cs[i].index()].p = child_p[i];
  }
  for (NodeId s : inst.postorder()) {
    gather(s);
    out.nodes[s.index()].q = traits.local(s, out.nodes[s.index()].p, plan.count(s), kids, child_p);
  }

  const auto& root = out.nodes[kRoot.index()].q;
  out.negative_probability = lerp(root.f, root.g, inst.boolean(kRoot).alpha);
  out.expected_reward = lerp(root.r, 1.0, out.negative_probability);
  return out;
}

ProfileTable boss_compile(const Instance& inst, const BossGrids& grids, const CompileOptions& opts,
                          CompileStats* stats) {
  require_boolean(inst);
  BossTraits traits(inst, &grids, opts.rule);
  return detail::compile_tree(inst, traits, opts, stats);
}

double boss_utility(const CondPerf& cp, double alpha1, std::int64_t budget,
                    const BossGrids& grids) {
  if (cp.p_cell() != grids.p().discretize(alpha1) || cp.time > budget) {
    return -std::numeric_limits<double>::infinity();
  }
  const double f = grids.f().representative(cp.q_cell(0));
  const double g = grids.g().representative(cp.q_cell(1));
  const double r = grids.r().representative(cp.q_cell(2));
  return lerp(r, 1.0, lerp(f, g, alpha1));
}

double boss_delta_bound(const Instance& inst, const BossGrids& grids) {
  const auto stats = tree_stats(inst);
  const double h = static_cast<double>(std::max<std::size_t>(stats.h, 1));
  const double n = static_cast<double>(stats.n);
  return h * grids.p().eps() + 2.0 * n * std::max(grids.f().eps(), grids.g().eps()) +
         grids.r().eps() + n * inst.zeta_max();
}

Solution boss_solve(const Instance& inst, const BossGrids& grids, const CompileOptions& opts,
                    CompileStats* stats) {
  const auto start = std::chrono::steady_clock::now();
  const ProfileTable table = boss_compile(inst, grids, opts, stats);
  const double alpha1 = inst.boolean(kRoot).alpha;
  auto [best, utility] = detail::select_best(table, [&](const CondPerf& cp) {
    return boss_utility(cp, alpha1, inst.budget(), grids);
  });
  // The empty plan is always affordable, so a feasible entry exists.
  OSS_EXPECTS(best != nullptr, "boss_solve: no feasible entry at the root");

  Solution s;
  s.kind = InstanceKind::boolean;
  s.plan = best->plan;
  s.time_used = best->time;
  s.predicted_reward = utility;
  s.delta_u_bound = boss_delta_bound(inst, grids);
  s.grids_used = {{"eps_p", grids.p().eps()},
                  {"eps_f", grids.f().eps()},
                  {"eps_g", grids.g().eps()},
                  {"eps_r", grids.r().eps()}};
  s.root_table_cells = table.size();
  s.solver_millis = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - start)
                        .count();
  return s;
}

Solution boss_solve(const Instance& inst, double epsilon, const CompileOptions& opts,
                    CompileStats* stats) {
  require_boolean(inst);
  return boss_solve(inst, BossGrids::recipe(inst, epsilon), opts, stats);
}

}  // namespace oss
