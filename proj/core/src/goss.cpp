#include "oss/goss.hpp"

#include <algorithm>
#include <chrono>
#include <limits>

#include "oss/error.hpp"
#include "oss/operators.hpp"
#include "tree_compiler.hpp"

namespace oss {

GossGrids::GossGrids(double eps_p, double eps_f, double eps_r, RewardRange range)
    : p_(GridSpec::log_projected(eps_p, range)),
      f_(GridSpec::log_projected(eps_f, range)),
      r_(GridSpec::uniform(eps_r)),
      range_(range) {}

GossGrids GossGrids::recipe(const Instance& inst, double epsilon) {
  OSS_EXPECTS(epsilon > 0.0 && epsilon < 1.0, "epsilon must lie in (0, 1)");
  const double h = static_cast<double>(std::max<std::size_t>(tree_stats(inst).h, 1));
  return GossGrids(epsilon / h, epsilon / h, epsilon, inst.reward_range());
}

GossQuality goss_psi_leaf(double p, std::uint32_t m, const GaussianParams& node, bool hypothesis,
                          RewardRange range) {
  double unused = 0.0;
  return goss_psi_internal(p, m, node, hypothesis, {}, {}, std::span<double>(&unused, 0), range);
}

namespace {

// Precision that child evidence `f` contributes to the parent.
double upward(double f, const GaussianEdge& e, MessageRule rule) {
  if (rule == MessageRule::consistent) return e.alpha * precision_join(f, e.beta);
  return e.alpha > 0.0 ? precision_join(f, e.beta) / e.alpha : 0.0;
}

// Precision of the child given parent-side precision `outside`.
double downward(double outside, const GaussianEdge& e, MessageRule rule) {
  if (rule == MessageRule::consistent) {
    if (e.alpha == 0.0) return e.beta;
    const double denom = outside + e.alpha * e.beta;
    return denom > 0.0 ? e.beta * outside / denom : 0.0;
  }
  return precision_join(e.beta, e.alpha * outside);
}

}  // namespace

GossQuality goss_psi_internal(double p, std::uint32_t m, const GaussianParams& node,
                              bool hypothesis, std::span<const GaussianEdge> edges,
                              std::span<const GossQuality> children, std::span<double> child_p,
                              RewardRange range, MessageRule rule) {
  const std::size_t k = children.size();
  OSS_EXPECTS(edges.size() == k && child_p.size() == k, "goss_psi_internal: arity mismatch");
  OSS_EXPECTS(p >= 0.0, "goss_psi_internal: negative external precision");

  const double own = static_cast<double>(m) * node.theta;
  GossQuality q{own, 1.0};
  for (std::size_t i = 0; i < k; ++i) q.f += upward(children[i].f, edges[i], rule);

  if (hypothesis) q.r = logbar(range.low, range.high, p + q.f);
  for (std::size_t i = 0; i < k; ++i) q.r = std::min(q.r, children[i].r);

  for (std::size_t i = 0; i < k; ++i) {
    double outside = p + own;
    for (std::size_t j = 0; j < k; ++j) {
      if (j != i) outside += upward(children[j].f, edges[j], rule);
    }
    child_p[i] = downward(outside, edges[i], rule);
  }
  return q;
}

namespace {

struct GossTraits {
  using Quality = GossQuality;
  static constexpr std::size_t kInside = 1;

  const Instance& inst;
  const GossGrids* grids_;  // null when only evaluating plans
  MessageRule rule;
  std::vector<std::vector<GaussianEdge>> edges;

  GossTraits(const Instance& i, const GossGrids* g, MessageRule r)
      : inst(i), grids_(g), rule(r), edges(i.size()) {
    for (const Node& node : inst.nodes()) {
      for (NodeId c : inst.children(node.id)) {
        const auto& cp = inst.gaussian(c);
        edges[node.id.index()].push_back({cp.alpha(), cp.beta()});
      }
    }
  }

  std::vector<GridSpec> grids() const { return {grids_->p(), grids_->f(), grids_->r()}; }
  Quality child_quality(const std::array<double, 1>& in) const { return {in[0], 1.0}; }
  Quality local(NodeId s, double p, std::uint32_t m, std::span<const Quality> kids,
                std::span<double> child_p) const {
    return goss_psi_internal(p, m, inst.gaussian(s), inst.node(s).hypothesis, edges[s.index()],
                             kids, child_p, inst.reward_range(), rule);
  }
  std::array<double, 1> inside(const Quality& q) const { return {q.f}; }
  double r(const Quality& q) const { return q.r; }
  double fold_r(double acc, double child_r) const { return std::min(acc, child_r); }
};

void require_gaussian(const Instance& inst) {
  OSS_EXPECTS(inst.kind() == InstanceKind::gaussian, "gaussian solver needs a gaussian instance");
}

}  // namespace

GossPlanEvaluation goss_evaluate_plan(const Instance& inst, const ObservationPlan& plan,
                                      MessageRule rule) {
  require_gaussian(inst);
  inst.plan_time(plan);
  GossTraits traits(inst, nullptr, rule);

  GossPlanEvaluation out;
  out.nodes.resize(inst.size());
  std::vector<GossQuality> kids;
  std::vector<double> child_p;
  auto gather = [&](NodeId s) {
    kids.clear();
    for (NodeId c : inst.children(s)) kids.push_back(out.nodes[c.index()].q);
    child_p.assign(kids.size(), 0.0);
  };

  for (NodeId s : inst.postorder()) {
    gather(s);
    out.nodes[s.index()].q = traits.local(s, 0.0, plan.count(s), kids, child_p);
  }
  out.nodes[kRoot.index()].p = inst.gaussian(kRoot).beta();
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
  out.reward = out.nodes[kRoot.index()].q.r;
  return out;
}

ProfileTable goss_compile(const Instance& inst, const GossGrids& grids, const CompileOptions& opts,
                          CompileStats* stats) {
  require_gaussian(inst);
  GossTraits traits(inst, &grids, opts.rule);
  return detail::compile_tree(inst, traits, opts, stats);
}

double goss_utility(const CondPerf& cp, double beta1, std::int64_t budget, const GossGrids& grids) {
  if (cp.p_cell() != grids.p().discretize(beta1) || cp.time > budget) {
    return -std::numeric_limits<double>::infinity();
  }
  return grids.r().representative(cp.q_cell(1));
}

double goss_delta_bound(const Instance& inst, const GossGrids& grids) {
  const double h = static_cast<double>(std::max<std::size_t>(tree_stats(inst).h, 1));
  return h * grids.p().eps() + h * grids.f().eps() + grids.r().eps();
}

Solution goss_solve(const Instance& inst, const GossGrids& grids, const CompileOptions& opts,
                    CompileStats* stats) {
  const auto start = std::chrono::steady_clock::now();
  const ProfileTable table = goss_compile(inst, grids, opts, stats);
  const double beta1 = inst.gaussian(kRoot).beta();
  auto [best, utility] = detail::select_best(table, [&](const CondPerf& cp) {
    return goss_utility(cp, beta1, inst.budget(), grids);
  });
  OSS_EXPECTS(best != nullptr, "goss_solve: no feasible entry at the root");

  Solution s;
  s.kind = InstanceKind::gaussian;
  s.plan = best->plan;
  s.time_used = best->time;
  s.predicted_reward = utility;
  s.delta_u_bound = goss_delta_bound(inst, grids);
  s.grids_used = {{"eps_p", grids.p().eps()}, {"eps_f", grids.f().eps()}, {"eps_r", grids.r().eps()}};
  s.root_table_cells = table.size();
  s.solver_millis = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - start)
                        .count();
  return s;
}

Solution goss_solve(const Instance& inst, double epsilon, const CompileOptions& opts,
                    CompileStats* stats) {
  require_gaussian(inst);
  return goss_solve(inst, GossGrids::recipe(inst, epsilon), opts, stats);
}

}  // namespace oss
