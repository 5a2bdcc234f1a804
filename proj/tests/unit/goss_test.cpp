#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "fixtures.hpp"
#include "oss/goss.hpp"
#include "oss/operators.hpp"
#include "oss/oracle.hpp"

namespace oss {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
const RewardRange kRange{1.0, 100.0};

TEST(GossPsiLeaf, Examples) {
  const GaussianParams quiet{1.0, 1.0, 1.0, std::nullopt};
  const auto none = goss_psi_leaf(3.0, 0, quiet, false, kRange);
  EXPECT_EQ(none.f, 0.0);
  EXPECT_EQ(none.r, 1.0);
  const auto one = goss_psi_leaf(0.0, 1, quiet, true, kRange);
  EXPECT_DOUBLE_EQ(one.f, 1.0);
  EXPECT_EQ(one.r, 0.0);
  const GaussianParams sharp{1.0, 1.0, 1.5, std::nullopt};
  EXPECT_DOUBLE_EQ(goss_psi_leaf(0.0, 2, sharp, false, kRange).f, 3.0);
}

TEST(GossPsiInternal, NoEvidence) {
  const std::vector<GaussianEdge> edges{{0.81, 1.25}, {0.49, 0.5}};
  const std::vector<GossQuality> kids{{0.0, 1.0}, {0.0, 1.0}};
  std::vector<double> child_p(2);
  const double p = 2.0;
  const auto q =
      goss_psi_internal(p, 0, {0.0, 0.5, 0.0, std::nullopt}, false, edges, kids, child_p, kRange);
  EXPECT_EQ(q.f, 0.0);
  // Var(child) = sigma2 + a^2 / p
  EXPECT_NEAR(child_p[0], 1.0 / (1.0 / 1.25 + 0.81 / p), 1e-12);
  EXPECT_NEAR(child_p[1], 1.0 / (1.0 / 0.5 + 0.49 / p), 1e-12);
}

TEST(GossPsiInternal, ChainPosteriorVariance) {
  const Instance inst = testing::gaussian_chain(2, 1);
  const ObservationPlan plan = parse_subset("2");
  const auto ev = goss_evaluate_plan(inst, plan);
  EXPECT_NEAR(ev.nodes[0].q.f, 0.5, 1e-12);
  EXPECT_NEAR(ev.nodes[0].posterior_precision(), 1.5, 1e-12);
  const auto oracle = gaussian_posterior_precisions(inst, plan);
  EXPECT_NEAR(1.0 / oracle[0], 2.0 / 3.0, 1e-12);
}

TEST(GossPsiInternal, RewardIsMin) {
  const std::vector<GaussianEdge> edges{{1.0, 1.0}, {1.0, 1.0}};
  const std::vector<GossQuality> kids{{0.0, 0.2}, {0.0, 0.9}};
  std::vector<double> child_p(2);
  const auto q = goss_psi_internal(std::pow(10.0, 1.0), 0, {0.0, 1.0, 0.0, std::nullopt}, true,
                                   edges, kids, child_p, kRange);
  EXPECT_DOUBLE_EQ(q.r, 0.2);
  const std::vector<GossQuality> high{{0.0, 0.7}, {0.0, 0.9}};
  EXPECT_NEAR(goss_psi_internal(std::pow(10.0, 1.0), 0, {0.0, 1.0, 0.0, std::nullopt}, true,
                                edges, high, child_p, kRange)
                  .r,
              0.5, 1e-12);
}

TEST(GossPsiInternal, AlternateRuleUsesPrintedForm) {
  const std::vector<GaussianEdge> edges{{0.25, 2.0}, {4.0, 0.5}};
  const std::vector<GossQuality> kids{{3.0, 1.0}, {1.0, 1.0}};
  std::vector<double> child_p(2);
  const double p = 1.5;
  const auto q = goss_psi_internal(p, 0, {0.0, 1.0, 0.0, std::nullopt}, false, edges, kids,
                                   child_p, kRange, MessageRule::alternate);
  const double up0 = precision_join(3.0, 2.0) / 0.25, up1 = precision_join(1.0, 0.5) / 4.0;
  EXPECT_NEAR(q.f, up0 + up1, 1e-12);
  EXPECT_NEAR(child_p[0], precision_join(2.0, 0.25 * (p + up1)), 1e-12);
}

TEST(GossEvaluate, ZeroWeightEdge) {
  auto spec = testing::gaussian_chain(3, 3).spec();
  std::get<GaussianParams>(spec.nodes[1].params).a = 0.0;
  const Instance inst(std::move(spec));
  const ObservationPlan plan = parse_subset("2,3");
  const auto ev = goss_evaluate_plan(inst, plan);
  const auto oracle = gaussian_posterior_precisions(inst, plan);
  for (const Node& node : inst.nodes()) {
    EXPECT_NEAR(ev.nodes[node.id.index()].posterior_precision(), oracle[node.id.index()],
                1e-12 * oracle[node.id.index()]);
  }
  EXPECT_NEAR(ev.nodes[1].p, 1.0, 1e-15);
}

TEST(GossEvaluate, RandomPlansMatchConditioning) {
  std::mt19937_64 rng(19);
  for (int i = 0; i < 60; ++i) {
    const Instance inst = testing::random_instance(InstanceKind::gaussian, rng, 2, 8);
    const ObservationPlan plan = testing::random_plan(inst, rng);
    const auto ev = goss_evaluate_plan(inst, plan);
    const auto oracle = gaussian_posterior_precisions(inst, plan);
    for (const Node& node : inst.nodes()) {
      const double want = oracle[node.id.index()];
      EXPECT_NEAR(ev.nodes[node.id.index()].posterior_precision(), want, 1e-9 * want);
    }
    EXPECT_NEAR(ev.reward, goss_eval_exact(inst, plan).exact_reward, 1e-9);
  }
}

TEST(GossCompile, ZeroBudget) {
  const Instance inst = testing::gaussian_chain(3, 0);
  const GossGrids grids = GossGrids::recipe(inst, 0.1);
  const ProfileTable table = goss_compile(inst, grids);
  table.for_each([](const CondPerf& cp) { EXPECT_TRUE(cp.plan.empty()); });
  const Solution s = goss_solve(inst, grids);
  EXPECT_TRUE(s.plan.empty());
  EXPECT_NEAR(s.predicted_reward, goss_eval_exact(inst, s.plan).exact_reward, s.delta_u_bound);
}

TEST(GossCompile, SingleObservedRoot) {
  Instance::Spec spec;
  spec.kind = InstanceKind::gaussian;
  spec.budget = 1;
  spec.reward_range = kRange;
  spec.nodes.push_back(
      testing::gaussian_node(1, std::nullopt, {0.0, 1.0, 1.0, std::nullopt}, true, true, 1));
  const Instance inst(std::move(spec));
  const GossGrids grids = GossGrids::recipe(inst, 0.1);
  const ProfileTable table = goss_compile(inst, grids);
  const std::uint32_t pc = grids.p().discretize(1.0);
  const double p_rep = grids.p().representative(pc);
  // The node's own evidence m * theta enters exactly; only the external input is a representative.
  CellCoord c;
  c.cells = {pc, grids.f().discretize(1.0),
             grids.r().discretize(logbar(kRange.low, kRange.high, p_rep + 1.0)), 0};
  const CondPerf* cp = table.find(c);
  ASSERT_NE(cp, nullptr);
  EXPECT_EQ(cp->plan.count(kRoot), 1u);
}

TEST(GossCompile, TableCap) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 5; ++i) {
    const Instance inst =
        testing::with_auto_range(testing::random_instance(InstanceKind::gaussian, rng, 4, 8));
    const GossGrids grids = GossGrids::recipe(inst, 0.1);
    CompileStats stats;
    goss_compile(inst, grids, {}, &stats);
    const double h = std::max<std::size_t>(tree_stats(inst).h, 1);
    for (const auto& t : stats.tables) {
      EXPECT_LE(static_cast<double>(t.entries), t.capacity);
      EXPECT_LE(t.capacity, std::ceil(h / 0.1 - 1e-9) * std::ceil(h / 0.1 - 1e-9) * 10 + 1e-9);
    }
  }
}

TEST(GossUtility, Cases) {
  const GossGrids grids(0.1, 0.1, 0.1, kRange);
  CondPerf cp;
  cp.coord.cells = {grids.p().discretize(2.0), 3, 4, 0};
  EXPECT_NEAR(goss_utility(cp, 2.0, 0, grids), grids.r().representative(4), 1e-15);
  EXPECT_EQ(goss_utility(cp, 50.0, 0, grids), kNegInf);
  cp.time = 2;
  EXPECT_EQ(goss_utility(cp, 2.0, 1, grids), kNegInf);
}

TEST(GossSolve, ChainMatchesBruteForce) {
  const Instance inst = testing::gaussian_chain(3, 1, {0.1, 10.0});
  const Solution s = goss_solve(inst, 0.05);
  const SubsetEval best = brute_force_optimum(inst);
  EXPECT_EQ(s.plan, best.plan);
}

TEST(GossSolve, GapWithinBound) {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 15; ++i) {
    const Instance inst =
        testing::with_auto_range(testing::random_instance(InstanceKind::gaussian, rng, 2, 7));
    const SubsetEval best = brute_force_optimum(inst);
    for (double eps : {0.2, 0.1}) {
      const Solution s = goss_solve(inst, eps);
      EXPECT_LE(s.time_used, inst.budget());
      const double gap = best.exact_reward - goss_eval_exact(inst, s.plan).exact_reward;
      EXPECT_GE(gap, -1e-12);
      EXPECT_LE(gap, s.delta_u_bound + 1e-9);
    }
  }
}

TEST(GossSolve, ThreadCountDoesNotChangeResult) {
  std::mt19937_64 rng(37);
  for (int i = 0; i < 5; ++i) {
    const Instance inst =
        testing::with_auto_range(testing::random_instance(InstanceKind::gaussian, rng, 4, 9));
    const GossGrids grids = GossGrids::recipe(inst, 0.1);
    EXPECT_TRUE(goss_compile(inst, grids, {.threads = 1}) ==
                goss_compile(inst, grids, {.threads = 3}));
  }
}

TEST(GossDeltaBound, Formula) {
  const Instance inst = testing::gaussian_chain(4, 1);
  const GossGrids grids(0.01, 0.02, 0.05, inst.reward_range());
  EXPECT_NEAR(goss_delta_bound(inst, grids), 3 * 0.01 + 3 * 0.02 + 0.05, 1e-15);
}

}  // namespace
}  // namespace oss
