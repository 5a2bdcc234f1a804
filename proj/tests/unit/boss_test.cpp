#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "fixtures.hpp"
#include "oss/boss.hpp"
#include "oss/operators.hpp"
#include "oss/oracle.hpp"

namespace oss {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

TEST(BossPsiLeaf, NoObservationKeepsPrior) {
  const BooleanParams params{0.3, 0.3, 0.2, 0.0};
  for (double p : {0.0, 0.25, 0.9}) {
    const auto q = boss_psi_leaf(p, 0, params, true);
    EXPECT_DOUBLE_EQ(q.f, 1.0);
    EXPECT_DOUBLE_EQ(q.g, 1.0);
    EXPECT_NEAR(q.r, p, 1e-15);
  }
}

TEST(BossPsiLeaf, NonHypothesisHasZeroReward) {
  EXPECT_EQ(boss_psi_leaf(0.7, 0, {0.3, 0.3, 1.0, 0.0}, false).r, 0.0);
}

TEST(BossPsiLeaf, NoisyTest) {
  const auto q = boss_psi_leaf(0.5, 1, {0.5, 0.5, 0.1, 0.0}, true);
  EXPECT_NEAR(q.f, 0.1, 1e-15);
  EXPECT_NEAR(q.g, 1.0, 1e-15);
  EXPECT_NEAR(q.r, 0.05 / 0.55, 1e-12);
}

TEST(BossPsiLeaf, ImpossibleEvidenceGivesZero) {
  const auto q = boss_psi_leaf(1.0, 1, {1.0, 1.0, 0.0, 0.0}, true);
  EXPECT_EQ(q.f, 0.0);
  EXPECT_EQ(q.r, 0.0);
}

TEST(BossPsiInternal, NoEvidencePropagatesPrior) {
  const std::vector<BooleanEdge> edges{{0.7, 0.2}, {0.4, 0.1}};
  const std::vector<BossQuality> kids{{1, 1, 0}, {1, 1, 0}};
  std::vector<double> child_p(2);
  const double p = 0.35;
  const auto q = boss_psi_internal(p, 0, {0.5, 0.5, 1.0, 0.0}, false, edges, kids, child_p);
  EXPECT_DOUBLE_EQ(q.f, 1.0);
  EXPECT_DOUBLE_EQ(q.g, 1.0);
  EXPECT_EQ(q.r, 0.0);
  EXPECT_NEAR(child_p[0], 0.7 * p + 0.2 * (1 - p), 1e-15);
  EXPECT_NEAR(child_p[1], 0.4 * p + 0.1 * (1 - p), 1e-15);
}

TEST(BossPsiInternal, RewardIsMax) {
  const std::vector<BooleanEdge> edges{{0.5, 0.5}, {0.5, 0.5}};
  const std::vector<BossQuality> kids{{1, 1, 0.3}, {1, 1, 0.9}};
  std::vector<double> child_p(2);
  const auto q = boss_psi_internal(0.5, 0, {0.5, 0.5, 1.0, 0.0}, true, edges, kids, child_p);
  EXPECT_DOUBLE_EQ(q.r, 0.9);
  const std::vector<BossQuality> low{{1, 1, 0.3}, {1, 1, 0.1}};
  EXPECT_DOUBLE_EQ(boss_psi_internal(0.5, 0, {0.5, 0.5, 1.0, 0.0}, true, edges, low, child_p).r,
                   0.5);
}

TEST(BossPsiInternal, ChildExternalIsPosterior) {
  // Root with two children; child 2 carries evidence. Pr(X3 = 1 | all negative) must come out
  // of the message to child 3.
  const std::vector<BooleanEdge> edges{{0.8, 0.3}, {0.6, 0.1}};
  const std::vector<BossQuality> kids{{0.2, 0.9, 0.0}, {1, 1, 0}};
  std::vector<double> child_p(2);
  const double p = 0.4;
  boss_psi_internal(p, 0, {p, p, 1.0, 0.0}, true, edges, kids, child_p);
  const double a = lerp(0.2, 0.9, 0.8), b = lerp(0.2, 0.9, 0.3);
  const double expected = (0.6 * p * a + 0.1 * (1 - p) * b) / (p * a + (1 - p) * b);
  EXPECT_NEAR(child_p[1], expected, 1e-15);

  boss_psi_internal(p, 0, {p, p, 1.0, 0.0}, true, edges, kids, child_p, MessageRule::alternate);
  EXPECT_NEAR(child_p[1], lerp(0.6, 0.1, p * a) / lerp(a, b, p), 1e-15);
}

TEST(BossEvaluate, PairMatchesEnumeration) {
  const Instance inst = testing::boolean_pair();
  const ObservationPlan plan = parse_subset("2");
  const auto ev = boss_evaluate_plan(inst, plan);
  EXPECT_NEAR(ev.nodes[0].q.f, 0.3, 1e-15);
  EXPECT_NEAR(ev.nodes[0].q.g, 0.8, 1e-15);
  const auto report = boss_evidence_report(inst, plan);
  EXPECT_NEAR(report.negative_given_root_true, 0.3, 1e-12);
  EXPECT_NEAR(report.negative_given_root_false, 0.8, 1e-12);
  EXPECT_NEAR(ev.expected_reward, report.expected_reward, 1e-12);
}

TEST(BossEvaluate, RandomPlansMatchEnumeration) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 60; ++i) {
    const Instance inst = testing::random_instance(InstanceKind::boolean, rng, 2, 8, 0.05);
    const ObservationPlan plan = testing::random_plan(inst, rng);
    const auto ev = boss_evaluate_plan(inst, plan);
    const auto report = boss_evidence_report(inst, plan);
    EXPECT_NEAR(ev.nodes[0].q.f, report.negative_given_root_true, 1e-9);
    EXPECT_NEAR(ev.nodes[0].q.g, report.negative_given_root_false, 1e-9);
    for (const Node& node : inst.nodes()) {
      const auto& v = ev.nodes[node.id.index()];
      const double denom = lerp(v.q.f, v.q.g, v.p);
      const double posterior = denom > 0.0 ? v.p * v.q.f / denom : 0.0;
      EXPECT_NEAR(posterior, report.posterior_all_negative[node.id.index()], 1e-9);
    }
  }
}

TEST(BossCompile, ZeroBudgetKeepsOnlyEmptyPlan) {
  const Instance inst = testing::single_boolean_root(0.6, 0.0, 1, 0);
  const BossGrids grids = BossGrids::recipe(inst, 0.1);
  const ProfileTable table = boss_compile(inst, grids);
  table.for_each([](const CondPerf& cp) { EXPECT_TRUE(cp.plan.empty()); });
  const Solution s = boss_solve(inst, grids);
  EXPECT_TRUE(s.plan.empty());
  EXPECT_NEAR(s.predicted_reward, 0.6, s.delta_u_bound);
}

TEST(BossCompile, ObservedRootEntry) {
  const Instance inst = testing::single_boolean_root(0.6, 0.0, 1, 1);
  const BossGrids grids = BossGrids::recipe(inst, 0.1);
  const ProfileTable table = boss_compile(inst, grids);
  CellCoord c;
  c.cells = {grids.p().discretize(0.6), grids.f().discretize(0.0), grids.g().discretize(1.0),
             grids.r().discretize(0.0)};
  const CondPerf* cp = table.find(c);
  ASSERT_NE(cp, nullptr);
  EXPECT_EQ(cp->plan.count(kRoot), 1u);
  EXPECT_EQ(cp->time, 1);
  EXPECT_LE(static_cast<double>(table.size()), table.capacity());
}

TEST(BossUtility, Cases) {
  const BossGrids grids(0.1, 0.1, 0.1, 0.1);
  CondPerf cp;
  cp.coord.cells = {grids.p().discretize(0.6), grids.f().discretize(1.0),
                    grids.g().discretize(1.0), grids.r().discretize(0.6)};
  EXPECT_NEAR(boss_utility(cp, 0.6, 0, grids),
              lerp(grids.r().representative(cp.q_cell(2)), 1.0,
                   lerp(grids.f().representative(9), grids.g().representative(9), 0.6)),
              1e-12);
  EXPECT_EQ(boss_utility(cp, 0.1, 0, grids), kNegInf);
  cp.time = 3;
  EXPECT_EQ(boss_utility(cp, 0.6, 2, grids), kNegInf);

  // Representatives never reach 0 or 1 exactly; the limits are approached within half a step.
  const BossGrids fine(0.1, 1e-6, 1e-6, 0.1);
  CondPerf none;
  none.coord.cells = {fine.p().discretize(0.6), fine.f().discretize(0.0),
                      fine.g().discretize(0.0), fine.r().discretize(0.3)};
  EXPECT_NEAR(boss_utility(none, 0.6, 0, fine), 1.0, 1e-5);
}

TEST(BossSolve, TwoIndependentHypotheses) {
  const Instance inst = testing::two_independent_hypotheses(1);
  const Solution s = boss_solve(inst, 0.05);
  EXPECT_EQ(s.plan.total_observations(), 1u);
  EXPECT_NEAR(boss_eval_exact(inst, s.plan).exact_reward, 0.8, 1e-9);
  EXPECT_LE(s.time_used, inst.budget());
}

TEST(BossSolve, ZeroBudget) {
  const Instance inst = testing::two_independent_hypotheses(0);
  const Solution s = boss_solve(inst, 0.1);
  EXPECT_TRUE(s.plan.empty());
  EXPECT_EQ(s.time_used, 0);
}

TEST(BossSolve, GapWithinBound) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 15; ++i) {
    const Instance inst = testing::random_instance(InstanceKind::boolean, rng, 2, 7);
    const SubsetEval best = brute_force_optimum(inst);
    for (double eps : {0.2, 0.1}) {
      const Solution s = boss_solve(inst, eps);
      EXPECT_LE(s.time_used, inst.budget());
      const double gap = best.exact_reward - boss_eval_exact(inst, s.plan).exact_reward;
      EXPECT_GE(gap, -1e-12);
      EXPECT_LE(gap, s.delta_u_bound + 1e-9);
      EXPECT_LE(s.delta_u_bound, eps + 1e-12);
    }
  }
}

TEST(BossSolve, ThreadCountDoesNotChangeResult) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 5; ++i) {
    const Instance inst = testing::random_instance(InstanceKind::boolean, rng, 4, 9);
    const BossGrids grids = BossGrids::recipe(inst, 0.1);
    const ProfileTable one = boss_compile(inst, grids, {.threads = 1});
    const ProfileTable four = boss_compile(inst, grids, {.threads = 4});
    EXPECT_TRUE(one == four);
  }
}

TEST(BossSolve, ZeroCostNodesAreAlwaysObserved) {
  auto spec = testing::two_independent_hypotheses(0).spec();
  spec.nodes[1].cost = 0;
  const Instance inst(std::move(spec));
  const Solution s = boss_solve(inst, 0.1);
  EXPECT_EQ(s.plan.count(NodeId(2)), 1u);
}

TEST(BossDeltaBound, Formula) {
  const Instance inst = testing::boolean_pair();
  const BossGrids grids(0.01, 0.02, 0.03, 0.04);
  EXPECT_NEAR(boss_delta_bound(inst, grids), 1 * 0.01 + 2 * 2 * 0.03 + 0.04, 1e-15);
  const BossGrids recipe = BossGrids::recipe(inst, 0.3);
  EXPECT_NEAR(boss_delta_bound(inst, recipe), 0.3, 1e-12);
}

}  // namespace
}  // namespace oss
