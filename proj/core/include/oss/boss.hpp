/// \file boss.hpp
/// Boolean observation subset selection: maximise the expected largest
/// posterior among hypothesis nodes.
///
/// Each subtree is summarised by (f, g, r): the likelihood of all-negative
/// evidence inside the subtree given its root is 1 (f) or 0 (g), and the
/// largest hypothesis posterior inside the subtree under all-negative
/// evidence (r). The external input p is the posterior of the subtree root
/// given all-negative evidence outside it. With false-positive-free tests a
/// single positive reading certifies its hypothesis, so the expected reward
/// of a plan is lerp(r, 1, Pr(all negative)).

#pragma once

#include <span>

#include "oss/compile.hpp"
#include "oss/grid.hpp"
#include "oss/model.hpp"
#include "oss/profile_table.hpp"
#include "oss/solution.hpp"

namespace oss {

struct BossQuality {
  double f = 1.0;
  double g = 1.0;
  double r = 0.0;
};

/// Conditional probabilities on the edge into a child.
struct BooleanEdge {
  double alpha = 0.0;
  double beta = 0.0;
};

class BossGrids {
 public:
  BossGrids(double eps_p, double eps_f, double eps_g, double eps_r);

  /// eps_p = e/(3h), eps_f = eps_g = e/(6n), eps_r = e/3 with h := max(h, 1).
  static BossGrids recipe(const Instance& inst, double epsilon);

  const GridSpec& p() const { return p_; }
  const GridSpec& f() const { return f_; }
  const GridSpec& g() const { return g_; }
  const GridSpec& r() const { return r_; }

 private:
  GridSpec p_, f_, g_, r_;
};

BossQuality boss_psi_leaf(double p, std::uint32_t m, const BooleanParams& node, bool hypothesis);

/// Combines child summaries at a node. Writes the external input of child i
/// into `child_p[i]`. Quotients with a zero denominator are 0.
BossQuality boss_psi_internal(double p, std::uint32_t m, const BooleanParams& node,
                              bool hypothesis, std::span<const BooleanEdge> edges,
                              std::span<const BossQuality> children, std::span<double> child_p,
                              MessageRule rule = MessageRule::consistent);

struct BossNodeValues {
  double p = 0.0;
  BossQuality q;
};

/// Undiscretised recursion for one fixed plan.
struct BossPlanEvaluation {
  std::vector<BossNodeValues> nodes;  ///< indexed by NodeId::index()
  double negative_probability = 0.0;  ///< lerp(f1, g1, alpha1)
  double expected_reward = 0.0;       ///< lerp(r1, 1, negative_probability)
};

BossPlanEvaluation boss_evaluate_plan(const Instance& inst, const ObservationPlan& plan,
                                      MessageRule rule = MessageRule::consistent);

/// Root table over (p, f, g, r) cells.
ProfileTable boss_compile(const Instance& inst, const BossGrids& grids,
                          const CompileOptions& opts = {}, CompileStats* stats = nullptr);

/// lerp(r, 1, lerp(f, g, alpha1)) on cell representatives, or -infinity when
/// the entry is not at alpha1's p-cell or is over budget.
double boss_utility(const CondPerf& cp, double alpha1, std::int64_t budget,
                    const BossGrids& grids);

/// h*eps_p + 2n*max(eps_f, eps_g) + eps_r + n*zeta_max, with h := max(h, 1).
double boss_delta_bound(const Instance& inst, const BossGrids& grids);

Solution boss_solve(const Instance& inst, const BossGrids& grids, const CompileOptions& opts = {},
                    CompileStats* stats = nullptr);
Solution boss_solve(const Instance& inst, double epsilon, const CompileOptions& opts = {},
                    CompileStats* stats = nullptr);

}  // namespace oss
